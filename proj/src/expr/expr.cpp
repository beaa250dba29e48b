// Copyright 2026 The GoML Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "goml/expr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "goml/core/error.hpp"

namespace goml::expr {

bool is_unary(Op op) { return op >= Op::kNeg && op <= Op::kAbs; }
bool is_binary(Op op) { return op >= Op::kAdd && op <= Op::kPow; }

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::kExp: return "exp";
    case Op::kLn: return "ln";
    case Op::kSqrt: return "sqrt";
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kAbs: return "abs";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kPow: return "^";
    default: return "?";
  }
}

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::kNeg: return -a;
    case Op::kExp: return std::exp(a);
    case Op::kLn:
      if (!(a > 0.0)) throw DomainError("ln of nonpositive value " + std::to_string(a));
      return std::log(a);
    case Op::kSqrt:
      if (!(a >= 0.0)) throw DomainError("sqrt of negative value " + std::to_string(a));
      return std::sqrt(a);
    case Op::kSin: return std::sin(a);
    case Op::kCos: return std::cos(a);
    case Op::kAbs: return std::fabs(a);
    default: throw Error("not a unary operator");
  }
}

double apply_pow(double base, double exponent, bool constant_exponent) {
  if (constant_exponent) {
    const bool integral = std::nearbyint(exponent) == exponent;
    if (base < 0.0 && !integral) throw DomainError("negative base with fractional exponent");
    if (base == 0.0 && exponent < 0.0) throw DomainError("zero base with negative exponent");
  } else if (!(base > 0.0)) {
    throw DomainError("variable exponent requires a positive base");
  }
  return std::pow(base, exponent);
}

double apply_binary(Op op, double a, double b, bool constant_exponent) {
  switch (op) {
    case Op::kAdd: return a + b;
    case Op::kSub: return a - b;
    case Op::kMul: return a * b;
    case Op::kDiv:
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    case Op::kPow: return apply_pow(a, b, constant_exponent);
    default: throw Error("not a binary operator");
  }
}

NodePtr make_node(Op op, double value, int var, NodePtr lhs, NodePtr rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->var = var;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

}  // namespace

// Post-order instruction list; slot i holds the value of instruction i.
struct Program {
  struct Instr {
    Op op;
    double value;
    int var;
    int lhs;
    int rhs;
    bool constant_exponent;
  };
  std::vector<Instr> code;
  int max_var = -1;

  int emit(const NodePtr& node, std::unordered_map<const Node*, int>& seen) {
    if (auto it = seen.find(node.get()); it != seen.end()) return it->second;
    Instr instr{node->op, node->value, node->var, -1, -1, false};
    if (node->lhs) instr.lhs = emit(node->lhs, seen);
    if (node->rhs) {
      instr.rhs = emit(node->rhs, seen);
      instr.constant_exponent = node->rhs->op == Op::kConstant;
    }
    if (node->op == Op::kVariable) max_var = std::max(max_var, node->var);
    code.push_back(instr);
    const int slot = static_cast<int>(code.size()) - 1;
    seen.emplace(node.get(), slot);
    return slot;
  }

  void forward(std::span<const double> x, std::vector<double>& slots) const {
    if (max_var >= static_cast<int>(x.size())) {
      throw EvaluationError("point has " + std::to_string(x.size()) +
                            " coordinates but expression references x" + std::to_string(max_var));
    }
    slots.resize(code.size());
    for (std::size_t i = 0; i < code.size(); ++i) {
      const Instr& in = code[i];
      switch (in.op) {
        case Op::kConstant: slots[i] = in.value; break;
        case Op::kVariable: slots[i] = x[static_cast<std::size_t>(in.var)]; break;
        default:
          if (is_unary(in.op)) {
            slots[i] = apply_unary(in.op, slots[static_cast<std::size_t>(in.lhs)]);
          } else {
            slots[i] = apply_binary(in.op, slots[static_cast<std::size_t>(in.lhs)],
                                    slots[static_cast<std::size_t>(in.rhs)], in.constant_exponent);
          }
      }
    }
  }

  void backward(const std::vector<double>& slots, std::span<double> gradient) const {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    std::vector<double> adj(code.size(), 0.0);
    adj.back() = 1.0;
    for (std::size_t k = code.size(); k-- > 0;) {
      const Instr& in = code[k];
      const double bar = adj[k];
      if (bar == 0.0) continue;
      const auto l = static_cast<std::size_t>(in.lhs);
      const auto r = static_cast<std::size_t>(in.rhs);
      switch (in.op) {
        case Op::kConstant: break;
        case Op::kVariable: gradient[static_cast<std::size_t>(in.var)] += bar; break;
        case Op::kNeg: adj[l] -= bar; break;
        case Op::kExp: adj[l] += bar * slots[k]; break;
        case Op::kLn: adj[l] += bar / slots[l]; break;
        case Op::kSqrt:
          if (slots[k] == 0.0) throw DomainError("sqrt is not differentiable at 0");
          adj[l] += bar * 0.5 / slots[k];
          break;
        case Op::kSin: adj[l] += bar * std::cos(slots[l]); break;
        case Op::kCos: adj[l] -= bar * std::sin(slots[l]); break;
        case Op::kAbs:
          if (slots[l] == 0.0) throw DomainError("abs is not differentiable at 0");
          adj[l] += slots[l] > 0.0 ? bar : -bar;
          break;
        case Op::kAdd:
          adj[l] += bar;
          adj[r] += bar;
          break;
        case Op::kSub:
          adj[l] += bar;
          adj[r] -= bar;
          break;
        case Op::kMul:
          adj[l] += bar * slots[r];
          adj[r] += bar * slots[l];
          break;
        case Op::kDiv:
          adj[l] += bar / slots[r];
          adj[r] -= bar * slots[l] / (slots[r] * slots[r]);
          break;
        case Op::kPow: {
          const double base = slots[l];
          const double exponent = slots[r];
          if (exponent != 0.0) {
            if (base == 0.0 && exponent < 1.0) {
              throw DomainError("power is not differentiable at base 0");
            }
            adj[l] += bar * exponent * std::pow(base, exponent - 1.0);
          }
          if (!in.constant_exponent) adj[r] += bar * slots[k] * std::log(base);
          break;
        }
      }
    }
  }
};

Expr::Expr() : Expr(make_node(Op::kConstant, 0.0, -1, nullptr, nullptr)) {}

Expr::Expr(NodePtr root) : root_(std::move(root)) {
  auto program = std::make_shared<Program>();
  std::unordered_map<const Node*, int> seen;
  program->emit(root_, seen);
  program_ = std::move(program);
}

Expr Expr::constant(double value) { return Expr(make_node(Op::kConstant, value, -1, nullptr, nullptr)); }

Expr Expr::variable(int index) {
  if (index < 0) throw Error("negative variable index");
  return Expr(make_node(Op::kVariable, 0.0, index, nullptr, nullptr));
}

Expr Expr::unary(Op op, const Expr& arg) {
  if (!is_unary(op)) throw Error("not a unary operator");
  if (arg.is_constant()) {
    try {
      return constant(apply_unary(op, arg.root().value));
    } catch (const DomainError&) {
      // keep the node; evaluation reports the error
    }
  }
  return Expr(make_node(op, 0.0, -1, arg.root_ptr(), nullptr));
}

Expr Expr::binary(Op op, const Expr& lhs, const Expr& rhs) {
  if (!is_binary(op)) throw Error("not a binary operator");
  if (lhs.is_constant() && rhs.is_constant()) {
    try {
      return constant(apply_binary(op, lhs.root().value, rhs.root().value, true));
    } catch (const DomainError&) {
    }
  }
  return Expr(make_node(op, 0.0, -1, lhs.root_ptr(), rhs.root_ptr()));
}

int Expr::max_variable() const { return program_->max_var; }

std::vector<int> Expr::support() const {
  std::set<int> vars;
  for (const auto& in : program_->code) {
    if (in.op == Op::kVariable) vars.insert(in.var);
  }
  return {vars.begin(), vars.end()};
}

double Expr::eval(std::span<const double> x) const {
  std::vector<double> slots;
  program_->forward(x, slots);
  return slots.back();
}

double Expr::eval_with_gradient(std::span<const double> x, std::span<double> gradient) const {
  if (gradient.size() != x.size()) throw Error("gradient buffer size mismatch");
  std::vector<double> slots;
  program_->forward(x, slots);
  program_->backward(slots, gradient);
  return slots.back();
}

std::vector<double> Expr::gradient(std::span<const double> x) const {
  std::vector<double> g(x.size());
  eval_with_gradient(x, g);
  return g;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::kAdd, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::kSub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::kMul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::kDiv, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::kNeg, a); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::binary(Op::kPow, base, exponent); }
Expr exp(const Expr& a) { return Expr::unary(Op::kExp, a); }
Expr ln(const Expr& a) { return Expr::unary(Op::kLn, a); }
Expr sqrt(const Expr& a) { return Expr::unary(Op::kSqrt, a); }

SymbolTable::SymbolTable(std::vector<std::string> names) {
  for (auto& n : names) add(n);
}

int SymbolTable::add(const std::string& name) {
  if (find(name)) throw SchemaError("duplicate identifier '" + name + "'");
  names_.push_back(name);
  return static_cast<int>(names_.size()) - 1;
}

std::optional<int> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("empty expression", pos_);
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw SyntaxError("malformed number", start);
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_' || text_[pos_] == '.')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    const std::size_t after_name = pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      static const std::pair<std::string_view, Op> kFunctions[] = {
          {"exp", Op::kExp}, {"ln", Op::kLn},   {"log", Op::kLn}, {"sqrt", Op::kSqrt},
          {"sin", Op::kSin}, {"cos", Op::kCos}, {"abs", Op::kAbs}};
      for (const auto& [fname, op] : kFunctions) {
        if (fname == name) {
          ++pos_;
          Expr arg = expression();
          expect(')');
          return Expr::unary(op, arg);
        }
      }
      throw UnknownIdentifier("unknown function '" + std::string(name) + "' at offset " + std::to_string(start));
    }
    pos_ = after_name;
    if (auto index = symbols_.find(name)) return Expr::variable(*index);
    throw UnknownIdentifier("unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start));
  }

  std::string_view text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::fabs(v));
  std::string s = buf;
  if (std::signbit(v)) return "(-" + s + ")";
  return s;
}

void render(const Node& n, const SymbolTable* symbols, std::string& out) {
  switch (n.op) {
    case Op::kConstant: out += format_number(n.value); return;
    case Op::kVariable:
      if (symbols != nullptr && n.var < static_cast<int>(symbols->size())) {
        out += symbols->name(n.var);
      } else {
        out += "x" + std::to_string(n.var);
      }
      return;
    case Op::kNeg:
      out += "(-";
      render(*n.lhs, symbols, out);
      out += ")";
      return;
    default: break;
  }
  if (is_unary(n.op)) {
    out += op_name(n.op);
    out += "(";
    render(*n.lhs, symbols, out);
    out += ")";
    return;
  }
  out += "(";
  render(*n.lhs, symbols, out);
  out += " ";
  out += op_name(n.op);
  out += " ";
  render(*n.rhs, symbols, out);
  out += ")";
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::kConstant) return a.value == b.value;
  if (a.op == Op::kVariable) return a.var == b.var;
  if (!nodes_equal(*a.lhs, *b.lhs)) return false;
  if (is_binary(a.op)) return nodes_equal(*a.rhs, *b.rhs);
  return true;
}

std::optional<AffineForm> affine(const Node& node, int n) {
  switch (node.op) {
    case Op::kConstant: return AffineForm{std::vector<double>(static_cast<std::size_t>(n), 0.0), node.value};
    case Op::kVariable: {
      if (node.var >= n) return std::nullopt;
      AffineForm f{std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0};
      f.coeffs[static_cast<std::size_t>(node.var)] = 1.0;
      return f;
    }
    case Op::kNeg: {
      auto f = affine(*node.lhs, n);
      if (!f) return std::nullopt;
      for (auto& c : f->coeffs) c = -c;
      f->constant = -f->constant;
      return f;
    }
    case Op::kAdd:
    case Op::kSub: {
      auto a = affine(*node.lhs, n);
      auto b = affine(*node.rhs, n);
      if (!a || !b) return std::nullopt;
      const double s = node.op == Op::kAdd ? 1.0 : -1.0;
      for (std::size_t i = 0; i < a->coeffs.size(); ++i) a->coeffs[i] += s * b->coeffs[i];
      a->constant += s * b->constant;
      return a;
    }
    case Op::kMul: {
      auto a = affine(*node.lhs, n);
      auto b = affine(*node.rhs, n);
      if (!a || !b) return std::nullopt;
      const auto is_const = [](const AffineForm& f) {
        return std::all_of(f.coeffs.begin(), f.coeffs.end(), [](double c) { return c == 0.0; });
      };
      if (is_const(*b)) std::swap(a, b);
      if (!is_const(*a)) return std::nullopt;
      for (auto& c : b->coeffs) c *= a->constant;
      b->constant *= a->constant;
      return b;
    }
    case Op::kDiv: {
      if (node.rhs->op != Op::kConstant || node.rhs->value == 0.0) return std::nullopt;
      auto a = affine(*node.lhs, n);
      if (!a) return std::nullopt;
      for (auto& c : a->coeffs) c /= node.rhs->value;
      a->constant /= node.rhs->value;
      return a;
    }
    default: return std::nullopt;
  }
}

}  // namespace

Expr parse_expr(std::string_view text, const SymbolTable& symbols) { return Parser(text, symbols).parse(); }

std::string to_string(const Expr& e, const SymbolTable* symbols) {
  std::string out;
  render(e.root(), symbols, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) { return nodes_equal(a.root(), b.root()); }

double eval_expr(const Expr& e, std::span<const double> x) { return e.eval(x); }

std::vector<double> grad_expr(const Expr& e, std::span<const double> x) { return e.gradient(x); }

std::optional<AffineForm> as_affine(const Expr& e, int n) { return affine(e.root(), n); }

}  // namespace goml::expr
