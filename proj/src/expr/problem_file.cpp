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


#include "goml/expr/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "goml/core/error.hpp"

namespace goml::expr {

void BlackBoxRegistry::add(const std::string& name, ScalarFunction f) { functions_[name] = std::move(f); }

const ScalarFunction* BlackBoxRegistry::find(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

namespace {

constexpr std::string_view kFormatTag = "goml-problem";
constexpr int kFormatVersion = 1;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits off the first whitespace-delimited word.
std::string_view take_word(std::string_view& s) {
  s = trim(s);
  const auto end = s.find_first_of(" \t");
  const auto word = s.substr(0, end);
  s = end == std::string_view::npos ? std::string_view{} : trim(s.substr(end));
  return word;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Loader {
 public:
  Loader(const BlackBoxRegistry* registry) : registry_(registry) {}

  Problem run(std::string_view document) {
    std::size_t pos = 0;
    while (pos <= document.size()) {
      auto end = document.find('\n', pos);
      if (end == std::string_view::npos) end = document.size();
      ++line_;
      handle(document.substr(pos, end - pos));
      pos = end + 1;
    }
    if (!seen_format_) throw SchemaError("missing mandatory 'format goml-problem 1' line");
    if (!seen_objective_) throw SchemaError("missing 'objective' line");
    if (problem_.objective.is_linear() && problem_.objective.coeffs.empty()) {
      problem_.objective.coeffs.assign(problem_.vars.size(), 0.0);
    }
    problem_.validate();
    return std::move(problem_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw SchemaError("line " + std::to_string(line_) + ": " + message);
  }

  double number(std::string_view word) const {
    if (word == "inf" || word == "+inf") return kInf;
    if (word == "-inf") return -kInf;
    double v = 0.0;
    const char* begin = word.data();
    if (!word.empty() && word.front() == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size() || word.empty()) {
      fail("expected a number, found '" + std::string(word) + "'");
    }
    return v;
  }

  Expr expression(std::string_view text) const {
    try {
      return parse_expr(text, symbols_);
    } catch (const SyntaxError& err) {
      throw SyntaxError("line " + std::to_string(line_) + ": " + err.what(), err.offset());
    } catch (const UnknownIdentifier& err) {
      throw UnknownIdentifier("line " + std::to_string(line_) + ": " + err.what());
    }
  }

  void handle(std::string_view raw) {
    const auto hash = raw.find('#');
    std::string_view rest = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (rest.empty()) return;
    const auto keyword = take_word(rest);
    if (!seen_format_ && keyword != "format") fail("the first statement must be 'format goml-problem 1'");
    if (keyword == "format") {
      handle_format(rest);
    } else if (keyword == "name") {
      problem_.name = std::string(rest);
    } else if (keyword == "known_optimum") {
      problem_.known_optimum = number(take_word(rest));
    } else if (keyword == "var") {
      handle_var(rest);
    } else if (keyword == "objective") {
      handle_objective(rest);
    } else if (keyword == "constraint") {
      handle_constraint(rest);
    } else if (keyword == "blackbox") {
      handle_blackbox(rest);
    } else {
      fail("unknown keyword '" + std::string(keyword) + "'");
    }
  }

  void handle_format(std::string_view rest) {
    if (seen_format_) fail("duplicate 'format' line");
    const auto tag = take_word(rest);
    const auto version = take_word(rest);
    if (tag != kFormatTag) fail("unsupported format tag '" + std::string(tag) + "'");
    if (number(version) != kFormatVersion) fail("unsupported format version '" + std::string(version) + "'");
    seen_format_ = true;
  }

  void handle_var(std::string_view rest) {
    if (seen_objective_ || !problem_.linear.empty() || !problem_.nonlinear.empty()) {
      fail("variables must be declared before the objective and constraints");
    }
    VarSpec v;
    v.name = std::string(take_word(rest));
    if (v.name.empty()) fail("variable name missing");
    v.lower = number(take_word(rest));
    v.upper = number(take_word(rest));
    const auto flag = take_word(rest);
    if (flag == "integer") {
      v.integral = true;
    } else if (!flag.empty()) {
      fail("unexpected token '" + std::string(flag) + "' after variable bounds");
    }
    if (!rest.empty()) fail("trailing text after variable declaration");
    if (v.lower > v.upper) fail("variable '" + v.name + "' has lower bound above upper bound");
    try {
      v.index = symbols_.add(v.name);
    } catch (const SchemaError&) {
      fail("duplicate variable '" + v.name + "'");
    }
    problem_.vars.push_back(v);
  }

  void handle_objective(std::string_view rest) {
    if (seen_objective_) fail("duplicate 'objective' line");
    seen_objective_ = true;
    const auto sense = take_word(rest);
    if (sense != "min") fail("objective sense must be 'min'");
    const int n = static_cast<int>(problem_.vars.size());
    std::string_view probe = rest;
    if (take_word(probe) == "linear") {
      for (int i = 0; i < n; ++i) {
        const auto word = take_word(probe);
        if (word.empty()) fail("linear objective needs one coefficient per variable");
        problem_.objective.coeffs.push_back(number(word));
      }
      if (!probe.empty()) fail("linear objective has more coefficients than variables");
      return;
    }
    if (rest.empty()) fail("objective expression missing");
    Expr e = expression(rest);
    if (auto form = as_affine(e, n)) {
      problem_.objective.coeffs = std::move(form->coeffs);
      problem_.objective.constant = form->constant;
    } else {
      problem_.objective.coeffs.assign(static_cast<std::size_t>(n), 0.0);
      problem_.objective.nonlinear = NonlinearConstraint::from_expr("objective", e, ConstraintKind::kInequality);
    }
  }

  // Optional "label:" prefix; labels are identifiers followed by a colon.
  std::string take_label(std::string_view& rest, const char* prefix) {
    const auto colon = rest.find(':');
    if (colon != std::string_view::npos) {
      const auto label = trim(rest.substr(0, colon));
      const bool identifier = !label.empty() && label.find_first_of(" \t()+-*/^") == std::string_view::npos;
      if (identifier) {
        rest = trim(rest.substr(colon + 1));
        return std::string(label);
      }
    }
    return prefix + std::to_string(++unnamed_);
  }

  void handle_constraint(std::string_view rest) {
    const std::string name = take_label(rest, "c");
    struct Cmp {
      std::string_view token;
      Sense sense;
    };
    static constexpr Cmp kOps[] = {{"<=", Sense::kLe}, {">=", Sense::kGe}, {"==", Sense::kEq}};
    std::size_t at = std::string_view::npos;
    Sense sense = Sense::kLe;
    for (const auto& op : kOps) {
      const auto found = rest.find(op.token);
      if (found == std::string_view::npos) continue;
      if (at != std::string_view::npos) fail("constraint has more than one comparison");
      if (rest.find(op.token, found + 2) != std::string_view::npos) fail("constraint has more than one comparison");
      at = found;
      sense = op.sense;
    }
    if (at == std::string_view::npos) fail("constraint needs one of <=, >=, ==");
    const Expr lhs = expression(trim(rest.substr(0, at)));
    const Expr rhs = expression(trim(rest.substr(at + 2)));
    const int n = static_cast<int>(problem_.vars.size());
    const Expr diff = rhs.is_constant() && rhs.root().value == 0.0 ? lhs : lhs - rhs;
    if (auto form = as_affine(diff, n)) {
      problem_.linear.push_back(LinearConstraint{std::move(form->coeffs), -form->constant, sense, name});
      return;
    }
    switch (sense) {
      case Sense::kLe:
        problem_.nonlinear.push_back(NonlinearConstraint::from_expr(name, diff, ConstraintKind::kInequality));
        break;
      case Sense::kGe:
        problem_.nonlinear.push_back(NonlinearConstraint::from_expr(
            name, lhs.is_constant() && lhs.root().value == 0.0 ? rhs : rhs - lhs, ConstraintKind::kInequality));
        break;
      case Sense::kEq:
        problem_.nonlinear.push_back(NonlinearConstraint::from_expr(name, diff, ConstraintKind::kEquality));
        break;
    }
  }

  void handle_blackbox(std::string_view rest) {
    const std::string name(take_word(rest));
    if (name.empty()) fail("blackbox name missing");
    const auto op = take_word(rest);
    ConstraintKind kind;
    if (op == "<=") {
      kind = ConstraintKind::kInequality;
    } else if (op == "==") {
      kind = ConstraintKind::kEquality;
    } else {
      fail("blackbox sense must be '<=' or '=='");
    }
    if (take_word(rest) != "0") fail("blackbox right-hand side must be 0");
    if (take_word(rest) != "support") fail("blackbox needs 'support <variables...>'");
    std::vector<int> support;
    while (!rest.empty()) {
      const auto var = take_word(rest);
      const auto index = symbols_.find(var);
      if (!index) {
        throw UnknownIdentifier("line " + std::to_string(line_) + ": unknown variable '" + std::string(var) + "'");
      }
      support.push_back(*index);
    }
    if (support.empty()) fail("blackbox support is empty");
    const ScalarFunction* f = registry_ ? registry_->find(name) : nullptr;
    if (f == nullptr) fail("no evaluator registered for blackbox '" + name + "'");
    problem_.nonlinear.push_back(NonlinearConstraint::from_function(name, *f, support, kind));
  }

  const BlackBoxRegistry* registry_;
  Problem problem_;
  SymbolTable symbols_;
  int line_ = 0;
  int unnamed_ = 0;
  bool seen_format_ = false;
  bool seen_objective_ = false;
};

std::string affine_text(const std::vector<double>& coeffs, double constant, const SymbolTable& symbols) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + format_number(coeffs[i]) + ")*" + symbols.name(static_cast<int>(i));
  }
  if (constant != 0.0 || out.empty()) {
    if (!out.empty()) out += " + ";
    out += "(" + format_number(constant) + ")";
  }
  return out;
}

}  // namespace

Problem load_problem(std::string_view document, const BlackBoxRegistry* registry) {
  return Loader(registry).run(document);
}

Problem load_problem_file(const std::filesystem::path& path, const BlackBoxRegistry* registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open problem file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read problem file '" + path.string() + "'");
  return load_problem(text.str(), registry);
}

std::string write_problem(const Problem& problem) {
  SymbolTable symbols;
  for (const auto& v : problem.vars) symbols.add(v.name);
  std::ostringstream out;
  out << "format " << kFormatTag << ' ' << kFormatVersion << '\n';
  if (!problem.name.empty()) out << "name " << problem.name << '\n';
  if (problem.known_optimum) out << "known_optimum " << format_number(*problem.known_optimum) << '\n';
  for (const auto& v : problem.vars) {
    out << "var " << v.name << ' ' << format_number(v.lower) << ' ' << format_number(v.upper);
    if (v.integral) out << " integer";
    out << '\n';
  }
  if (problem.objective.nonlinear) {
    const auto& e = problem.objective.nonlinear->expression();
    if (!e) throw SchemaError("black-box objectives cannot be written");
    Expr full = *e;
    if (problem.objective.constant != 0.0) full = full + Expr::constant(problem.objective.constant);
    out << "objective min " << to_string(full, &symbols) << '\n';
  } else if (problem.objective.constant != 0.0) {
    out << "objective min " << affine_text(problem.objective.coeffs, problem.objective.constant, symbols) << '\n';
  } else {
    out << "objective min linear";
    for (double c : problem.objective.coeffs) out << ' ' << format_number(c);
    out << '\n';
  }
  for (const auto& row : problem.linear) {
    out << "constraint ";
    if (!row.name.empty()) out << row.name << ": ";
    out << affine_text(row.coeffs, 0.0, symbols) << ' ' << to_string(row.sense) << ' ' << format_number(row.rhs)
        << '\n';
  }
  for (const auto& con : problem.nonlinear) {
    const char* op = con.kind() == ConstraintKind::kEquality ? "==" : "<=";
    if (con.expression()) {
      out << "constraint " << con.name() << ": " << to_string(*con.expression(), &symbols) << ' ' << op << " 0\n";
    } else {
      out << "blackbox " << con.name() << ' ' << op << " 0 support";
      for (int i : con.support()) out << ' ' << symbols.name(i);
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace goml::expr
