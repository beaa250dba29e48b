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

// Scalar expression trees over indexed variables, with a parser, an
// evaluator and reverse-mode differentiation.
//
// Grammar (highest precedence first):
//
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//   power   := primary [ '^' unary ]          (right associative)
//   unary   := ('-' | '+') unary | power
//   term    := unary { ('*' | '/') unary }
//   expr    := term { ('+' | '-') term }
//
// Functions: exp, ln (alias log), sqrt, sin, cos, abs.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace goml::expr {

enum class Op : std::uint8_t {
  kConstant,
  kVariable,
  kNeg,
  kExp,
  kLn,
  kSqrt,
  kSin,
  kCos,
  kAbs,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
};

bool is_unary(Op op);
bool is_binary(Op op);

struct Node {
  Op op = Op::kConstant;
  double value = 0.0;  // kConstant
  int var = -1;        // kVariable
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

struct Program;

/// Immutable expression. Copies share the underlying tree.
class Expr {
 public:
  Expr();  // constant 0
  explicit Expr(NodePtr root);

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr unary(Op op, const Expr& arg);
  static Expr binary(Op op, const Expr& lhs, const Expr& rhs);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  bool is_constant() const { return root_->op == Op::kConstant; }

  /// Largest variable index referenced, or -1.
  int max_variable() const;

  /// Sorted, unique variable indices referenced.
  std::vector<int> support() const;

  double eval(std::span<const double> x) const;

  /// Value and exact gradient (dense, length x.size()).
  double eval_with_gradient(std::span<const double> x, std::span<double> gradient) const;

  std::vector<double> gradient(std::span<const double> x) const;

 private:
  NodePtr root_;
  std::shared_ptr<const Program> program_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);

/// Maps identifiers to variable indices.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> names);

  int add(const std::string& name);
  std::optional<int> find(std::string_view name) const;
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

/// Parses `text`. Constant subtrees are folded when their value is defined.
/// Throws SyntaxError (with byte offset) or UnknownIdentifier.
Expr parse_expr(std::string_view text, const SymbolTable& symbols);

/// Renders an expression that parse_expr reads back to a structurally equal
/// tree. Variables print by name when `symbols` covers them, else as x<i>.
std::string to_string(const Expr& e, const SymbolTable* symbols = nullptr);

bool structurally_equal(const Expr& a, const Expr& b);

/// Value of an expression evaluated at x.
double eval_expr(const Expr& e, std::span<const double> x);
std::vector<double> grad_expr(const Expr& e, std::span<const double> x);

struct AffineForm {
  std::vector<double> coeffs;  // length n
  double constant = 0.0;
};

/// Returns the affine form when `e` is affine in x (n variables).
std::optional<AffineForm> as_affine(const Expr& e, int n);

}  // namespace goml::expr
