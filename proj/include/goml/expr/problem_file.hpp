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


// Line-oriented problem documents. See docs/problem-format.md.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "goml/core/problem.hpp"

namespace goml::expr {

/// Host-supplied evaluators for `blackbox` lines, looked up by name.
class BlackBoxRegistry {
 public:
  void add(const std::string& name, ScalarFunction f);
  const ScalarFunction* find(const std::string& name) const;

 private:
  std::map<std::string, ScalarFunction> functions_;
};

/// Parses a problem document. Throws SchemaError, SyntaxError or
/// UnknownIdentifier; messages name the offending line.
Problem load_problem(std::string_view document, const BlackBoxRegistry* registry = nullptr);

/// Reads and parses a file. Throws IoError when it cannot be read.
Problem load_problem_file(const std::filesystem::path& path, const BlackBoxRegistry* registry = nullptr);

/// Renders a problem that load_problem reads back to a structurally equal
/// problem. Black-box constraints are written as `blackbox` lines.
std::string write_problem(const Problem& problem);

}  // namespace goml::expr
