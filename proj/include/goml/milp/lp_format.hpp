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


// CPLEX LP text format for MILP models, and the solution-file format used
// by the external solver seam. See docs/lp-format.md.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "goml/milp/model.hpp"

namespace goml::milp {

/// x<j> for continuous and integer variables, z<j> for binaries.
std::string var_name(const MilpModel& model, int j);

std::string write_lp(const MilpModel& model);

/// Throws IoError.
void export_lp_file(const MilpModel& model, const std::filesystem::path& path);

/// Reads the subset of the LP format produced by write_lp: linear and
/// bracketed quadratic rows, Bounds, Generals and Binaries sections.
/// Throws SyntaxError.
MilpModel read_lp(std::string_view text);

MilpModel read_lp_file(const std::filesystem::path& path);

std::string write_solution(const MilpModel& model, const MilpSolution& solution);

/// Parses a solution file against the variable names of `model`.
/// Throws SchemaError.
MilpSolution read_solution(std::string_view text, const MilpModel& model);

/// Command named by GOML_EXTERNAL_SOLVER_CMD, if set and nonempty.
std::optional<std::string> external_solver_command();

/// Writes the model to a temporary LP file, runs `command` with {lp} and
/// {sol} replaced by the file paths (appended when absent) and reads the
/// solution file back. Throws IoError when the command fails.
MilpSolution solve_external(const MilpModel& model, const std::string& command);

}  // namespace goml::milp
