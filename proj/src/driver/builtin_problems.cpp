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


#include "goml/driver/driver.hpp"

namespace goml::driver {
namespace {

constexpr const char* k_illustrative = R"(# Two-variable illustrative problem: two logarithmic constraints and two
# linear cuts. Global optimum -1.14996 at (1.14996, 0.87506).
format goml-problem 1
name illustrative
known_optimum -1.1499627
var x1 0.51 1.5
var x2 0.3 1.6
objective min -x1
constraint g1: -0.43*ln(x1-0.5) - 1.1 - x1 + x2 <= 0
constraint g2: -x2 + 0.33*ln(x1-0.4) + 1.2 - 0.2*x1 <= 0
constraint g3: x2 - 1.1*x1 - 0.3 <= 0
constraint g4: x2 + 1.5*x1 - 2.6 <= 0
)";

constexpr const char* k_illustrative_printed = R"(# Variant with objective min -x2 and the opposite orientation of the two
# linear cuts. Its optimum is -1.6 on the upper bound of x2.
format goml-problem 1
name illustrative-printed
known_optimum -1.6
var x1 0.51 1.5
var x2 0.3 1.6
objective min -x2
constraint g1: -0.43*ln(x1-0.5) - 1.1 - x1 + x2 <= 0
constraint g2: -x2 + 0.33*ln(x1-0.4) + 1.2 - 0.2*x1 <= 0
constraint g3: -x2 + 1.1*x1 + 0.3 <= 0
constraint g4: -x2 - 1.5*x1 + 2.6 <= 0
)";

constexpr const char* k_speed_reducer = R"(# Gearbox (speed reducer) design. x3 is the integral number of pinion teeth.
# Best known objective 2994.355 at
# (3.5, 0.7, 17, 7.3, 7.71531991, 3.35021467, 5.28665446).
format goml-problem 1
name speed-reducer
known_optimum 2994.3550
var x1 2.6 3.6
var x2 0.7 0.8
var x3 17 28 integer
var x4 7.3 8.3
var x5 7.3 8.3
var x6 2.9 3.9
var x7 5.0 5.5
objective min 0.7854*x1*x2^2*(3.3333*x3^2 + 14.9334*x3 - 43.0934) - 1.5079*x1*(x6^2 + x7^2) + 7.477*(x6^3 + x7^3) + 0.7854*(x4*x6^2 + x5*x7^2)
constraint s1: -27 + x1*x2^2*x3 >= 0
constraint s2: -397.5 + x1*x2^2*x3^2 >= 0
constraint s3: -1.93 + x2*x6^4*x3/x4^3 >= 0
constraint s4: -1.93 + x2*x7^4*x3/x5^3 >= 0
constraint s5: 110*x6^3 - sqrt((745*x4/(x2*x3))^2 + 16.9e6) >= 0
constraint s6: 85*x7^3 - sqrt((745*x5/(x2*x3))^2 + 157.5e6) >= 0
constraint s7: 40 - x2*x3 >= 0
constraint s8: x1 - 5*x2 >= 0
constraint s9: 12*x2 - x1 >= 0
constraint s10: x4 - 1.5*x6 - 1.9 >= 0
constraint s11: x5 - 1.1*x7 - 1.9 >= 0
)";

}  // namespace

std::string builtin_problem_text(const std::string& name) {
  if (name == "illustrative") return k_illustrative;
  if (name == "illustrative-printed" || name == "illustrative_printed") return k_illustrative_printed;
  if (name == "speed-reducer" || name == "speed_reducer") return k_speed_reducer;
  throw Error("unknown built-in problem '" + name + "'");
}

}  // namespace goml::driver
