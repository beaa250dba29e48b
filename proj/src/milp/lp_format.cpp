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


#include "goml/milp/lp_format.hpp"

#include <unistd.h>

#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "goml/core/error.hpp"

namespace goml::milp {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lower_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void write_terms(std::ostringstream& out, const MilpModel& model, const std::vector<Term>& terms,
                 const char* suffix = "") {
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    out << (t.coeff < 0 ? " - " : " + ") << num(std::fabs(t.coeff)) << ' ' << var_name(model, t.var) << suffix;
  }
}

constexpr std::string_view kConstantTag = "objective_constant";

}  // namespace

std::string var_name(const MilpModel& model, int j) {
  return (model.vars()[j].type == VarType::kBinary ? "z" : "x") + std::to_string(j);
}

std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ goml MILP model: " << model.num_vars() << " variables, " << model.num_rows() << " rows\n";
  if (model.objective_constant() != 0.0) out << "\\ " << kConstantTag << ' ' << num(model.objective_constant()) << '\n';
  out << (model.minimize() ? "Minimize\n" : "Maximize\n") << " obj:";
  for (int j = 0; j < model.num_vars(); ++j) {
    const double c = model.objective()[j];
    if (c == 0.0) continue;
    out << (c < 0 ? " - " : " + ") << num(std::fabs(c)) << ' ' << var_name(model, j);
  }
  out << "\nSubject To\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.rows()[r];
    out << " r" << r << ':';
    write_terms(out, model, row.terms);
    bool any = false;
    for (const auto& t : row.terms) any = any || t.coeff != 0.0;
    if (!any) out << " 0 " << (model.num_vars() > 0 ? var_name(model, 0) : "x0");
    out << ' ' << to_string(row.sense) << ' ' << num(row.rhs) << '\n';
  }
  for (std::size_t c = 0; c < model.cones().size(); ++c) {
    const auto& cone = model.cones()[c];
    out << " q" << c << ": [";
    for (const auto& t : cone.entries) {
      if (t.coeff == 0.0) continue;
      out << " + " << num(t.coeff * t.coeff) << ' ' << var_name(model, t.var) << " ^2";
    }
    out << " - 1 " << var_name(model, cone.bound) << " ^2 ] <= 0\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.vars()[j];
    const auto name = var_name(model, j);
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << num(v.lower) << " <= " << name << " <= " << num(v.upper) << '\n';
    }
  }
  std::ostringstream generals, binaries;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars()[j].type == VarType::kInteger) generals << ' ' << var_name(model, j) << '\n';
    if (model.vars()[j].type == VarType::kBinary) binaries << ' ' << var_name(model, j) << '\n';
  }
  if (!generals.str().empty()) out << "Generals\n" << generals.str();
  if (!binaries.str().empty()) out << "Binaries\n" << binaries.str();
  out << "End\n";
  return out.str();
}

void export_lp_file(const MilpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << write_lp(model);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

enum class Tok { kNumber, kName, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double value = 0.0;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text, std::size_t base) : text_(text), base_(base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      Token t;
      t.offset = base_ + pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc()) throw SyntaxError("malformed number", t.offset);
        t.kind = Tok::kNumber;
        t.value = v;
        pos_ = static_cast<std::size_t>(ptr - text_.data());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const auto start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '.')) {
          ++pos_;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        const auto lc = lower_case(t.text);
        if (lc == "inf" || lc == "infinity") {
          t.kind = Tok::kNumber;
          t.value = kInf;
        } else {
          t.kind = Tok::kName;
        }
      } else if ((c == '<' || c == '>' || c == '=') && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
        t.kind = Tok::kSymbol;
        t.text = std::string(text_.substr(pos_, 2));
        pos_ += 2;
      } else if (std::string_view("+-<>=[]^:*").find(c) != std::string_view::npos) {
        t.kind = Tok::kSymbol;
        t.text = std::string(1, c);
        ++pos_;
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", t.offset);
      }
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

enum class Section { kNone, kObjective, kConstraints, kBounds, kGenerals, kBinaries, kEnd };

std::optional<std::pair<Section, bool>> section_keyword(std::string_view line) {
  const auto lc = lower_case(line);
  if (lc == "minimize" || lc == "minimise" || lc == "minimum" || lc == "min") return {{Section::kObjective, true}};
  if (lc == "maximize" || lc == "maximise" || lc == "maximum" || lc == "max") return {{Section::kObjective, false}};
  if (lc == "subject to" || lc == "such that" || lc == "st" || lc == "s.t.") return {{Section::kConstraints, true}};
  if (lc == "bounds" || lc == "bound") return {{Section::kBounds, true}};
  if (lc == "generals" || lc == "general" || lc == "gen" || lc == "integers") return {{Section::kGenerals, true}};
  if (lc == "binaries" || lc == "binary" || lc == "bin") return {{Section::kBinaries, true}};
  if (lc == "end") return {{Section::kEnd, true}};
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

Sense parse_sense(const Token& t) {
  if (t.text == "<=" || t.text == "<") return Sense::kLe;
  if (t.text == ">=" || t.text == ">") return Sense::kGe;
  if (t.text == "=" || t.text == "==") return Sense::kEq;
  throw SyntaxError("expected a comparison", t.offset);
}

bool is_sense(const Token& t) {
  return t.kind == Tok::kSymbol && (t.text == "<=" || t.text == ">=" || t.text == "=" || t.text == "<" ||
                                    t.text == ">" || t.text == "==");
}

class LpReader {
 public:
  MilpModel run(std::string_view text) {
    std::map<Section, std::vector<Token>> body;
    Section current = Section::kNone;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      const std::size_t base = pos;
      pos = end + 1;
      const auto slash = line.find('\\');
      if (slash != std::string_view::npos) {
        auto comment = trim(line.substr(slash + 1));
        if (comment.substr(0, kConstantTag.size()) == kConstantTag) {
          const auto value = trim(comment.substr(kConstantTag.size()));
          double v = 0.0;
          std::from_chars(value.data(), value.data() + value.size(), v);
          constant_ = v;
        }
        line = line.substr(0, slash);
      }
      if (auto kw = section_keyword(trim(line))) {
        current = kw->first;
        if (current == Section::kObjective) minimize_ = kw->second;
        continue;
      }
      if (trim(line).empty()) continue;
      if (current == Section::kNone) throw SyntaxError("text before the objective section", base);
      if (current == Section::kEnd) throw SyntaxError("text after End", base);
      auto tokens = Lexer(line, base).run();
      auto& dst = body[current];
      dst.insert(dst.end(), tokens.begin(), tokens.end());
    }

    // Bounds fix the variable order; remaining names append on first use.
    parse_bounds(body[Section::kBounds]);
    for (const auto& t : body[Section::kGenerals]) declare_type(t, VarType::kInteger);
    for (const auto& t : body[Section::kBinaries]) declare_type(t, VarType::kBinary);
    parse_objective(body[Section::kObjective]);
    parse_constraints(body[Section::kConstraints]);

    MilpModel model;
    for (std::size_t j = 0; j < order_.size(); ++j) {
      auto& info = info_[order_[j]];
      double lo = info.lower, hi = info.upper;
      if (info.type == VarType::kBinary) {
        if (!info.bounded) {
          lo = 0.0;
          hi = 1.0;
        }
      }
      model.add_var(lo, hi, info.type);
    }
    for (const auto& [var, coeff] : objective_) model.set_objective(var, coeff);
    model.set_objective_constant(constant_);
    model.set_minimize(minimize_);
    for (auto& row : rows_) model.add_row(std::move(row.terms), row.sense, row.rhs);
    for (auto& cone : cones_) model.add_cone(std::move(cone));
    return model;
  }

 private:
  struct VarInfo {
    int index = 0;
    double lower = 0.0;
    double upper = kInf;
    VarType type = VarType::kContinuous;
    bool bounded = false;
  };

  int var(const Token& t) {
    if (t.kind != Tok::kName) throw SyntaxError("expected a variable name", t.offset);
    auto it = info_.find(t.text);
    if (it != info_.end()) return it->second.index;
    VarInfo info;
    info.index = static_cast<int>(order_.size());
    order_.push_back(t.text);
    info_[t.text] = info;
    return info.index;
  }

  void declare_type(const Token& t, VarType type) {
    var(t);
    info_[t.text].type = type;
  }

  void parse_bounds(const std::vector<Token>& toks) {
    std::size_t i = 0;
    const auto signed_number = [&](std::size_t& k) {
      double s = 1.0;
      if (k < toks.size() && toks[k].kind == Tok::kSymbol && (toks[k].text == "-" || toks[k].text == "+")) {
        if (toks[k].text == "-") s = -1.0;
        ++k;
      }
      if (k >= toks.size() || toks[k].kind != Tok::kNumber) {
        throw SyntaxError("expected a bound value", k < toks.size() ? toks[k].offset : 0);
      }
      return s * toks[k++].value;
    };
    const auto apply = [&](const std::string& name, Sense sense, double v) {
      auto& info = info_[name];
      info.bounded = true;
      if (sense != Sense::kGe) info.upper = v;
      if (sense != Sense::kLe) info.lower = v;
    };
    while (i < toks.size()) {
      if (toks[i].kind == Tok::kName) {
        const auto& name = toks[i].text;
        var(toks[i]);
        ++i;
        if (i < toks.size() && toks[i].kind == Tok::kName && lower_case(toks[i].text) == "free") {
          info_[name].lower = -kInf;
          info_[name].upper = kInf;
          info_[name].bounded = true;
          ++i;
          continue;
        }
        if (i >= toks.size() || !is_sense(toks[i])) throw SyntaxError("expected a bound comparison", toks[i - 1].offset);
        const Sense sense = parse_sense(toks[i++]);
        apply(name, sense, signed_number(i));
      } else {
        const double v = signed_number(i);
        if (i >= toks.size() || !is_sense(toks[i])) throw SyntaxError("expected a bound comparison", toks[i - 1].offset);
        const Sense first = parse_sense(toks[i++]);
        if (i >= toks.size()) throw SyntaxError("bound missing variable", toks[i - 1].offset);
        const std::string name = toks[i].text;
        var(toks[i++]);
        // v <= x means x >= v.
        apply(name, first == Sense::kLe ? Sense::kGe : (first == Sense::kGe ? Sense::kLe : Sense::kEq), v);
        if (i < toks.size() && is_sense(toks[i])) {
          const Sense second = parse_sense(toks[i++]);
          apply(name, second, signed_number(i));
        }
      }
    }
  }

  void parse_objective(const std::vector<Token>& toks) {
    std::size_t i = 0;
    if (toks.size() >= 2 && toks[0].kind == Tok::kName && toks[1].kind == Tok::kSymbol && toks[1].text == ":") i = 2;
    for (const auto& t : constraint_terms(toks, i)) objective_.emplace_back(t.var, t.coeff);
    if (i < toks.size()) throw SyntaxError("unexpected comparison in objective", toks[i].offset);
  }

  void parse_constraints(const std::vector<Token>& toks) {
    std::size_t i = 0;
    while (i < toks.size()) {
      if (i + 1 < toks.size() && toks[i].kind == Tok::kName && toks[i + 1].kind == Tok::kSymbol &&
          toks[i + 1].text == ":") {
        i += 2;
      }
      if (i < toks.size() && toks[i].kind == Tok::kSymbol && toks[i].text == "[") {
        parse_cone(toks, i);
        continue;
      }
      MilpRow row;
      row.terms = constraint_terms(toks, i);
      if (i >= toks.size()) throw SyntaxError("constraint missing comparison", toks.back().offset);
      row.sense = parse_sense(toks[i++]);
      double s = 1.0;
      if (i < toks.size() && toks[i].kind == Tok::kSymbol && (toks[i].text == "-" || toks[i].text == "+")) {
        if (toks[i].text == "-") s = -1.0;
        ++i;
      }
      if (i >= toks.size() || toks[i].kind != Tok::kNumber) {
        throw SyntaxError("constraint missing right-hand side", i < toks.size() ? toks[i].offset : 0);
      }
      row.rhs = s * toks[i++].value;
      rows_.push_back(std::move(row));
    }
  }

  std::vector<Term> constraint_terms(const std::vector<Token>& toks, std::size_t& i) {
    std::vector<Term> terms;
    while (i < toks.size() && !is_sense(toks[i])) {
      double sign = 1.0;
      while (i < toks.size() && toks[i].kind == Tok::kSymbol && (toks[i].text == "+" || toks[i].text == "-")) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      double coeff = 1.0;
      if (i < toks.size() && toks[i].kind == Tok::kNumber) coeff = toks[i++].value;
      if (i < toks.size() && toks[i].kind == Tok::kSymbol && toks[i].text == "*") ++i;
      if (i >= toks.size() || toks[i].kind != Tok::kName) {
        throw SyntaxError("expected a variable", i < toks.size() ? toks[i].offset : 0);
      }
      const int j = var(toks[i++]);
      if (sign * coeff != 0.0) terms.push_back({j, sign * coeff});
    }
    return terms;
  }

  // [ c1 x1 ^2 + ... - 1 t ^2 ] <= 0
  void parse_cone(const std::vector<Token>& toks, std::size_t& i) {
    const std::size_t open = toks[i].offset;
    ++i;
    ConeRow cone;
    bool have_bound = false;
    while (i < toks.size() && !(toks[i].kind == Tok::kSymbol && toks[i].text == "]")) {
      double sign = 1.0;
      while (i < toks.size() && toks[i].kind == Tok::kSymbol && (toks[i].text == "+" || toks[i].text == "-")) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      double coeff = 1.0;
      if (i < toks.size() && toks[i].kind == Tok::kNumber) coeff = toks[i++].value;
      const int j = var(toks.at(i));
      ++i;
      if (i + 1 >= toks.size() || toks[i].text != "^" || toks[i + 1].kind != Tok::kNumber || toks[i + 1].value != 2) {
        throw SyntaxError("cone rows must contain squared terms only", open);
      }
      i += 2;
      if (sign < 0) {
        if (have_bound || coeff != 1.0) throw SyntaxError("cone row needs exactly one '- 1 t ^2' term", open);
        cone.bound = j;
        have_bound = true;
      } else {
        cone.entries.push_back({j, std::sqrt(coeff)});
      }
    }
    if (i >= toks.size()) throw SyntaxError("unterminated '['", open);
    ++i;
    if (!have_bound || i + 1 >= toks.size() || toks[i].text != "<=" || toks[i + 1].kind != Tok::kNumber ||
        toks[i + 1].value != 0.0) {
      throw SyntaxError("cone rows must read [ ... ] <= 0", open);
    }
    i += 2;
    cones_.push_back(std::move(cone));
  }

  std::map<std::string, VarInfo> info_;
  std::vector<std::string> order_;
  std::vector<std::pair<int, double>> objective_;
  std::vector<MilpRow> rows_;
  std::vector<ConeRow> cones_;
  double constant_ = 0.0;
  bool minimize_ = true;
};

}  // namespace

MilpModel read_lp(std::string_view text) { return LpReader().run(text); }

MilpModel read_lp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return read_lp(s.str());
}

std::string write_solution(const MilpModel& model, const MilpSolution& solution) {
  std::ostringstream out;
  out << "status " << to_string(solution.status) << '\n';
  if (!solution.x.empty()) {
    out << "objective " << num(solution.objective) << '\n';
    for (int j = 0; j < model.num_vars(); ++j) out << var_name(model, j) << ' ' << num(solution.x[j]) << '\n';
  }
  return out.str();
}

MilpSolution read_solution(std::string_view text, const MilpModel& model) {
  std::map<std::string, int> index;
  for (int j = 0; j < model.num_vars(); ++j) index[var_name(model, j)] = j;
  MilpSolution sol;
  bool have_status = false;
  std::vector<bool> seen(static_cast<std::size_t>(model.num_vars()), false);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string key, value;
    if (!(words >> key)) continue;
    if (key.front() == '#') continue;
    if (!(words >> value)) throw SchemaError("solution line " + std::to_string(line_no) + " has no value");
    if (key == "status") {
      have_status = true;
      if (value == "optimal") {
        sol.status = SolveStatus::kOptimal;
      } else if (value == "infeasible") {
        sol.status = SolveStatus::kInfeasible;
      } else if (value == "unbounded") {
        sol.status = SolveStatus::kUnbounded;
      } else if (value == "time_limit") {
        sol.status = SolveStatus::kTimeLimit;
      } else {
        throw SchemaError("unknown solution status '" + value + "'");
      }
      continue;
    }
    double v = 0.0;
    const auto lc = lower_case(value);
    if (lc == "inf") {
      v = kInf;
    } else if (lc == "-inf") {
      v = -kInf;
    } else {
      const char* b = value.data();
      if (*b == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw SchemaError("solution line " + std::to_string(line_no) + ": bad number '" + value + "'");
      }
    }
    if (key == "objective") {
      sol.objective = v;
      continue;
    }
    auto it = index.find(key);
    if (it == index.end()) throw SchemaError("solution names unknown variable '" + key + "'");
    if (sol.x.empty()) sol.x.assign(static_cast<std::size_t>(model.num_vars()), 0.0);
    sol.x[static_cast<std::size_t>(it->second)] = v;
    seen[static_cast<std::size_t>(it->second)] = true;
  }
  if (!have_status) throw SchemaError("solution file has no status line");
  if (!sol.x.empty()) {
    for (std::size_t j = 0; j < seen.size(); ++j) {
      if (!seen[j]) throw SchemaError("solution omits variable '" + var_name(model, static_cast<int>(j)) + "'");
    }
    sol.objective = model.objective_value(sol.x);
    sol.bound = sol.objective;
    sol.gap = 0.0;
  }
  return sol;
}

std::optional<std::string> external_solver_command() {
  const char* cmd = std::getenv("GOML_EXTERNAL_SOLVER_CMD");
  if (cmd == nullptr || *cmd == '\0') return std::nullopt;
  return std::string(cmd);
}

namespace {

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string shell_quote(const std::string& s) { return "'" + replace_all(s, "'", "'\\''") + "'"; }

}  // namespace

MilpSolution solve_external(const MilpModel& model, const std::string& command) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  const auto stem = "goml_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto lp_path = dir / (stem + ".lp");
  const auto sol_path = dir / (stem + ".sol");
  export_lp_file(model, lp_path);
  std::string cmd = command;
  if (cmd.find("{lp}") == std::string::npos) cmd += " {lp}";
  if (cmd.find("{sol}") == std::string::npos) cmd += " {sol}";
  cmd = replace_all(replace_all(cmd, "{lp}", shell_quote(lp_path.string())), "{sol}", shell_quote(sol_path.string()));
  const int rc = std::system(cmd.c_str());
  std::error_code ec;
  std::filesystem::remove(lp_path, ec);
  if (rc != 0) {
    std::filesystem::remove(sol_path, ec);
    throw IoError("external solver command failed with status " + std::to_string(rc));
  }
  std::ifstream in(sol_path, std::ios::binary);
  if (!in) throw IoError("external solver produced no solution file");
  std::ostringstream s;
  s << in.rdbuf();
  in.close();
  std::filesystem::remove(sol_path, ec);
  return read_solution(s.str(), model);
}

}  // namespace goml::milp
