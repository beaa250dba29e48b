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


#include "goml/encoder/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <type_traits>

#include "goml/core/error.hpp"

namespace goml::encoder {
namespace {

using milp::MilpModel;
using milp::Term;

void add_scaled(Affine& dst, const Affine& src, double w) {
  for (const auto& t : src.terms) dst.terms.push_back({t.var, w * t.coeff});
  dst.constant += w * src.constant;
}

/// Merges repeated variables and drops zero coefficients.
Affine compact(const Affine& e) {
  std::map<int, double> merged;
  for (const auto& t : e.terms) merged[t.var] += t.coeff;
  Affine out;
  out.constant = e.constant;
  for (const auto& [var, coeff] : merged) {
    if (coeff != 0.0) out.terms.push_back({var, coeff});
  }
  return out;
}

Affine inputs_dot(std::span<const double> a, const InputMap& in) {
  Affine e;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0.0) e.terms.push_back({in.vars.at(k), a[k]});
  }
  return e;
}

struct NormBound {
  int var = -1;
  double max = 0.0;
};

/// Variable t with t >= ||a (.) x||_q, where q is the dual of p.
NormBound norm_bound(std::span<const double> a, UncertaintyNorm p, const InputMap& in, MilpModel& milp) {
  std::vector<std::size_t> active;
  std::vector<double> reach;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    active.push_back(k);
    reach.push_back(std::fabs(a[k]) * std::max(std::fabs(in.box.lower[k]), std::fabs(in.box.upper[k])));
  }
  NormBound out;
  switch (p) {
    case UncertaintyNorm::kOne: {
      out.max = reach.empty() ? 0.0 : *std::max_element(reach.begin(), reach.end());
      out.var = milp.add_var(0.0, out.max);
      for (std::size_t k : active) {
        const int x = in.vars[k];
        milp.add_row({{out.var, 1.0}, {x, -a[k]}}, Sense::kGe, 0.0);
        milp.add_row({{out.var, 1.0}, {x, a[k]}}, Sense::kGe, 0.0);
      }
      break;
    }
    case UncertaintyNorm::kInf: {
      for (double r : reach) out.max += r;
      out.var = milp.add_var(0.0, out.max);
      std::vector<Term> sum{{out.var, -1.0}};
      for (std::size_t i = 0; i < active.size(); ++i) {
        const std::size_t k = active[i];
        const int x = in.vars[k];
        const int tk = milp.add_var(0.0, reach[i]);
        milp.add_row({{tk, 1.0}, {x, -a[k]}}, Sense::kGe, 0.0);
        milp.add_row({{tk, 1.0}, {x, a[k]}}, Sense::kGe, 0.0);
        sum.push_back({tk, 1.0});
      }
      milp.add_row(std::move(sum), Sense::kLe, 0.0);
      break;
    }
    case UncertaintyNorm::kTwo: {
      double sq = 0.0;
      for (double r : reach) sq += r * r;
      out.max = std::sqrt(sq);
      out.var = milp.add_var(0.0, out.max);
      milp::ConeRow cone;
      cone.bound = out.var;
      for (std::size_t k : active) cone.entries.push_back({in.vars[k], a[k]});
      milp.add_cone(std::move(cone));
      break;
    }
  }
  return out;
}

bool robust_active(const RobustConfig* robust) { return robust != nullptr && robust->rho > 0.0; }

}  // namespace

const char* to_string(UncertaintyNorm p) {
  switch (p) {
    case UncertaintyNorm::kOne: return "1";
    case UncertaintyNorm::kTwo: return "2";
    case UncertaintyNorm::kInf: return "inf";
  }
  return "?";
}

void RobustConfig::validate() const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw Error("robustness radius must be finite and non-negative");
}

double Affine::value(const std::vector<double>& x) const {
  double v = constant;
  for (const auto& t : terms) v += t.coeff * x[static_cast<std::size_t>(t.var)];
  return v;
}

double big_m_value(std::span<const double> a, double b, const Box& box) {
  double lo = -b;
  double hi = -b;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    const double p = a[k] * box.lower[k];
    const double q = a[k] * box.upper[k];
    lo += std::min(p, q);
    hi += std::max(p, q);
  }
  return std::max(1.0, 1.01 * std::max(std::fabs(lo), std::fabs(hi)));
}

Affine encode_linear_model(const learners::LinearModel& m, const InputMap& in, MilpModel&) {
  Affine e = inputs_dot(m.beta, in);
  e.constant = m.beta0;
  return e;
}

Affine robustify_linear(const learners::LinearModel& m, const RobustConfig& cfg, const InputMap& in,
                        MilpModel& milp) {
  cfg.validate();
  Affine e = encode_linear_model(m, in, milp);
  if (cfg.rho == 0.0) return e;
  const auto t = norm_bound(m.beta, cfg.p, in, milp);
  e.terms.push_back({t.var, -cfg.rho});
  return e;
}

Affine encode_tree(const learners::ObliqueTree& t, const InputMap& in, MilpModel& milp, const RobustConfig* robust) {
  if (robust != nullptr) robust->validate();
  const auto& nodes = t.nodes();
  const auto leaves = t.leaves();
  Affine out;
  if (leaves.size() == 1) {
    out.constant = nodes[static_cast<std::size_t>(leaves[0])].prediction;
    return out;
  }
  std::map<int, int> z_of;
  std::vector<Term> one;
  for (int leaf : leaves) {
    const int z = milp.add_binary();
    z_of[leaf] = z;
    one.push_back({z, 1.0});
    const double p = nodes[static_cast<std::size_t>(leaf)].prediction;
    if (p != 0.0) out.terms.push_back({z, p});
  }
  milp.add_row(std::move(one), Sense::kEq, 1.0);

  std::function<void(int, std::vector<Term>&)> collect = [&](int k, std::vector<Term>& acc) {
    const auto& n = nodes[static_cast<std::size_t>(k)];
    if (n.leaf) {
      acc.push_back({z_of.at(k), 0.0});
      return;
    }
    collect(n.left, acc);
    collect(n.right, acc);
  };

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& n = nodes[k];
    if (n.leaf) continue;
    double norm2 = 0.0;
    for (double v : n.a) norm2 += v * v;
    const double eps = 1e-6 * std::sqrt(norm2);
    double m = big_m_value(n.a, n.b, in.box);
    NormBound nb;
    if (robust_active(robust) && norm2 > 0.0) {
      nb = norm_bound(n.a, robust->p, in, milp);
      m += 1.01 * robust->rho * nb.max;
    }
    m += eps;
    const auto side_row = [&](int child, double sign, double rhs) {
      std::vector<Term> terms = inputs_dot(n.a, in).terms;
      for (auto& term : terms) term.coeff *= sign;
      if (nb.var >= 0) terms.push_back({nb.var, robust->rho});
      std::vector<Term> zs;
      collect(child, zs);
      for (auto& z : zs) terms.push_back({z.var, m});
      const int row = milp.add_row(std::move(terms), Sense::kLe, rhs + m);
      milp.add_big_m(row, m);
    };
    side_row(n.left, 1.0, n.b);
    side_row(n.right, -1.0, -n.b - eps);
  }
  return out;
}

Affine encode_gbm(const learners::GbmEnsemble& g, const InputMap& in, MilpModel& milp, const RobustConfig* robust) {
  Affine out;
  out.constant = g.base;
  for (std::size_t i = 0; i < g.trees.size(); ++i) {
    add_scaled(out, encode_tree(g.trees[i], in, milp, robust), g.weights.at(i));
  }
  return compact(out);
}

Affine encode_mlp(const learners::Mlp& m, const InputMap& in, MilpModel& milp) {
  if (m.layers.empty()) throw Error("MLP has no layers");
  std::vector<Affine> h;
  std::vector<double> lo = in.box.lower;
  std::vector<double> hi = in.box.upper;
  for (int v : in.vars) h.push_back({{{v, 1.0}}, 0.0});
  const auto pre_activation = [&](const learners::DenseLayer& layer, std::size_t j, double& plo, double& phi) {
    Affine pre;
    pre.constant = layer.bias[j];
    plo = phi = layer.bias[j];
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double w = layer.weights[j][i];
      if (w == 0.0) continue;
      add_scaled(pre, h[i], w);
      plo += std::min(w * lo[i], w * hi[i]);
      phi += std::max(w * lo[i], w * hi[i]);
    }
    return compact(pre);
  };
  for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    std::vector<Affine> next;
    std::vector<double> nlo;
    std::vector<double> nhi;
    for (std::size_t j = 0; j < layer.outputs(); ++j) {
      double plo = 0.0;
      double phi = 0.0;
      Affine pre = pre_activation(layer, j, plo, phi);
      if (phi <= 0.0) {
        next.push_back({});
        nlo.push_back(0.0);
        nhi.push_back(0.0);
        continue;
      }
      if (plo >= 0.0) {
        next.push_back({{{materialize(pre, milp), 1.0}}, 0.0});
        nlo.push_back(plo);
        nhi.push_back(phi);
        continue;
      }
      const int v = milp.add_var(0.0, phi);
      const int z = milp.add_binary();
      // v >= pre
      std::vector<Term> ge{{v, 1.0}};
      for (const auto& t : pre.terms) ge.push_back({t.var, -t.coeff});
      milp.add_row(ge, Sense::kGe, pre.constant);
      // v <= pre - lo (1 - z)
      std::vector<Term> le = ge;
      le.push_back({z, -plo});
      const int r1 = milp.add_row(std::move(le), Sense::kLe, pre.constant - plo);
      milp.add_big_m(r1, -plo);
      // v <= hi z
      const int r2 = milp.add_row({{v, 1.0}, {z, -phi}}, Sense::kLe, 0.0);
      milp.add_big_m(r2, phi);
      next.push_back({{{v, 1.0}}, 0.0});
      nlo.push_back(0.0);
      nhi.push_back(phi);
    }
    h = std::move(next);
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  const auto& last = m.layers.back();
  if (last.outputs() != 1) throw Error("MLP must have a single output unit");
  double plo = 0.0;
  double phi = 0.0;
  return pre_activation(last, 0, plo, phi);
}

Affine encode_surrogate(const learners::Surrogate& s, const InputMap& in, MilpModel& milp,
                        const RobustConfig* robust) {
  const bool classifier = s.task == Task::kClassifier;
  return std::visit(
      [&](const auto& model) -> Affine {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, learners::LinearModel>) {
          if (classifier && robust != nullptr && robust->linear) return robustify_linear(model, *robust, in, milp);
          return encode_linear_model(model, in, milp);
        } else if constexpr (std::is_same_v<T, learners::ObliqueTree>) {
          return encode_tree(model, in, milp, classifier && robust != nullptr && robust->trees ? robust : nullptr);
        } else if constexpr (std::is_same_v<T, learners::GbmEnsemble>) {
          return encode_gbm(model, in, milp, classifier && robust != nullptr && robust->gbm ? robust : nullptr);
        } else {
          return encode_mlp(model, in, milp);
        }
      },
      s.model);
}

int materialize(const Affine& expr, MilpModel& milp) {
  const int y = milp.add_var(-kInf, kInf);
  std::vector<Term> terms{{y, 1.0}};
  for (const auto& t : expr.terms) terms.push_back({t.var, -t.coeff});
  milp.add_row(std::move(terms), Sense::kEq, expr.constant);
  return y;
}

MilpModel assemble(const StandardProblem& sp, const SurrogateSet& surrogates, const RobustConfig* robust,
                   const RelaxConfig* relax) {
  const Problem& p = sp.problem;
  if (surrogates.constraints.size() != p.nonlinear.size()) {
    throw Error("expected one surrogate per nonlinear constraint");
  }
  if (robust != nullptr) robust->validate();
  const bool relaxed = relax != nullptr && relax->enabled;
  if (relaxed && !(relax->lambda > 0.0)) throw Error("relaxation penalty must be positive");
  MilpModel milp;
  for (const auto& v : p.vars) {
    milp.add_var(v.lower, v.upper, v.integral ? milp::VarType::kInteger : milp::VarType::kContinuous);
  }
  for (const auto& row : p.linear) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
      if (row.coeffs[j] != 0.0) terms.push_back({static_cast<int>(j), row.coeffs[j]});
    }
    milp.add_row(std::move(terms), row.sense, row.rhs);
  }
  const Box box = p.box();

  const auto begin_record = [&](const std::string& key) {
    milp::SurrogateRecord r;
    r.key = key;
    r.aux.push_back(milp.num_vars());
    r.rows.push_back(milp.num_rows());
    return r;
  };
  const auto finish_record = [&](milp::SurrogateRecord r) {
    const int var0 = r.aux.front();
    const int row0 = r.rows.front();
    r.aux.clear();
    r.rows.clear();
    for (int j = var0; j < milp.num_vars(); ++j) {
      if (j == r.output || j == r.relax) continue;
      (milp.vars()[static_cast<std::size_t>(j)].type == milp::VarType::kBinary ? r.binaries : r.aux).push_back(j);
    }
    for (int i = row0; i < milp.num_rows(); ++i) r.rows.push_back(i);
    milp.add_record(std::move(r));
  };

  for (std::size_t i = 0; i < p.nonlinear.size(); ++i) {
    const auto& con = p.nonlinear[i];
    const auto& s = surrogates.constraints[i];
    InputMap in{s.inputs, box.subset(s.inputs)};
    auto record = begin_record(con.name());
    const Affine expr = encode_surrogate(s, in, milp, robust);
    std::vector<Term> terms = expr.terms;
    if (relaxed) record.relax = milp.add_var(0.0, kInf);
    if (con.kind() == ConstraintKind::kInequality) {
      if (s.task != Task::kClassifier) throw Error("inequality '" + con.name() + "' needs a classifier surrogate");
      if (relaxed) terms.push_back({record.relax, 1.0});
      milp.add_row(std::move(terms), Sense::kGe, s.threshold - expr.constant);
    } else {
      if (s.task != Task::kRegressor) throw Error("equality '" + con.name() + "' needs a regression surrogate");
      record.output = materialize(expr, milp);
      std::vector<Term> upper{{record.output, 1.0}};
      std::vector<Term> lower{{record.output, 1.0}};
      if (relaxed) {
        upper.push_back({record.relax, -1.0});
        lower.push_back({record.relax, 1.0});
      }
      milp.add_row(std::move(upper), Sense::kLe, kEqualityBand);
      milp.add_row(std::move(lower), Sense::kGe, -kEqualityBand);
    }
    if (relaxed) milp.set_objective(record.relax, relax->lambda);
    finish_record(std::move(record));
  }

  if (p.objective.is_linear()) {
    for (std::size_t j = 0; j < p.objective.coeffs.size(); ++j) {
      if (p.objective.coeffs[j] != 0.0) milp.add_objective(static_cast<int>(j), p.objective.coeffs[j]);
    }
    milp.set_objective_constant(p.objective.constant);
  } else {
    if (!surrogates.objective) throw Error("nonlinear objective needs a regression surrogate");
    const auto& s = *surrogates.objective;
    InputMap in{s.inputs, box.subset(s.inputs)};
    auto record = begin_record("objective");
    record.output = materialize(encode_surrogate(s, in, milp), milp);
    milp.add_objective(record.output, 1.0);
    finish_record(std::move(record));
  }
  milp.validate();
  return milp;
}

double relaxation_total(const MilpModel& model, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& r : model.records()) {
    if (r.relax >= 0) total += x[static_cast<std::size_t>(r.relax)];
  }
  return total;
}

}  // namespace goml::encoder
