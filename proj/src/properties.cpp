// Copyright 2026 The petzlab Authors
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

#include "petz/properties.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "petz/entropy.hpp"
#include "petz/json_io.hpp"

namespace petz {

namespace {

// Salts for derive_seed.
enum Salt : std::uint64_t {
  kSaltReference = 1,
  kSaltState = 2,
  kSaltChannel = 3,
  kSaltElement = 10,
  kSaltTargetElement = 11,
  kSaltSecondState = 12,
  kSaltProbe = 13,
};

// Absolute allowance for bounds whose right-hand side is exactly zero in
// theory (delta = 0), where only roundoff is left to measure.
constexpr double kRoundoffFloor = 1e-12;

PropertyOutcome outcome(double slack, double tolerance, std::string detail = {}) {
  return {slack >= -tolerance, slack, std::move(detail)};
}

// Accumulates the worst margin over several checks.
struct Worst {
  double slack = kInf;
  double tolerance = 0.0;
  std::string detail;

  // Keeps the check closest to (or furthest past) its threshold.
  void add(double s, double tol, const std::string& what) {
    if (slack == kInf || s + tol < slack + tolerance) {
      slack = s;
      tolerance = tol;
      detail = what;
    }
  }
  PropertyOutcome result() const {
    if (slack == kInf) return {true, 0.0, "no checks"};
    return {slack >= -tolerance, slack, detail};
  }
};

double residual(const Superoperator& x, const Superoperator& y) {
  return operator_norm(x.matrix() - y.matrix());
}

double hs_norm(const Element& x) { return schatten_p_norm(x, 2.0); }

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> finite_ps(const std::vector<double>& ps) {
  std::vector<double> out;
  for (double p : ps) {
    if (p != kInf) out.push_back(p);
  }
  return out;
}

// ----- algebra-core ---------------------------------------------------------

PropertyOutcome tau_faithfulness(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const Element x = random_element(in.b.algebra(), derive_seed(in.spec.seed, kSaltElement));
  const Element xx(x.algebra(), x.matrix().adjoint() * x.matrix());
  const complex v = tau(xx);
  const double fro2 = x.matrix().squaredNorm();
  Worst w;
  w.add(v.real() - 1e-14 * fro2, 0.0, "tau(X*X) below faithfulness floor");
  w.add(1e-12 * fro2 - std::abs(v.imag()), 0.0, "tau(X*X) not real");
  return w.result();
}

PropertyOutcome traciality(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const TracialAlgebra alg = in.b.algebra();
  const Element x = random_element(alg, derive_seed(in.spec.seed, kSaltElement));
  const Element y = random_element(alg, derive_seed(in.spec.seed, kSaltElement, 1));
  const complex xy = tau(Element(alg, x.matrix() * y.matrix()));
  const complex yx = tau(Element(alg, y.matrix() * x.matrix()));
  const double bound = 1e-12 * hs_norm(x) * hs_norm(y);
  return outcome(bound - std::abs(xy - yx), 0.0, "|tau(XY) - tau(YX)|");
}

PropertyOutcome norm_equivalence(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const Element x = random_element(in.b.algebra(), derive_seed(in.spec.seed, kSaltElement));
  Worst w;
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    const double inv_q = p == kInf ? 1.0 : 1.0 - 1.0 / p;
    const double up = operator_norm(in.b.power(-inv_q));
    const double down = operator_norm(in.b.power(inv_q));
    const double wp = weighted_p_norm(x, in.b, p);
    const double pp = schatten_p_norm(x, p);
    const double rel = 1e-12 * std::max(wp, pp);
    w.add(up * pp - wp, rel, "||X||_{B,p} <= ||B^{-1/q}|| ||X||_p at p=" + str(p));
    w.add(down * wp - pp, rel, "||X||_p <= ||B^{1/q}|| ||X||_{B,p} at p=" + str(p));
  }
  return w.result();
}

PropertyOutcome weighted_inner_isometry(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const TracialAlgebra alg = in.b.algebra();
  const Element x = random_element(alg, derive_seed(in.spec.seed, kSaltElement));
  const Element y = random_element(alg, derive_seed(in.spec.seed, kSaltElement, 1));
  const complex direct = weighted_inner(x, y, in.b);
  const complex conj = hs_inner(weighted_conjugation(x, in.b, Direction::kForward),
                                weighted_conjugation(y, in.b, Direction::kForward));
  return outcome(1e-10 - std::abs(direct - conj), 0.0, "<X,Y>_B vs <C_B X, C_B Y>");
}

// ----- channels -------------------------------------------------------------

PropertyOutcome unital_cp_contraction(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const Element y = random_element(in.phi.target(), derive_seed(in.spec.seed, kSaltTargetElement));
  const Superoperator adj = in.phi.adjoint();
  const double lhs = operator_norm(adj.apply(y).matrix());
  const double rhs = operator_norm(y.matrix());
  return outcome(rhs - lhs, 1e-12 * rhs, "||phi*(Y)||_inf <= ||Y||_inf");
}

PropertyOutcome kraus_tp_equivalence(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  if (!in.kraus) return {true, 0.0, "no Kraus representation"};
  const TracialAlgebra src = in.phi.source();
  const TracialAlgebra tgt = in.phi.target();
  const bool kraus_tp = kraus_tp_residual(*in.kraus, src, tgt) <= 1e-10;
  const bool super_tp = is_tp(in.phi, ctx.tol);
  KrausSpec scaled = *in.kraus;
  for (Matrix& k : scaled.operators) k *= 1.01;
  const bool scaled_kraus_tp = kraus_tp_residual(scaled, src, tgt) <= 1e-10;
  const bool scaled_super_tp = is_tp(from_kraus(scaled, src, tgt), ctx.tol);
  const bool ok = kraus_tp && super_tp && !scaled_kraus_tp && !scaled_super_tp;
  return {ok, ok ? 0.0 : -1.0, ok ? "" : "Kraus and superoperator TP tests disagree"};
}

PropertyOutcome cp_closed_under_composition(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const ChannelChecks f = verify(in.phi, ctx.tol);
  const ChannelChecks g = verify(ctx.analysis.petz, ctx.tol);
  if (!f.is_cp || !g.is_cp) return {false, -1.0, "factor not CP"};
  const ChannelChecks h = verify(ctx.analysis.iteration, ctx.tol);
  const double scale = std::max(std::abs(h.choi_max_eig), 1e-300);
  return outcome(h.choi_min_eig, ctx.tol.cp * scale, "lambda_min(Choi(R o phi))");
}

PropertyOutcome trace_norm_contraction(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  Worst w;
  const Element x = random_element(in.phi.source(), derive_seed(in.spec.seed, kSaltElement));
  const Element h = random_hermitian(in.phi.source(), derive_seed(in.spec.seed, kSaltElement, 2));
  for (const Element& e : {x, h}) {
    const double rhs = schatten_p_norm(e, 1.0);
    w.add(rhs - schatten_p_norm(in.phi.apply(e), 1.0), 1e-12 * rhs, "||phi(X)||_1 <= ||X||_1");
  }
  return w.result();
}

// ----- petz-engine ----------------------------------------------------------

PropertyOutcome psi_cptp(const PropertyContext& ctx) {
  const ChannelChecks c = verify(ctx.analysis.psi, ctx.tol);
  Worst w;
  w.add(c.choi_min_eig, ctx.tol.cp * std::max(std::abs(c.choi_max_eig), 1e-300),
        "lambda_min(Choi(psi))");
  w.add(-c.tp_residual, 1e-9, "psi trace preservation residual");
  return w.result();
}

PropertyOutcome psi_projection_laws(const PropertyContext& ctx) {
  const PetzAnalysis& an = ctx.analysis;
  Worst w;
  w.add(-residual(compose(an.psi, an.psi), an.psi), 1e-9, "psi o psi = psi");
  w.add(-residual(compose(an.iteration, an.psi), an.psi), 1e-9, "(R o phi) o psi = psi");
  w.add(-residual(compose(an.psi, an.iteration), an.psi), 1e-9, "psi o (R o phi) = psi");
  return w.result();
}

PropertyOutcome psi_fixes_reference(const PropertyContext& ctx) {
  const auto& b = ctx.instance.b;
  return outcome(-hs_norm(ctx.analysis.psi.apply(b.element()) - b.element()), 1e-9, "psi(B) = B");
}

PropertyOutcome iteration_operator_psd(const PropertyContext& ctx) {
  const HermEig eig = herm_eig(ctx.analysis.conjugated_iteration);
  return outcome(eig.values(0), 1e-9, "lambda_min of symmetrized iteration operator");
}

PropertyOutcome fixed_space_duality(const PropertyContext& ctx) {
  const PetzAnalysis& an = ctx.analysis;
  const Reference& b = ctx.instance.b;
  Worst w;
  for (const Element& x : an.basis_v) {
    const double nx = hs_norm(x);
    w.add(1e-8 * nx - hs_norm(an.iteration.apply(x) - x), 0.0, "fixed vector moved");
  }
  const TracialAlgebra alg = b.algebra();
  const auto d = an.fixed_projection.rows();
  const Matrix complement = Matrix::Identity(d, d) - an.fixed_projection;
  for (int k = 0; k < 3; ++k) {
    const Element x = random_element(alg, derive_seed(ctx.instance.spec.seed, kSaltElement, 20 + k));
    const Vector c = complement * coordinates(weighted_conjugation(x, b, Direction::kForward));
    const Element perp = weighted_conjugation(from_coordinates(alg, c), b, Direction::kInverse);
    const double before = weighted_p_norm(perp, b, 2.0);
    const double after = weighted_p_norm(an.iteration.apply(perp), b, 2.0);
    w.add((an.delta + 1e-8) * before - after, kRoundoffFloor * weighted_p_norm(x, b, 2.0),
          "complement vector contracts by delta");
  }
  return w.result();
}

PropertyOutcome monotone_l1_convergence(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const IterationTrace tr = iterate(ctx.analysis, in.b, in.a, in.spec.n_max, {}, ctx.tol);
  const double a1 = schatten_p_norm(in.a.element(), 1.0);
  const double c0 = tr.rows.front().dist_b2;
  Worst w;
  for (std::size_t k = 1; k < tr.rows.size(); ++k) {
    const double prev = tr.rows[k - 1].dist_l1;
    w.add(prev - tr.rows[k].dist_l1, 1e-12 * prev + 1e-15, "L1 distance increased at n=" +
                                                              std::to_string(tr.rows[k].n));
    // ||X||_1 <= ||X||_{B,2} since tau(B) = 1.
    if (std::pow(ctx.analysis.delta, tr.rows[k].n) * c0 < 1e-8) {
      w.add(1e-8 * a1 - tr.rows[k].dist_l1, 0.0,
            "L1 distance not below 1e-8 at n=" + std::to_string(tr.rows[k].n));
    }
  }
  return w.result();
}

PropertyOutcome spectral_certificate(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const PetzAnalysis& an = ctx.analysis;
  Worst w;
  for (int n = 1; n <= in.spec.n_max; ++n) {
    const double bound = std::pow(an.delta, n) * (1.0 + 1e-8);
    w.add(bound - deviation_norm(an, n), kRoundoffFloor,
          "operator certificate at n=" + std::to_string(n));
  }
  const IterationTrace tr = iterate(an, in.b, in.a, in.spec.n_max, {}, ctx.tol);
  for (const IterationRow& row : tr.rows) {
    w.add(row.cert_delta_pow * (1.0 + 1e-8) - row.dist_b2, kRoundoffFloor,
          "per-state certificate at n=" + std::to_string(row.n));
  }
  return w.result();
}

PropertyOutcome interpolation_certificate(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const PetzAnalysis& an = ctx.analysis;
  const std::vector<double> ps = {1.25, 1.5, 1.75};
  const IterationTrace tr = iterate(an, in.b, in.a, in.spec.n_max, ps, ctx.tol);
  Worst w;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double p = ps[i];
    const double a_bp = weighted_p_norm(in.a.element(), in.b, p);
    for (const IterationRow& row : tr.rows) {
      const double op = std::pow(an.delta, row.n);
      const double bound =
          std::pow(2.0, 2.0 / p - 1.0) * std::pow(op, 2.0 * (1.0 - 1.0 / p)) * a_bp;
      w.add(bound * (1.0 + 1e-8) - row.dist_bp[i], kRoundoffFloor,
            "p=" + str(p) + " n=" + std::to_string(row.n));
    }
  }
  return w.result();
}

PropertyOutcome decomposition(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const PetzAnalysis& an = ctx.analysis;
  const Decomposition d = decompose(an, in.a, ctx.tol);
  Worst w;
  const double scale = hs_norm(in.a.element());
  w.add(-d.reconstruction_residual, 1e-15 * scale, "A = A0 + C");
  w.add(-d.recoverability_residual, 1e-9, "(R o phi)(A0) = A0");
  w.add(-d.psi_c_residual, 1e-9, "psi(C) = 0");
  w.add(-std::abs(d.tau_a0 - 1.0), 1e-10, "tau(A0) = 1");
  if (an.delta > 0.0) {
    const int n_star = static_cast<int>(std::ceil(std::log(1e-8) / std::log(an.delta)));
    const double c1 = schatten_p_norm(d.c, 1.0);
    for (int n : {n_star, n_star + 1, n_star + 5}) {
      const double val = schatten_p_norm(deviation(an, n).apply(d.c), 1.0);
      w.add(1e-8 * c1 - val, 0.0, "||(R o phi)^n(C)||_1 at n=" + std::to_string(n));
    }
  }
  return w.result();
}

PropertyOutcome l1_probe_monotone(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const PetzAnalysis& an = ctx.analysis;
  const int n_max = std::min(in.spec.n_max, 6);
  const std::vector<double> probe =
      l1_norm_probe_sequence(an, n_max, 4, derive_seed(in.spec.seed, kSaltProbe));
  const Element c = in.a.element() - an.psi.apply(in.a.element());
  Worst w;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      w.add(probe[n - 1] * (1.0 + 1e-8) - probe[n], kRoundoffFloor,
            "probe increased at n=" + std::to_string(n));
    }
    w.add(probe[n] - l1_ratio(an, n, c), kRoundoffFloor,
          "probe below per-state ratio at n=" + std::to_string(n));
  }
  return w.result();
}

// ----- entropy-metrics ------------------------------------------------------

PropertyOutcome dpi(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  Worst w;
  for (double p : in.spec.p_list) {
    w.add(dpi_gap(in.phi, in.a, in.b, p, ctx.tol), 1e-9, "dpi_gap at p=" + str(p));
  }
  return w.result();
}

PropertyOutcome weighted_contraction(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const Element x = random_element(in.phi.source(), derive_seed(in.spec.seed, kSaltElement));
  Worst w;
  for (double p : in.spec.p_list) {
    const ContractionCheck c = weighted_contraction_check(in.phi, in.b, x, p, ctx.tol);
    w.add(c.rhs - c.lhs, 1e-9, "||phi(X)||_{phi(B),p} <= ||X||_{B,p} at p=" + str(p));
  }
  return w.result();
}

PropertyOutcome recoverability_chain(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const BoundReport r = recoverability_bound(in.phi, in.b, in.a, ctx.tol);
  Worst w;
  w.add(r.slack_lower, kBoundSlack, "4[1-F]^2 <= ||A - R phi A||_1^2");
  w.add(r.slack_upper, kBoundSlack, "||A - R phi A||_1^2 <= S_2 gap");
  return w.result();
}

PropertyOutcome fidelity_bounds(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  const State recovered(ctx.analysis.iteration.apply(in.a.element()), ctx.tol);
  const State other = random_state(in.a.algebra(), derive_seed(in.spec.seed, kSaltSecondState));
  Worst w;
  for (const State* s : {&recovered, &other}) {
    const double f = fidelity(in.a, *s);
    w.add(f, 1e-10, "F >= 0");
    w.add(1.0 - f, 1e-10, "F <= 1");
    w.add(schatten_p_norm(in.a.element() - s->element(), 1.0) - 2.0 * (1.0 - f), 1e-10,
          "2(1 - F) <= ||A1 - A2||_1");
  }
  return w.result();
}

PropertyOutcome entropy_norm_consistency(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  Worst w;
  for (double p : finite_ps(in.spec.p_list)) {
    const double s = sandwiched_entropy(in.a, in.b, p);
    const double n = std::pow(sandwiched_entropy_norm_form(in.a, in.b, p), p);
    w.add(-std::abs(s - n), 1e-10 * std::max(1.0, s), "S_p vs ||A||_{B,p}^p at p=" + str(p));
  }
  return w.result();
}

PropertyOutcome entropy_monotone_in_p(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  std::vector<double> ps = finite_ps(in.spec.p_list);
  std::sort(ps.begin(), ps.end());
  Worst w;
  for (std::size_t k = 1; k < ps.size(); ++k) {
    const double lo = sandwiched_entropy(in.a, in.b, ps[k - 1]);
    const double hi = sandwiched_entropy(in.a, in.b, ps[k]);
    w.add(hi - lo, 1e-10 * std::max(1.0, hi), "S_p decreased between p=" + str(ps[k - 1]) +
                                                  " and p=" + str(ps[k]));
  }
  return w.result();
}

// ----- cli-harness ----------------------------------------------------------

PropertyOutcome matrix_json_roundtrip(const PropertyContext& ctx) {
  const auto& in = ctx.instance;
  bool ok = true;
  for (const Matrix* m : {&in.a.matrix(), &in.b.matrix(), &ctx.analysis.psi.matrix()}) {
    const json j = json::parse(matrix_to_json(*m).dump());
    ok = ok && matrix_from_json(j) == *m;
  }
  return {ok, ok ? 0.0 : -1.0, ok ? "" : "matrix changed across JSON round-trip"};
}

std::vector<Property> build_registry() {
  return {
      {"tau_faithfulness", "algebra-core", false, tau_faithfulness},
      {"traciality", "algebra-core", false, traciality},
      {"norm_equivalence", "algebra-core", false, norm_equivalence},
      {"weighted_inner_isometry", "algebra-core", false, weighted_inner_isometry},
      {"unital_cp_contraction", "channels", false, unital_cp_contraction},
      {"kraus_tp_equivalence", "channels", false, kraus_tp_equivalence},
      {"cp_closed_under_composition", "channels", false, cp_closed_under_composition},
      {"trace_norm_contraction", "channels", false, trace_norm_contraction},
      {"psi_cptp", "petz-engine", false, psi_cptp},
      {"psi_projection_laws", "petz-engine", false, psi_projection_laws},
      {"psi_fixes_reference", "petz-engine", false, psi_fixes_reference},
      {"iteration_operator_psd", "petz-engine", false, iteration_operator_psd},
      {"fixed_space_duality", "petz-engine", false, fixed_space_duality},
      {"monotone_l1_convergence", "petz-engine", false, monotone_l1_convergence},
      {"spectral_certificate", "petz-engine", false, spectral_certificate},
      {"interpolation_certificate", "petz-engine", false, interpolation_certificate},
      {"decomposition", "petz-engine", false, decomposition},
      {"l1_probe_monotone", "petz-engine", false, l1_probe_monotone},
      {"dpi", "entropy-metrics", false, dpi},
      {"weighted_contraction", "entropy-metrics", false, weighted_contraction},
      {"recoverability_chain", "entropy-metrics", false, recoverability_chain},
      {"fidelity_bounds", "entropy-metrics", false, fidelity_bounds},
      {"entropy_norm_consistency", "entropy-metrics", false, entropy_norm_consistency},
      {"entropy_monotone_in_p", "entropy-metrics", true, entropy_monotone_in_p},
      {"matrix_json_roundtrip", "cli-harness", false, matrix_json_roundtrip},
  };
}

// ---------------------------------------------------------------------------

void validate_spec(const InstanceSpec& s) {
  if (s.dim < 1 || s.target_dim < 1) throw InvalidArgument("InstanceSpec: dimensions must be >= 1");
  if (s.rank < 1) throw InvalidArgument("InstanceSpec: rank must be >= 1");
  if (!(s.cond_cap >= 1.0)) throw InvalidArgument("InstanceSpec: cond_cap must be >= 1");
  if (s.n_max < 1) throw InvalidArgument("InstanceSpec: n_max must be >= 1");
  for (double p : s.p_list) {
    if (!(p >= 1.0)) throw InvalidArgument("InstanceSpec: p values must be >= 1");
  }
  static const std::vector<std::string> kinds = {"random", "unitary", "mixed_unitary",
                                                 "depolarizing_like", "pinching"};
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end()) {
    throw InvalidArgument("InstanceSpec: unknown channel kind \"" + s.kind + "\"");
  }
  if (s.kind != "random" && s.target_dim != s.dim) {
    throw InvalidArgument("InstanceSpec: kind \"" + s.kind + "\" needs target_dim == dim");
  }
}

struct BuiltChannel {
  Superoperator phi;
  std::optional<KrausSpec> kraus;
};

BuiltChannel build_channel(const InstanceSpec& s, TracialAlgebra alg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (s.kind == "random") {
    KrausSpec k = random_kraus(alg, s.target_dim, s.rank, seed);
    Superoperator phi = from_kraus(k, alg, TracialAlgebra(s.target_dim));
    return {std::move(phi), std::move(k)};
  }
  if (s.kind == "unitary") {
    KrausSpec k{{random_unitary(s.dim, rng)}};
    return {from_kraus(k, alg, alg), std::move(k)};
  }
  if (s.kind == "mixed_unitary") {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> weights;
    std::vector<Matrix> unitaries;
    double total = 0.0;
    for (int r = 0; r < s.rank; ++r) {
      weights.push_back(expo(rng));
      total += weights.back();
      unitaries.push_back(random_unitary(s.dim, rng));
    }
    KrausSpec k;
    for (int r = 0; r < s.rank; ++r) {
      weights[r] /= total;
      k.operators.push_back(std::sqrt(weights[r]) * unitaries[r]);
    }
    return {from_kraus(k, alg, alg), std::move(k)};
  }
  if (s.kind == "depolarizing_like") {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return {depolarizing_like(alg, unif(rng)), std::nullopt};
  }
  // pinching with a random composition of dim
  std::bernoulli_distribution cut(0.5);
  std::vector<int> blocks{1};
  for (int i = 1; i < s.dim; ++i) {
    if (cut(rng)) {
      blocks.push_back(1);
    } else {
      ++blocks.back();
    }
  }
  KrausSpec k;
  int offset = 0;
  for (int b : blocks) {
    Matrix p = Matrix::Zero(s.dim, s.dim);
    p.block(offset, offset, b, b).setIdentity();
    k.operators.push_back(std::move(p));
    offset += b;
  }
  return {from_kraus(k, alg, alg), std::move(k)};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(attempt)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Instance generate(const InstanceSpec& spec, const Tolerances& tol) {
  validate_spec(spec);
  const TracialAlgebra alg(spec.dim);
  Reference b = random_reference(alg, derive_seed(spec.seed, kSaltReference), spec.cond_cap);
  State a = random_state(alg, derive_seed(spec.seed, kSaltState));
  std::string last_reason = "not strict";
  for (int attempt = 0; attempt <= kMaxGenerationRetries; ++attempt) {
    try {
      BuiltChannel c = build_channel(spec, alg, derive_seed(spec.seed, kSaltChannel, attempt));
      const ChannelChecks checks = verify(c.phi, tol);
      if (checks.is_cp && checks.is_tp && checks.is_strict) {
        return Instance{spec, c.phi.verified(tol), std::move(b), std::move(a), std::move(c.kraus),
                        attempt};
      }
      last_reason = "lambda_min(phi(I)) = " + str(checks.strict_min_eig);
    } catch (const InvalidArgument& e) {
      last_reason = e.what();
    }
  }
  throw GenerationError("generate: no strict channel after " +
                        std::to_string(kMaxGenerationRetries) + " retries (seed " +
                        std::to_string(spec.seed) + ", dim " + std::to_string(spec.dim) +
                        ", target_dim " + std::to_string(spec.target_dim) + ", rank " +
                        std::to_string(spec.rank) + "): " + last_reason);
}

const std::vector<Property>& property_registry() {
  static const std::vector<Property> registry = build_registry();
  return registry;
}

const Property* find_property(const std::string& name) {
  for (const Property& p : property_registry()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::vector<std::string> all_property_names() {
  std::vector<std::string> names;
  for (const Property& p : property_registry()) names.push_back(p.name);
  return names;
}

std::vector<InstanceSpec> sweep_specs(const InstanceSpec& shape, int count, std::uint64_t base_seed) {
  std::vector<InstanceSpec> out;
  out.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    InstanceSpec s = shape;
    s.seed = base_seed + static_cast<std::uint64_t>(i);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

PropertyOutcome evaluate(const Property& property, const Instance& instance,
                         const PetzAnalysis& analysis, const Tolerances& tol) {
  try {
    return property.check(PropertyContext{instance, analysis, tol});
  } catch (const std::exception& e) {
    return {false, -kInf, std::string("exception: ") + e.what()};
  }
}

struct SpecResult {
  std::optional<std::string> rejection;
  std::vector<PropertyOutcome> outcomes;
};

SpecResult run_one(const InstanceSpec& spec, const std::vector<const Property*>& props,
                   const Tolerances& tol) {
  SpecResult r;
  std::optional<Instance> instance;
  try {
    instance.emplace(generate(spec, tol));
  } catch (const std::exception& e) {
    r.rejection = e.what();
    return r;
  }
  std::optional<PetzAnalysis> analysis;
  std::string failure;
  try {
    analysis.emplace(fixed_point_analysis(instance->phi, instance->b, 1e-8, tol));
  } catch (const std::exception& e) {
    failure = std::string("fixed_point_analysis failed: ") + e.what();
  }
  for (const Property* p : props) {
    if (!analysis) {
      r.outcomes.push_back({false, -kInf, failure});
    } else {
      r.outcomes.push_back(evaluate(*p, *instance, *analysis, tol));
    }
  }
  return r;
}

}  // namespace

bool fails_on(const Property& property, const InstanceSpec& spec, const Tolerances& tol) {
  std::optional<Instance> generated;
  try {
    generated.emplace(generate(spec, tol));
  } catch (const std::exception&) {
    // An instance that cannot be built says nothing about the property.
    return false;
  }
  try {
    const Instance& instance = *generated;
    const PetzAnalysis analysis = fixed_point_analysis(instance.phi, instance.b, 1e-8, tol);
    const PropertyOutcome o = evaluate(property, instance, analysis, tol);
    return !o.pass;
  } catch (const std::exception&) {
    return true;
  }
}

SuiteReport run_properties(const std::vector<InstanceSpec>& specs,
                           const std::vector<std::string>& registry, const SuiteOptions& options) {
  std::vector<const Property*> props;
  for (const std::string& name : registry) {
    const Property* p = find_property(name);
    if (!p) throw InvalidArgument("run_properties: unknown property \"" + name + "\"");
    props.push_back(p);
  }

  std::vector<SpecResult> results(specs.size());
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(specs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) results[i] = run_one(specs[i], props, options.tol);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
          results[i] = run_one(specs[i], props, options.tol);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  SuiteReport report;
  for (const Property* p : props) {
    PropertyReport pr;
    pr.name = p->name;
    pr.informational = p->informational;
    report.properties.push_back(std::move(pr));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SpecResult& r = results[i];
    if (r.rejection) {
      report.rejected.push_back({specs[i], *r.rejection});
      continue;
    }
    for (std::size_t k = 0; k < props.size(); ++k) {
      PropertyReport& pr = report.properties[k];
      const PropertyOutcome& o = r.outcomes[k];
      pr.worst_slack = pr.worst_slack ? std::min(*pr.worst_slack, o.slack) : o.slack;
      if (o.pass) {
        ++pr.pass;
        continue;
      }
      ++pr.fail;
      if (pr.counterexamples.size() < options.max_counterexamples) {
        InstanceSpec ce = specs[i];
        if (options.shrink_counterexamples) {
          const Property& prop = *props[k];
          const Tolerances tol = options.tol;
          ce = shrink(ce, [&](const InstanceSpec& s) { return fails_on(prop, s, tol); });
        }
        pr.counterexamples.push_back(std::move(ce));
        pr.details.push_back(o.detail);
      }
    }
  }
  return report;
}

int exit_status(const SuiteReport& report) {
  if (!report.rejected.empty()) return 1;
  for (const PropertyReport& p : report.properties) {
    if (!p.informational && p.fail > 0) return 1;
  }
  return 0;
}

InstanceSpec shrink(const InstanceSpec& failing,
                    const std::function<bool(const InstanceSpec&)>& still_fails) {
  InstanceSpec best = failing;
  auto try_candidate = [&](InstanceSpec candidate) {
    if (candidate == best) return false;
    try {
      validate_spec(candidate);
    } catch (const InvalidArgument&) {
      return false;
    }
    if (!still_fails(candidate)) return false;
    best = std::move(candidate);
    return true;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    // Smallest dimension first, so each accepted step is as large as possible.
    for (int d = 1; d < best.dim && !progress; ++d) {
      InstanceSpec c = best;
      c.dim = d;
      if (best.target_dim == best.dim) c.target_dim = d;
      progress = try_candidate(c);
    }
    for (int m = 1; m < best.target_dim && !progress; ++m) {
      InstanceSpec c = best;
      c.target_dim = m;
      progress = try_candidate(c);
    }
    for (int r = 1; r < best.rank && !progress; ++r) {
      InstanceSpec c = best;
      c.rank = r;
      progress = try_candidate(c);
    }
    for (int n : {1, best.n_max / 2, best.n_max - 1}) {
      if (progress || n < 1 || n >= best.n_max) continue;
      InstanceSpec c = best;
      c.n_max = n;
      progress = try_candidate(c);
    }
  }
  return best;
}

}  // namespace petz
