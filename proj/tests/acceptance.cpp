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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "petz/entropy.hpp"
#include "petz/petz.hpp"
#include "petz/properties.hpp"

using namespace petz;

namespace {

struct Tally {
  long checks = 0;
  long failures = 0;
  double worst = kInf;  // smallest margin seen; negative means violated
  std::string first_failure;

  // Records `value <= bound`.
  void le(double value, double bound, const std::string& what) {
    ++checks;
    const double margin = bound - value;
    worst = std::min(worst, margin);
    if (!(margin >= 0.0)) {
      if (failures == 0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, " [%s: %.3e > %.3e]", what.c_str(), value, bound);
        first_failure = buf;
      }
      ++failures;
    }
  }
  void truth(bool ok, const std::string& what) { le(ok ? 0.0 : 1.0, 0.0, what); }
};

int g_failed = 0;

void report(int id, const char* name, int instances, const std::function<void(Tally&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  try {
    body(t);
  } catch (const std::exception& e) {
    ++t.failures;
    t.first_failure = std::string(" [exception: ") + e.what() + "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = t.failures == 0 && t.checks > 0;
  if (!pass) ++g_failed;
  std::printf("criterion %d %-28s %s  instances=%d checks=%ld failures=%ld worst_margin=%.3e time=%.1fs%s\n", id,
              name, pass ? "PASS" : "FAIL", instances, t.checks, t.failures, t.worst, secs,
              t.first_failure.c_str());
  std::fflush(stdout);
}

InstanceSpec random_spec(std::uint64_t seed, int dim, int target_dim, int rank, int n_max = 60) {
  InstanceSpec s;
  s.seed = seed;
  s.dim = dim;
  s.target_dim = target_dim;
  s.rank = rank;
  s.n_max = n_max;
  return s;
}

double hs(const Element& x) { return schatten_p_norm(x, 2.0); }

double op_dist(const Superoperator& a, const Superoperator& b) { return operator_norm(a.matrix() - b.matrix()); }

// ---------------------------------------------------------------------------

void spectral_certificate(Tally& t) {
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    const Instance in = generate(random_spec(1000 + i, n, n, 2 + (i / 3) % 2));
    const PetzAnalysis an = fixed_point_analysis(in.phi, in.b);
    t.truth(an.delta > 0.0 && an.delta < 1.0, "delta in (0,1)");
    for (int k = 1; k <= 60; ++k) {
      t.le(deviation_norm(an, k), std::pow(an.delta, k) * (1.0 + 1e-8), "operator n=" + std::to_string(k));
    }
    const IterationTrace tr = iterate(an, in.b, in.a, 60, {});
    for (const IterationRow& row : tr.rows) {
      t.le(row.dist_b2, row.cert_delta_pow * (1.0 + 1e-8), "per-state n=" + std::to_string(row.n));
    }
    // Independent cross-check against plain repeated application at small n,
    // where the absolute roundoff of the naive route is still negligible.
    Element x = in.a.element();
    for (int k = 0; k <= 8; ++k) {
      t.le(hs(x - tr.states[k].element()), 1e-11 * (1.0 + hs(x)), "naive iterate n=" + std::to_string(k));
      x = an.iteration.apply(x);
    }
  }
}

void projection_laws(Tally& t) {
  std::vector<InstanceSpec> specs;
  for (int i = 0; i < 200; ++i) specs.push_back(random_spec(1000 + i, 2 + i % 3, 2 + i % 3, 2 + (i / 3) % 2));
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + i % 3;
    const int m = 2 + (i / 3) % 3;
    // Strictness needs rank * n >= m and trace preservation rank * m >= n.
    const int min_rank = std::max((m + n - 1) / n, (n + m - 1) / m);
    specs.push_back(random_spec(5000 + i, n, m, std::max(1 + i % 4, min_rank)));
  }
  const char* kinds[] = {"unitary", "mixed_unitary", "depolarizing_like", "pinching"};
  for (int i = 0; i < 80; ++i) {
    InstanceSpec s = random_spec(7000 + i, 2 + i % 3, 2 + i % 3, 2);
    s.kind = kinds[i % 4];
    specs.push_back(s);
  }
  for (const InstanceSpec& s : specs) {
    const Instance in = generate(s);
    const PetzAnalysis an = fixed_point_analysis(in.phi, in.b);
    t.le(op_dist(compose(an.psi, an.psi), an.psi), 1e-9, "psi^2 = psi");
    t.le(op_dist(compose(an.iteration, an.psi), an.psi), 1e-9, "(R o phi) psi = psi");
    t.le(op_dist(compose(an.psi, an.iteration), an.psi), 1e-9, "psi (R o phi) = psi");
    const ChannelChecks c = verify(an.psi);
    t.le(-c.choi_min_eig, 1e-9, "psi CP");
    t.le(c.tp_residual, 1e-9, "psi TP");
    t.le(hs(an.psi.apply(in.b.element()) - in.b.element()), 1e-9, "psi(B) = B");
  }
}

void data_processing(Tally& t) {
  const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0, kInf};
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const int m = 2 + (i / 3) % 3;
    const Instance in = generate(random_spec(20000 + i, n, m, 2 + (i / 9) % 2));
    const Element x = random_element(in.phi.source(), derive_seed(in.spec.seed, 99));
    for (double p : ps) {
      t.le(-dpi_gap(in.phi, in.a, in.b, p), 1e-9, "dpi gap");
      const ContractionCheck c = weighted_contraction_check(in.phi, in.b, x, p);
      t.le(c.lhs, c.rhs + 1e-9, "weighted contraction");
    }
  }
}

void universal_bound(Tally& t) {
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const int m = 2 + (i / 3) % 3;
    const Instance in = generate(random_spec(30000 + i, n, m, 2 + (i / 9) % 2));
    const BoundReport r = recoverability_bound(in.phi, in.b, in.a);
    t.le(-r.slack_lower, 1e-9, "lower slack");
    t.le(-r.slack_upper, 1e-9, "upper slack");
    if (i % 5 == 0) {
      // Recoverable input: A0 = psi(A).
      const Decomposition d = decompose(fixed_point_analysis(in.phi, in.b), in.a);
      const BoundReport z = recoverability_bound(in.phi, in.b, d.a0);
      t.le(std::abs(z.lhs), 1e-8, "recoverable 4[1-F]^2");
      t.le(std::abs(z.mid), 1e-8, "recoverable L1^2");
      t.le(std::abs(z.rhs), 1e-8, "recoverable S_2 gap");
    }
  }
}

void interpolation(Tally& t) {
  const std::vector<double> ps = {1.25, 1.5, 1.75};
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    const Instance in = generate(random_spec(40000 + i, n, n, 2 + (i / 3) % 2));
    const PetzAnalysis an = fixed_point_analysis(in.phi, in.b);
    const IterationTrace tr = iterate(an, in.b, in.a, 40, ps);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double p = ps[k];
      const double a_bp = weighted_p_norm(in.a.element(), in.b, p);
      for (const IterationRow& row : tr.rows) {
        // delta^n bounds the ||.||_{B,2} operator norm of (R o phi)^n - psi.
        const double factor = row.n == 0 ? 1.0 : std::pow(an.delta, row.n);
        const double bound = std::pow(2.0, 2.0 / p - 1.0) * std::pow(factor, 2.0 * (1.0 - 1.0 / p)) * a_bp;
        t.le(row.dist_bp[k], bound * (1.0 + 1e-8), "p-norm distance");
      }
    }
  }
}

void decomposition(Tally& t) {
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    const Instance in = generate(random_spec(50000 + i, n, n, 2 + (i / 3) % 2));
    const PetzAnalysis an = fixed_point_analysis(in.phi, in.b);
    const Decomposition d = decompose(an, in.a);
    t.le(hs(in.a.element() - (d.a0.element() + d.c)), 1e-15 * hs(in.a.element()), "A = A0 + C");
    t.le(d.recoverability_residual, 1e-9, "A0 recoverable");
    t.le(d.psi_c_residual, 1e-9, "psi(C) = 0");
    if (an.delta > 0.0) {
      const int n_star = static_cast<int>(std::ceil(std::log(1e-8) / std::log(an.delta)));
      const double c1 = schatten_p_norm(d.c, 1.0);
      for (int k : {n_star, n_star + 1, n_star + 2, n_star + 5, 2 * n_star}) {
        t.le(schatten_p_norm(deviation(an, k).apply(d.c), 1.0), 1e-8 * c1, "C decay n=" + std::to_string(k));
      }
    }
  }
}

void closed_forms(Tally& t) {
  std::mt19937_64 rng(77);
  for (int n = 2; n <= 4; ++n) {
    const TracialAlgebra alg(n);
    for (int r = 0; r < 5; ++r) {
      const Reference b = random_reference(alg, 100 * n + r);
      const Superoperator id = Superoperator::identity(alg);
      const PetzAnalysis ai = fixed_point_analysis(id, b);
      t.le(ai.delta, 1e-10, "identity delta");
      t.truth(ai.fixed_dim == n * n, "identity fixed_dim");
      t.le(op_dist(ai.psi, id), 1e-10, "identity psi");

      const Superoperator u = unitary_conjugation(alg, random_unitary(n, rng));
      const PetzAnalysis au = fixed_point_analysis(u, b);
      t.le(au.delta, 1e-10, "unitary delta");
      t.truth(au.fixed_dim == n * n, "unitary fixed_dim");
      t.le(op_dist(au.iteration, id), 1e-10, "unitary R o phi");
    }
  }
  const std::vector<std::vector<int>> partitions = {{1, 1}, {1, 2}, {1, 1, 1}, {2, 2}, {1, 3}, {1, 1, 2}, {1, 1, 1, 1},
                                                    {2, 3}, {1, 2, 2}, {3, 3}, {2, 2, 2}, {4, 4}, {1, 3, 4}};
  for (const std::vector<int>& blocks : partitions) {
    int n = 0;
    int expect = 0;
    for (int k : blocks) {
      n += k;
      expect += k * k;
    }
    const TracialAlgebra alg(n);
    const Superoperator p = pinching(alg, blocks);
    const PetzAnalysis an = fixed_point_analysis(p, Reference::identity(alg));
    t.truth(an.fixed_dim == expect, "pinching fixed_dim");
    t.le(op_dist(an.psi, p), 1e-10, "pinching psi");
    t.le(an.delta, 1e-10, "pinching delta");
  }
}

void oracle_equivalence(Tally& t) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.02, 1.0);
  auto diag = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return Eigen::VectorXd(v * (n / v.sum()));
  };
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 7;
    const TracialAlgebra alg(n);
    const Eigen::VectorXd av = diag(n);
    const Eigen::VectorXd bv = diag(n);
    const Eigen::VectorXd cv = diag(n);
    // Commuting instances in a random common eigenbasis.
    const Matrix w = random_unitary(n, rng);
    auto lift = [&](const Eigen::VectorXd& v) { return Matrix(w * v.cast<complex>().asDiagonal() * w.adjoint()); };
    const State a{Element(alg, lift(av))};
    const State c{Element(alg, lift(cv))};
    const Reference b{Element(alg, lift(bv))};
    for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, kInf}) {
      const double expect = oracle::diag_entropy(av, bv, p);
      t.le(std::abs(sandwiched_entropy(a, b, p) - expect), 1e-10 * std::max(1.0, expect), "S_p oracle");
    }
    t.le(std::abs(fidelity(a, c) - oracle::diag_fidelity(av, cv)), 1e-10, "fidelity oracle");
  }
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 7;
    const TracialAlgebra alg(n);
    const Reference b = random_reference(alg, 600 + i);
    const Element x = random_element(alg, 700 + i);
    const Element y = random_element(alg, 800 + i);
    const complex hs_direct = (y.matrix().adjoint() * x.matrix()).trace() / static_cast<double>(n);
    t.le(std::abs(hs_inner(x, y) - hs_direct), 1e-10, "hs inner");
    const Element cx = weighted_conjugation(x, b, Direction::kForward);
    const Element cy = weighted_conjugation(y, b, Direction::kForward);
    t.le(std::abs(weighted_inner(x, y, b) - hs_inner(cx, cy)), 1e-10, "weighted inner");
  }
}

void l1_probe(Tally& t) {
  for (int i = 0; i < 40; ++i) {
    const int n = 2 + i % 2;
    const Instance in = generate(random_spec(60000 + i, n, n, 2 + (i / 2) % 2, 10));
    const PetzAnalysis an = fixed_point_analysis(in.phi, in.b);
    const std::vector<double> seq = l1_norm_probe_sequence(an, 10, 8, in.spec.seed);
    for (std::size_t k = 1; k < seq.size(); ++k) t.le(seq[k], seq[k - 1], "non-increasing");
    for (int k = 0; k <= 10; ++k) {
      for (std::uint64_t s = 0; s < 6; ++s) {
        const Element x = s % 2 ? random_element(in.phi.source(), 9000 + s)
                                : Element(random_state(in.phi.source(), 9000 + s).element());
        t.le(l1_ratio(an, k, x), seq[k], "probe >= sampled ratio");
      }
    }
  }
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  report(1, "spectral_certificate", 200, spectral_certificate);
  report(2, "projection_laws", 340, projection_laws);
  report(3, "data_processing", 1000, data_processing);
  report(4, "universal_bound", 1000, universal_bound);
  report(5, "interpolation_constant", 200, interpolation);
  report(6, "decomposition", 200, decomposition);
  report(7, "closed_forms", 43, closed_forms);
  report(8, "oracle_equivalence", 300, oracle_equivalence);
  report(9, "l1_probe", 40, l1_probe);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d of 9 criteria failed, total time %.1fs\n", g_failed, secs);
  return g_failed == 0 ? 0 : 1;
}
