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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "petz/petz.hpp"

using namespace petz;

namespace {

struct Fixture {
  TracialAlgebra src;
  TracialAlgebra tgt;
  KrausSpec kraus;
  Superoperator phi;
  Reference b;
};

Fixture make(int n, int m, int rank, std::uint64_t seed) {
  const TracialAlgebra src(n);
  const TracialAlgebra tgt(m);
  KrausSpec ks = random_kraus(src, m, rank, seed);
  Superoperator phi = from_kraus(ks, src, tgt);
  return {src, tgt, ks, phi, random_reference(src, seed + 1000, 30.0)};
}

double dist(const Superoperator& x, const Superoperator& y) { return (x.matrix() - y.matrix()).norm(); }

}  // namespace

TEST_CASE("petz map matches the explicit formula") {
  for (auto [n, m] : {std::pair{2, 2}, {3, 3}, {3, 2}, {2, 4}}) {
    const Fixture f = make(n, m, 2, 10 * n + m);
    const Superoperator r = petz_map(f.phi, f.b);
    std::vector<oracle::M> ks(f.kraus.operators.begin(), f.kraus.operators.end());
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Element y = random_element(f.tgt, s);
      CHECK((r.apply(y).matrix() - oracle::petz(ks, f.b.matrix(), y.matrix())).norm() < 1e-10);
    }
  }
}

TEST_CASE("petz map is a channel that recovers the reference") {
  const Fixture f = make(3, 3, 2, 5);
  const Superoperator r = petz_map(f.phi, f.b);
  const ChannelChecks c = verify(r);
  CHECK(c.is_cp);
  CHECK(c.is_tp);
  CHECK((r.apply(f.phi.apply(f.b.element())).matrix() - f.b.matrix()).norm() < 1e-10);
}

TEST_CASE("petz map is the adjoint between weighted spaces") {
  const Fixture f = make(3, 2, 3, 8);
  const Superoperator r = petz_map(f.phi, f.b);
  const Reference pb(f.phi.apply(f.b.element()));
  const Element x = random_element(f.src, 1);
  const Element y = random_element(f.tgt, 2);
  CHECK(std::abs(weighted_inner(f.phi.apply(x), y, pb) - weighted_inner(x, r.apply(y), f.b)) < 1e-10);
}

TEST_CASE("petz map rejects non-strict and non-CP input") {
  const TracialAlgebra alg(2);
  const Superoperator collapse = Superoperator::from_map(alg, alg, [](const Matrix& x) {
    Matrix y = Matrix::Zero(2, 2);
    y(0, 0) = x.trace();
    return y;
  });
  CHECK_THROWS_AS(petz_map(collapse, Reference::identity(alg)), InvalidArgument);
  const Superoperator t =
      Superoperator::from_map(alg, alg, [](const Matrix& x) { return Matrix(x.transpose()); });
  CHECK_THROWS_AS(petz_map(t, Reference::identity(alg)), InvalidArgument);
}

TEST_CASE("closed form: identity channel") {
  const TracialAlgebra alg(3);
  const Reference b = random_reference(alg, 3);
  const PetzAnalysis an = fixed_point_analysis(Superoperator::identity(alg), b);
  CHECK(an.delta == 0.0);
  CHECK(an.fixed_dim == 9);
  CHECK(dist(an.psi, Superoperator::identity(alg)) < 1e-10);
}

TEST_CASE("closed form: unitary conjugation") {
  const TracialAlgebra alg(3);
  std::mt19937_64 rng(6);
  const Superoperator u = unitary_conjugation(alg, random_unitary(3, rng));
  const PetzAnalysis an = fixed_point_analysis(u, random_reference(alg, 4));
  CHECK(an.delta == 0.0);
  CHECK(an.fixed_dim == 9);
  CHECK(dist(an.iteration, Superoperator::identity(alg)) < 1e-10);
}

TEST_CASE("closed form: pinching with trivial reference") {
  const TracialAlgebra alg(4);
  for (const std::vector<int>& blocks : {std::vector<int>{2, 2}, {1, 3}, {1, 1, 2}, {1, 1, 1, 1}}) {
    const Superoperator p = pinching(alg, blocks);
    const PetzAnalysis an = fixed_point_analysis(p, Reference::identity(alg));
    int expect = 0;
    for (int k : blocks) expect += k * k;
    CHECK(an.fixed_dim == expect);
    CHECK(an.delta == 0.0);
    CHECK(dist(an.psi, p) < 1e-10);
  }
}

TEST_CASE("closed form: depolarizing-like with trivial reference") {
  const TracialAlgebra alg(3);
  const double lambda = 0.6;
  const PetzAnalysis an = fixed_point_analysis(depolarizing_like(alg, lambda), Reference::identity(alg));
  CHECK(an.fixed_dim == 1);
  CHECK(an.delta == doctest::Approx(lambda * lambda).epsilon(1e-12));
  const Element x = random_element(alg, 2);
  const Matrix expect = (x.matrix().trace() / 3.0) * Matrix::Identity(3, 3);
  CHECK((an.psi.apply(x).matrix() - expect).norm() < 1e-12);
  for (int n = 1; n <= 5; ++n) {
    CHECK(deviation_norm(an, n) == doctest::Approx(std::pow(lambda, 2 * n)).epsilon(1e-10));
  }
}

TEST_CASE("spectrum is descending and within [0, 1]") {
  const Fixture f = make(3, 3, 2, 12);
  const PetzAnalysis an = fixed_point_analysis(f.phi, f.b);
  REQUIRE(an.spectrum.size() == 9);
  for (std::size_t i = 0; i < an.spectrum.size(); ++i) {
    CHECK(an.spectrum[i] >= 0.0);
    CHECK(an.spectrum[i] <= 1.0);
    if (i > 0) CHECK(an.spectrum[i] <= an.spectrum[i - 1]);
  }
  CHECK(an.spectrum[an.fixed_dim] == an.delta);
  CHECK(an.symmetrization_residual < 1e-10);
  CHECK(an.warnings.empty());
}

TEST_CASE("eps_fix is range checked") {
  const Fixture f = make(2, 2, 2, 1);
  CHECK_THROWS_AS(fixed_point_analysis(f.phi, f.b, 0.0), InvalidArgument);
  CHECK_THROWS_AS(fixed_point_analysis(f.phi, f.b, 1e-3), InvalidArgument);
}

TEST_CASE("near-one eigenvalues raise a warning") {
  const TracialAlgebra alg(2);
  const double lambda = std::sqrt(1.0 - 5e-7);
  const PetzAnalysis an = fixed_point_analysis(depolarizing_like(alg, lambda), Reference::identity(alg));
  CHECK(an.fixed_dim == 1);
  CHECK_FALSE(an.warnings.empty());
}

TEST_CASE("stable deviation agrees with naive powers") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Fixture f = make(3, 3, 2, seed);
    const PetzAnalysis an = fixed_point_analysis(f.phi, f.b);
    Superoperator naive = Superoperator::identity(f.src);
    for (int n = 0; n <= 12; ++n) {
      const Matrix expect = naive.matrix() - an.psi.matrix();
      CHECK((deviation(an, n).matrix() - expect).norm() < 1e-10);
      naive = compose(an.iteration, naive);
    }
    CHECK(deviation_norm(an, 1) == doctest::Approx(an.delta).epsilon(1e-9));
  }
}

TEST_CASE("iterate produces states and the certificate column") {
  const Fixture f = make(3, 3, 2, 4);
  const State a = random_state(f.src, 9);
  const IterationTrace tr = iterate(f.phi, f.b, a, 10, {1.5, kInf});
  REQUIRE(tr.rows.size() == 11);
  REQUIRE(tr.states.size() == 11);
  CHECK((tr.states[0].matrix() - a.matrix()).norm() < 1e-15);
  const PetzAnalysis an = fixed_point_analysis(f.phi, f.b);
  Element x = a.element();
  for (int n = 0; n <= 10; ++n) {
    CHECK((tr.states[n].matrix() - x.matrix()).norm() < 1e-10);
    const Element d = x - an.psi.apply(a.element());
    CHECK(tr.rows[n].dist_l1 == doctest::Approx(oracle::schatten(d.matrix(), 1.0)).epsilon(1e-7));
    CHECK(tr.rows[n].cert_delta_pow ==
          doctest::Approx(std::pow(an.delta, n) * tr.rows[0].dist_b2).epsilon(1e-12));
    CHECK(tr.rows[n].dist_bp.size() == 2);
    x = an.iteration.apply(x);
  }
  const std::string csv = to_csv(tr);
  CHECK(csv.rfind("n,dist_l1,dist_B2,cert_delta_pow,dist_Bp_1.5,dist_Bp_inf\n0,", 0) == 0);
}

TEST_CASE("decomposition") {
  const Fixture f = make(3, 3, 2, 7);
  const State a = random_state(f.src, 1);
  const Decomposition d = decompose(f.phi, f.b, a);
  CHECK(d.recoverability_residual < 1e-9);
  CHECK(d.psi_c_residual < 1e-9);
  CHECK(d.tau_a0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(((d.a0.element() + d.c).matrix() - a.matrix()).norm() <= 1e-15 * a.matrix().norm());
}

TEST_CASE("L1 probe bounds sampled ratios and does not increase") {
  const Fixture f = make(2, 2, 2, 3);
  const PetzAnalysis an = fixed_point_analysis(f.phi, f.b);
  const std::vector<double> seq = l1_norm_probe_sequence(an, 6, 8, 1);
  REQUIRE(seq.size() == 7);
  for (int n = 0; n <= 6; ++n) {
    if (n > 0) CHECK(seq[n] <= seq[n - 1]);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Element x = random_element(f.src, 50 + s);
      CHECK(l1_ratio(an, n, x) <= seq[n] * (1 + 1e-9));
    }
  }
  // The induced 1->1 norm of any difference of channels is at most 2.
  CHECK(seq[0] <= 2.0 + 1e-9);
  CHECK(l1_norm_probe(an, 0, 4, 1) <= seq[0] * (1 + 1e-12));
}
