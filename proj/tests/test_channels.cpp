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

#include "oracles.hpp"
#include "petz/channels.hpp"

using namespace petz;

namespace {

std::vector<oracle::M> to_list(const KrausSpec& k) { return {k.operators.begin(), k.operators.end()}; }

}  // namespace

TEST_CASE("superoperator action matches the Kraus sum") {
  const TracialAlgebra src(3);
  const KrausSpec ks = random_kraus(src, 2, 3, 17);
  const Superoperator phi = from_kraus(ks, src, TracialAlgebra(2));
  CHECK(phi.matrix().rows() == 4);
  CHECK(phi.matrix().cols() == 9);
  const Element x = random_element(src, 1);
  CHECK((phi.apply(x).matrix() - oracle::kraus_apply(to_list(ks), x.matrix())).norm() < 1e-12);
  CHECK(kraus_tp_residual(ks, src, TracialAlgebra(2)) < 1e-12);
}

TEST_CASE("adjoint is the tau-adjoint") {
  const TracialAlgebra src(2);
  const TracialAlgebra tgt(3);
  const KrausSpec ks = random_kraus(src, 3, 2, 5);
  const Superoperator phi = from_kraus(ks, src, tgt);
  const Element x = random_element(src, 2);
  const Element y = random_element(tgt, 3);
  // tau'(Y* phi(X)) = tau(phi*(Y)* X)
  CHECK(std::abs(hs_inner(phi.apply(x), y) - hs_inner(x, phi.adjoint().apply(y))) < 1e-12);
  CHECK((phi.adjoint().apply(y).matrix() - oracle::kraus_adjoint(to_list(ks), y.matrix())).norm() <
        1e-12);
}

TEST_CASE("coordinates round trip and compose") {
  const TracialAlgebra alg(3);
  const Element x = random_element(alg, 7);
  CHECK((from_coordinates(alg, coordinates(x)).matrix() - x.matrix()).norm() < 1e-14);
  CHECK(coordinates(x).norm() == doctest::Approx(schatten_p_norm(x, 2.0)));
  const Superoperator f = random_channel(alg, 3, 2, 1);
  const Superoperator g = random_channel(alg, 3, 2, 2);
  CHECK((compose(g, f).apply(x).matrix() - g.apply(f.apply(x)).matrix()).norm() < 1e-12);
  const Superoperator f3 = power(f, 3);
  CHECK((f3.apply(x).matrix() - f.apply(f.apply(f.apply(x))).matrix()).norm() < 1e-12);
  CHECK((power(f, 0).matrix() - Superoperator::identity(alg).matrix()).norm() == 0.0);
}

TEST_CASE("transpose map is TP but not CP") {
  const TracialAlgebra alg(2);
  const Superoperator t =
      Superoperator::from_map(alg, alg, [](const Matrix& x) { return Matrix(x.transpose()); });
  const ChannelChecks c = verify(t);
  CHECK_FALSE(c.is_cp);
  CHECK(c.is_tp);
  CHECK(c.is_unital);
  // Choi of the transpose is the swap, eigenvalues +-1.
  CHECK(c.choi_min_eig == doctest::Approx(-1.0));
}

TEST_CASE("X -> 2 tau(X) E11 on M2 is CPTP but not strict") {
  const TracialAlgebra alg(2);
  const Superoperator f = Superoperator::from_map(alg, alg, [](const Matrix& x) {
    Matrix y = Matrix::Zero(2, 2);
    y(0, 0) = x.trace();  // 2 tau(X)
    return y;
  });
  const ChannelChecks c = verify(f);
  CHECK(c.is_cp);
  CHECK(c.is_tp);
  CHECK_FALSE(c.is_unital);
  CHECK_FALSE(c.is_strict);
}

TEST_CASE("scaled Kraus operators break TP") {
  const TracialAlgebra alg(2);
  KrausSpec ks = random_kraus(alg, 2, 2, 3);
  for (Matrix& k : ks.operators) k *= 1.1;
  CHECK(kraus_tp_residual(ks, alg, alg) > 0.1);
  CHECK_FALSE(is_tp(from_kraus(ks, alg, alg)));
}

TEST_CASE("zoo channels") {
  const TracialAlgebra alg(4);
  const Element x = random_element(alg, 12);

  const Superoperator p = pinching(alg, {1, 3});
  Matrix expect = x.matrix();
  expect.block(0, 1, 1, 3).setZero();
  expect.block(1, 0, 3, 1).setZero();
  CHECK((p.apply(x).matrix() - expect).norm() < 1e-14);
  CHECK((compose(p, p).matrix() - p.matrix()).norm() < 1e-14);
  CHECK_THROWS_AS(pinching(alg, {1, 2}), InvalidArgument);

  const Superoperator d = conditional_expectation_diag(alg);
  CHECK((d.apply(x).matrix() - Matrix(x.matrix().diagonal().asDiagonal())).norm() < 1e-14);

  const Superoperator dep = depolarizing_like(alg, 0.3);
  const Matrix dep_expect = 0.3 * x.matrix() + 0.7 * (x.matrix().trace() / 4.0) * Matrix::Identity(4, 4);
  CHECK((dep.apply(x).matrix() - dep_expect).norm() < 1e-13);

  std::mt19937_64 rng(4);
  const Matrix u = random_unitary(4, rng);
  const Superoperator uc = unitary_conjugation(alg, u);
  CHECK((uc.apply(x).matrix() - u * x.matrix() * u.adjoint()).norm() < 1e-13);
  for (const Superoperator* s : {&p, &d, &dep, &uc}) {
    const ChannelChecks c = verify(*s);
    CHECK(c.is_cp);
    CHECK(c.is_tp);
    CHECK(c.is_unital);
    CHECK(c.is_strict);
  }

  const Matrix v = random_unitary(4, rng);
  const Superoperator mu = mixed_unitary(alg, {0.25, 0.75}, {u, v});
  CHECK((mu.apply(x).matrix() - 0.25 * u * x.matrix() * u.adjoint() - 0.75 * v * x.matrix() * v.adjoint())
            .norm() < 1e-13);
  CHECK_THROWS_AS(mixed_unitary(alg, {0.5, 0.6}, {u, v}), InvalidArgument);
  CHECK_THROWS_AS(mixed_unitary(alg, {1.0}, {2.0 * u}), InvalidArgument);
}

TEST_CASE("random channels are strict CPTP and seeded") {
  for (int n : {2, 3, 4}) {
    const TracialAlgebra alg(n);
    const Superoperator phi = random_channel(alg, n, 2, 40 + n);
    const ChannelChecks c = verify(phi);
    CHECK(c.is_cp);
    CHECK(c.is_tp);
    CHECK(c.choi_min_eig >= -1e-12);
    CHECK(phi.matrix() == random_channel(alg, n, 2, 40 + n).matrix());
  }
}

TEST_CASE("choi matrix of the identity is the maximally entangled projector") {
  const TracialAlgebra alg(2);
  const Matrix c = choi_matrix(Superoperator::identity(alg));
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(4);
  w(0) = 1.0;
  w(3) = 1.0;
  CHECK((c - w * w.adjoint()).norm() < 1e-14);
}
