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

#include "petz/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace petz {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix unvec(const Vector& v, int dim) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = v(i * dim + j);
  return m;
}

void require_endomorphism(const Superoperator& phi, const char* what) {
  if (phi.source() != phi.target()) {
    throw InvalidArgument(std::string(what) + ": map must have equal source and target");
  }
}

}  // namespace

Vector coordinates(const Matrix& x) {
  const auto n = x.rows();
  Vector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = x(i, j);
  return v / std::sqrt(static_cast<double>(n));
}

Vector coordinates(const Element& x) { return coordinates(x.matrix()); }

Element from_coordinates(TracialAlgebra algebra, const Vector& coords) {
  if (coords.size() != algebra.dim() * algebra.dim()) {
    throw InvalidArgument("from_coordinates: coordinate vector has wrong length");
  }
  return {algebra, unvec(coords, algebra.dim()) * std::sqrt(static_cast<double>(algebra.dim()))};
}

// ---------------------------------------------------------------------------

Superoperator::Superoperator(TracialAlgebra source, TracialAlgebra target, Matrix matrix)
    : source_(source), target_(target), matrix_(std::move(matrix)) {
  const int n = source_.dim();
  const int m = target_.dim();
  if (matrix_.rows() != m * m || matrix_.cols() != n * n) {
    throw InvalidArgument("Superoperator: matrix must be m^2 x n^2");
  }
  if (!matrix_.allFinite()) throw InvalidArgument("Superoperator: non-finite entries");
}

Superoperator Superoperator::identity(TracialAlgebra algebra) {
  const int d = algebra.dim() * algebra.dim();
  return {algebra, algebra, Matrix::Identity(d, d)};
}

Superoperator Superoperator::from_map(TracialAlgebra source, TracialAlgebra target,
                                      const std::function<Matrix(const Matrix&)>& map) {
  const int n = source.dim();
  const int m = target.dim();
  Matrix s(m * m, n * n);
  const double scale = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = scale;
      const Matrix y = map(e);
      if (y.rows() != m || y.cols() != m) {
        throw InvalidArgument("Superoperator::from_map: map output has wrong shape");
      }
      s.col(i * n + j) = coordinates(y);
    }
  }
  return {source, target, std::move(s)};
}

Superoperator Superoperator::sandwich(TracialAlgebra algebra, const Matrix& left, const Matrix& right) {
  const int n = algebra.dim();
  if (left.rows() != n || left.cols() != n || right.rows() != n || right.cols() != n) {
    throw InvalidArgument("Superoperator::sandwich: factor shape mismatch");
  }
  return {algebra, algebra, kron(left, right.transpose())};
}

Matrix Superoperator::apply(const Matrix& x) const {
  if (x.rows() != source_.dim() || x.cols() != source_.dim()) {
    throw InvalidArgument("Superoperator::apply: input is not in the source algebra");
  }
  const Vector y = matrix_ * coordinates(x);
  return unvec(y, target_.dim()) * std::sqrt(static_cast<double>(target_.dim()));
}

Element Superoperator::apply(const Element& x) const {
  if (x.algebra() != source_) {
    throw InvalidArgument("Superoperator::apply: input is not in the source algebra");
  }
  return {target_, apply(x.matrix())};
}

Superoperator Superoperator::adjoint() const { return {target_, source_, matrix_.adjoint()}; }

Superoperator Superoperator::operator+(const Superoperator& other) const {
  if (source_ != other.source_ || target_ != other.target_) {
    throw InvalidArgument("Superoperator::operator+: algebra mismatch");
  }
  return {source_, target_, matrix_ + other.matrix_};
}

Superoperator Superoperator::operator-(const Superoperator& other) const {
  if (source_ != other.source_ || target_ != other.target_) {
    throw InvalidArgument("Superoperator::operator-: algebra mismatch");
  }
  return {source_, target_, matrix_ - other.matrix_};
}

Superoperator Superoperator::operator*(complex scale) const {
  return {source_, target_, matrix_ * scale};
}

Superoperator Superoperator::verified(const Tolerances& tol) const {
  Superoperator out = *this;
  out.checks_ = verify(*this, tol);
  return out;
}

Superoperator compose(const Superoperator& g, const Superoperator& f) {
  if (f.target() != g.source()) throw InvalidArgument("compose: f.target != g.source");
  return {f.source(), g.target(), g.matrix() * f.matrix()};
}

Superoperator power(const Superoperator& phi, int exponent) {
  require_endomorphism(phi, "power");
  if (exponent < 0) throw InvalidArgument("power: negative exponent");
  Matrix result = Matrix::Identity(phi.matrix().rows(), phi.matrix().cols());
  Matrix base = phi.matrix();
  for (int e = exponent; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return {phi.source(), phi.target(), std::move(result)};
}

// ---------------------------------------------------------------------------

Matrix choi_matrix(const Superoperator& phi) {
  const int n = phi.source().dim();
  const int m = phi.target().dim();
  Matrix choi = Matrix::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      choi.block(i * m, j * m, m, m) = phi.apply(e);
    }
  }
  return choi;
}

ChannelChecks verify(const Superoperator& phi, const Tolerances& tol) {
  ChannelChecks c;
  c.tol = tol;
  const int n = phi.source().dim();
  const int m = phi.target().dim();

  const HermEig choi = herm_eig(choi_matrix(phi));
  c.choi_min_eig = choi.values(0);
  c.choi_max_eig = choi.values(choi.values.size() - 1);
  c.is_cp = c.choi_min_eig >= -tol.cp * std::max(std::abs(c.choi_max_eig), 1e-300);

  double tp = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      const complex out = phi.apply(e).trace() / static_cast<double>(m);
      const double expected = i == j ? 1.0 / n : 0.0;
      tp = std::max(tp, std::abs(out - expected));
    }
  }
  c.tp_residual = tp;
  c.is_tp = tp <= tol.trace;

  const Matrix phi_i = phi.apply(Matrix(Matrix::Identity(n, n)));
  c.unital_residual = operator_norm(phi_i - Matrix::Identity(m, m));
  c.is_unital = c.unital_residual <= tol.trace;

  const HermEig out = herm_eig(phi_i);
  c.strict_min_eig = out.values(0);
  const double lmax = out.values(out.values.size() - 1);
  c.is_strict = c.strict_min_eig > 0.0 && c.strict_min_eig >= tol.pd * lmax;
  return c;
}

bool is_cp(const Superoperator& phi, const Tolerances& tol) { return verify(phi, tol).is_cp; }
bool is_tp(const Superoperator& phi, const Tolerances& tol) { return verify(phi, tol).is_tp; }
bool is_unital(const Superoperator& phi, const Tolerances& tol) { return verify(phi, tol).is_unital; }
bool is_strict(const Superoperator& phi, const Tolerances& tol) { return verify(phi, tol).is_strict; }

// ---------------------------------------------------------------------------

Superoperator from_kraus(const KrausSpec& spec, TracialAlgebra source, TracialAlgebra target) {
  const int n = source.dim();
  const int m = target.dim();
  if (spec.operators.empty()) throw InvalidArgument("from_kraus: empty Kraus list");
  Matrix s = Matrix::Zero(m * m, n * n);
  for (const Matrix& k : spec.operators) {
    if (k.rows() != m || k.cols() != n) {
      throw InvalidArgument("from_kraus: Kraus operator must be " + std::to_string(m) + "x" +
                            std::to_string(n));
    }
    s += kron(k, k.conjugate());
  }
  s *= std::sqrt(static_cast<double>(n) / m);
  return Superoperator(source, target, std::move(s)).verified();
}

double kraus_tp_residual(const KrausSpec& spec, TracialAlgebra source, TracialAlgebra target) {
  const int n = source.dim();
  Matrix sum = -(static_cast<double>(target.dim()) / n) * Matrix::Identity(n, n);
  for (const Matrix& k : spec.operators) sum += k.adjoint() * k;
  return operator_norm(sum);
}

Superoperator pinching(TracialAlgebra algebra, const std::vector<int>& blocks) {
  if (blocks.empty() || std::any_of(blocks.begin(), blocks.end(), [](int b) { return b < 1; }) ||
      std::accumulate(blocks.begin(), blocks.end(), 0) != algebra.dim()) {
    throw InvalidArgument("pinching: blocks must be positive and sum to the dimension");
  }
  KrausSpec spec;
  int offset = 0;
  for (int b : blocks) {
    Matrix p = Matrix::Zero(algebra.dim(), algebra.dim());
    p.block(offset, offset, b, b).setIdentity();
    spec.operators.push_back(std::move(p));
    offset += b;
  }
  return from_kraus(spec, algebra, algebra);
}

Superoperator conditional_expectation_diag(TracialAlgebra algebra) {
  return pinching(algebra, std::vector<int>(algebra.dim(), 1));
}

Superoperator mixed_unitary(TracialAlgebra algebra, const std::vector<double>& weights,
                            const std::vector<Matrix>& unitaries) {
  if (weights.empty() || weights.size() != unitaries.size()) {
    throw InvalidArgument("mixed_unitary: need one weight per unitary");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("mixed_unitary: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixed_unitary: weights must sum to 1");
  const int n = algebra.dim();
  KrausSpec spec;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Matrix& u = unitaries[i];
    if (u.rows() != n || u.cols() != n ||
        operator_norm(u.adjoint() * u - Matrix::Identity(n, n)) > 1e-10) {
      throw InvalidArgument("mixed_unitary: operator " + std::to_string(i) + " is not unitary");
    }
    spec.operators.push_back(std::sqrt(weights[i]) * u);
  }
  return from_kraus(spec, algebra, algebra);
}

Superoperator unitary_conjugation(TracialAlgebra algebra, const Matrix& unitary) {
  return mixed_unitary(algebra, {1.0}, {unitary});
}

Superoperator depolarizing_like(TracialAlgebra algebra, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("depolarizing_like: lambda must lie in [0, 1]");
  }
  const int d = algebra.dim() * algebra.dim();
  const Vector unit = coordinates(algebra.identity());
  Matrix s = lambda * Matrix::Identity(d, d) + (1.0 - lambda) * unit * unit.adjoint();
  return Superoperator(algebra, algebra, std::move(s)).verified();
}

KrausSpec random_kraus(TracialAlgebra source, int target_dim, int rank, std::uint64_t seed) {
  if (target_dim < 1) throw InvalidArgument("random_kraus: target_dim must be >= 1");
  if (rank < 1) throw InvalidArgument("random_kraus: rank must be >= 1");
  const int n = source.dim();
  if (static_cast<long>(rank) * target_dim < n) {
    throw InvalidArgument("random_kraus: rank * target_dim < source dim, cannot be trace preserving");
  }
  std::mt19937_64 rng(seed);
  KrausSpec spec;
  Matrix s = Matrix::Zero(n, n);
  for (int r = 0; r < rank; ++r) {
    spec.operators.push_back(random_ginibre(target_dim, n, rng));
    s += spec.operators.back().adjoint() * spec.operators.back();
  }
  const Matrix norm = matrix_function(s, MatrixFunction::inv_sqrt()) *
                      std::sqrt(static_cast<double>(target_dim) / n);
  for (Matrix& k : spec.operators) k = k * norm;
  return spec;
}

Superoperator random_channel(TracialAlgebra source, int target_dim, int rank, std::uint64_t seed) {
  return from_kraus(random_kraus(source, target_dim, rank, seed), source, TracialAlgebra(target_dim));
}

}  // namespace petz
