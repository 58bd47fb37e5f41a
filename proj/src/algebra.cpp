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

#include "petz/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace petz {

namespace {

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

double frobenius(const Matrix& m) { return m.norm(); }

void require_same_algebra(const Element& x, const Element& y, const char* what) {
  if (x.algebra() != y.algebra()) {
    throw InvalidArgument(std::string(what) + ": algebra mismatch (" +
                          std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) + ")");
  }
}

void require_p(double p, const char* what) {
  if (!(p >= 1.0)) {
    throw InvalidArgument(std::string(what) + ": exponent p must satisfy p >= 1");
  }
}

Matrix reassemble(const Matrix& vectors, const RealVector& values) {
  return vectors * values.cast<complex>().asDiagonal() * vectors.adjoint();
}

bool is_integer(double t) { return std::isfinite(t) && std::floor(t) == t; }

}  // namespace

TracialAlgebra::TracialAlgebra(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("TracialAlgebra: dimension must be >= 1");
}

Element::Element(TracialAlgebra algebra, Matrix entries)
    : algebra_(algebra), entries_(std::move(entries)) {
  if (entries_.rows() != algebra_.dim() || entries_.cols() != algebra_.dim()) {
    throw InvalidArgument("Element: matrix shape does not match algebra dimension " +
                          std::to_string(algebra_.dim()));
  }
  if (!all_finite(entries_)) throw InvalidArgument("Element: non-finite entries");
}

Element Element::identity(TracialAlgebra algebra) { return {algebra, algebra.identity()}; }

Element Element::unit(TracialAlgebra algebra, int i, int j) {
  Matrix m = Matrix::Zero(algebra.dim(), algebra.dim());
  m(i, j) = 1.0;
  return {algebra, std::move(m)};
}

Element Element::adjoint() const { return {algebra_, entries_.adjoint()}; }

bool Element::is_hermitian(double rel_tol) const {
  return frobenius(entries_ - entries_.adjoint()) <= rel_tol * std::max(1.0, frobenius(entries_));
}

Element Element::operator+(const Element& other) const {
  require_same_algebra(*this, other, "Element::operator+");
  return {algebra_, entries_ + other.entries_};
}

Element Element::operator-(const Element& other) const {
  require_same_algebra(*this, other, "Element::operator-");
  return {algebra_, entries_ - other.entries_};
}

Element Element::operator*(complex scale) const { return {algebra_, entries_ * scale}; }

// ---------------------------------------------------------------------------

namespace {

Element validated_state(const Element& x, const Tolerances& tol) {
  if (!x.is_hermitian(tol.herm)) throw InvalidArgument("State: matrix is not Hermitian");
  Matrix h = 0.5 * (x.matrix() + x.matrix().adjoint());
  const HermEig eig = herm_eig(h);
  const double lmax = eig.values.cwiseAbs().maxCoeff();
  if (eig.values(0) < -tol.psd * std::max(lmax, 1.0)) {
    throw InvalidArgument("State: matrix is not positive semidefinite (lambda_min = " +
                          std::to_string(eig.values(0)) + ")");
  }
  const double t = h.trace().real() * x.algebra().trace_weight();
  if (std::abs(t - 1.0) > tol.trace) {
    throw InvalidArgument("State: tau(A) = " + std::to_string(t) + " differs from 1");
  }
  return {x.algebra(), std::move(h)};
}

}  // namespace

State::State(Element element, const Tolerances& tol)
    : element_(validated_state(element, tol)) {}

State State::from_density_matrix(TracialAlgebra algebra, const Matrix& rho, const Tolerances& tol) {
  return State(Element(algebra, rho * static_cast<double>(algebra.dim())), tol);
}

Matrix State::density_matrix() const { return matrix() * algebra().trace_weight(); }

Reference::Reference(Element element, const Tolerances& tol) : state_(std::move(element), tol) {
  HermEig eig = herm_eig(state_.matrix());
  eigenvalues_ = std::move(eig.values);
  eigenvectors_ = std::move(eig.vectors);
  if (!(lambda_min() > 0.0) || lambda_min() < tol.pd * lambda_max()) {
    throw InvalidArgument("Reference: matrix is not strictly positive (lambda_min = " +
                          std::to_string(lambda_min()) + ")");
  }
}

Reference Reference::identity(TracialAlgebra algebra) { return Reference(Element::identity(algebra)); }

Matrix Reference::power(double t) const {
  RealVector v = eigenvalues_.unaryExpr([t](double l) { return std::pow(l, t); });
  return reassemble(eigenvectors_, v);
}

Matrix Reference::weight_for(double p) const {
  require_p(p, "Reference::weight_for");
  if (p == 1.0) return algebra().identity();
  if (p == kInf) return power(-0.5);
  return power(-(p - 1.0) / (2.0 * p));
}

// ---------------------------------------------------------------------------

HermEig herm_eig(const Matrix& x) {
  if (x.rows() != x.cols()) throw InvalidArgument("herm_eig: matrix is not square");
  if (!all_finite(x)) throw InvalidArgument("herm_eig: non-finite entries");
  const Matrix h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("herm_eig: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermEig herm_eig(const Element& x) { return herm_eig(x.matrix()); }

RealVector singular_values(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

Matrix matrix_function(const Matrix& x, MatrixFunction f, const Tolerances& tol) {
  if (x.rows() != x.cols()) throw InvalidArgument("matrix_function: matrix is not square");
  if (!all_finite(x)) throw InvalidArgument("matrix_function: non-finite entries");

  if (f.kind == MatrixFunction::Kind::kAbs) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
    const Matrix& v = svd.matrixV();
    return v * svd.singularValues().cast<complex>().asDiagonal() * v.adjoint();
  }

  const double t = f.kind == MatrixFunction::Kind::kSqrt      ? 0.5
                   : f.kind == MatrixFunction::Kind::kInvSqrt ? -0.5
                                                               : f.exponent;
  if (frobenius(x - x.adjoint()) > tol.herm * std::max(1.0, frobenius(x))) {
    throw InvalidArgument("matrix_function: input is not Hermitian");
  }
  HermEig eig = herm_eig(x);
  const double lmax = eig.values.cwiseAbs().maxCoeff();
  const double lmin = eig.values(0);

  if (t < 0.0) {
    if (!(lmin > 0.0) || lmin < tol.pd * lmax) {
      throw InvalidArgument("matrix_function: negative power of a singular matrix");
    }
  } else if (!is_integer(t)) {
    if (lmin < -tol.psd * lmax) {
      throw InvalidArgument("matrix_function: fractional power of a non-PSD matrix");
    }
    eig.values = eig.values.cwiseMax(0.0);
  }
  RealVector v = eig.values.unaryExpr([t](double l) { return std::pow(l, t); });
  return reassemble(eig.vectors, v);
}

Element matrix_function(const Element& x, MatrixFunction f, const Tolerances& tol) {
  return {x.algebra(), matrix_function(x.matrix(), f, tol)};
}

// ---------------------------------------------------------------------------

complex tau(const Element& x) { return x.matrix().trace() * x.algebra().trace_weight(); }

complex hs_inner(const Element& x, const Element& y) {
  require_same_algebra(x, y, "hs_inner");
  // tau(y* x) = (1/n) sum_ij conj(y_ij) x_ij
  return (y.matrix().array().conjugate() * x.matrix().array()).sum() * x.algebra().trace_weight();
}

complex weighted_inner(const Element& x, const Element& y, const Reference& b) {
  require_same_algebra(x, y, "weighted_inner");
  require_same_algebra(x, b.element(), "weighted_inner");
  const Matrix w = b.inv_sqrt();
  return (w * y.matrix().adjoint() * w * x.matrix()).trace() * x.algebra().trace_weight();
}

double conjugate_exponent(double p) {
  require_p(p, "conjugate_exponent");
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return singular_values(x).maxCoeff();
}

double schatten_p_norm(const Element& x, double p) {
  require_p(p, "schatten_p_norm");
  const RealVector s = singular_values(x.matrix());
  if (p == kInf) return s.maxCoeff();
  if (p == 1.0) return s.sum() * x.algebra().trace_weight();
  if (p == 2.0) return std::sqrt(s.squaredNorm() * x.algebra().trace_weight());
  const double sum = s.unaryExpr([p](double v) { return std::pow(v, p); }).sum();
  return std::pow(sum * x.algebra().trace_weight(), 1.0 / p);
}

double weighted_p_norm(const Element& x, const Reference& b, double p) {
  require_p(p, "weighted_p_norm");
  require_same_algebra(x, b.element(), "weighted_p_norm");
  if (p == 1.0) return schatten_p_norm(x, 1.0);
  const Matrix w = b.weight_for(p);
  return schatten_p_norm(Element(x.algebra(), w * x.matrix() * w), p);
}

// ---------------------------------------------------------------------------

Matrix random_ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Element random_element(TracialAlgebra algebra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return {algebra, random_ginibre(algebra.dim(), algebra.dim(), rng)};
}

Element random_hermitian(TracialAlgebra algebra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = random_ginibre(algebra.dim(), algebra.dim(), rng);
  return {algebra, 0.5 * (g + g.adjoint())};
}

State random_state(TracialAlgebra algebra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = random_ginibre(algebra.dim(), algebra.dim(), rng);
  Matrix a = g * g.adjoint();
  a = 0.5 * (a + a.adjoint());
  a *= static_cast<double>(algebra.dim()) / a.trace().real();
  return State(Element(algebra, std::move(a)));
}

Reference random_reference(TracialAlgebra algebra, std::uint64_t seed, double cond_cap) {
  if (!(cond_cap >= 1.0)) throw InvalidArgument("random_reference: cond_cap must be >= 1");
  std::mt19937_64 rng(seed);
  const int n = algebra.dim();
  const Matrix u = random_unitary(n, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealVector lambda(n);
  const double log_cap = std::log(cond_cap);
  for (int i = 0; i < n; ++i) lambda(i) = std::exp(log_cap * unif(rng));
  lambda *= static_cast<double>(n) / lambda.sum();
  Matrix b = reassemble(u, lambda);
  b = 0.5 * (b + b.adjoint());
  return Reference(Element(algebra, std::move(b)));
}

}  // namespace petz
