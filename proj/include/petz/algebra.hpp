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

#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "petz/error.hpp"

namespace petz {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Numerical tolerances. All are relative: `psd`, `pd` scale with the largest
// eigenvalue of the matrix under test, `cp` with the largest eigenvalue of the
// Choi matrix, `herm` and `trace` with max(1, norm).
struct Tolerances {
  double herm = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double pd = 1e-8;
  double cp = 1e-9;
};

// Full matrix algebra M_n with the normalized trace tau = Tr / n.
class TracialAlgebra {
 public:
  explicit TracialAlgebra(int dim);

  int dim() const { return dim_; }
  double trace_weight() const { return 1.0 / dim_; }
  Matrix identity() const { return Matrix::Identity(dim_, dim_); }

  friend bool operator==(const TracialAlgebra&, const TracialAlgebra&) = default;

 private:
  int dim_;
};

// An n x n complex matrix tagged with the algebra it lives in. Entries are
// always finite.
class Element {
 public:
  Element(TracialAlgebra algebra, Matrix entries);

  static Element identity(TracialAlgebra algebra);
  // Matrix unit E_ij.
  static Element unit(TracialAlgebra algebra, int i, int j);

  const TracialAlgebra& algebra() const { return algebra_; }
  const Matrix& matrix() const { return entries_; }
  int dim() const { return algebra_.dim(); }

  Element adjoint() const;
  bool is_hermitian(double rel_tol) const;

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator*(complex scale) const;

 private:
  TracialAlgebra algebra_;
  Matrix entries_;
};

// Positive element with tau(A) = 1, i.e. A = n * rho for a density matrix rho.
// The stored matrix is the exact Hermitian part of the validated input.
class State {
 public:
  State(Element element, const Tolerances& tol = {});

  static State from_density_matrix(TracialAlgebra algebra, const Matrix& rho,
                                   const Tolerances& tol = {});

  const Element& element() const { return element_; }
  const Matrix& matrix() const { return element_.matrix(); }
  const TracialAlgebra& algebra() const { return element_.algebra(); }
  int dim() const { return element_.dim(); }

  // rho = A / n, the unit-trace density matrix.
  Matrix density_matrix() const;

 private:
  Element element_;
};

// Strictly positive state B. Keeps its eigendecomposition so every power
// B^t needed by the weighted norms and the Petz map is one reassembly away.
class Reference {
 public:
  Reference(Element element, const Tolerances& tol = {});
  static Reference identity(TracialAlgebra algebra);

  const State& state() const { return state_; }
  const Element& element() const { return state_.element(); }
  const Matrix& matrix() const { return state_.matrix(); }
  const TracialAlgebra& algebra() const { return state_.algebra(); }
  int dim() const { return state_.dim(); }

  const RealVector& eigenvalues() const { return eigenvalues_; }
  double lambda_min() const { return eigenvalues_(0); }
  double lambda_max() const { return eigenvalues_(eigenvalues_.size() - 1); }
  double condition_number() const { return lambda_max() / lambda_min(); }

  // B^t for any real t.
  Matrix power(double t) const;
  Matrix sqrt() const { return power(0.5); }
  Matrix inv_sqrt() const { return power(-0.5); }
  Matrix quarter() const { return power(0.25); }
  Matrix inv_quarter() const { return power(-0.25); }
  // B^{-1/(2q)} with 1/p + 1/q = 1; identity at p = 1, B^{-1/2} at p = inf.
  Matrix weight_for(double p) const;

 private:
  State state_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

// ---------------------------------------------------------------------------
// Spectral calculus

struct HermEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

// Eigendecomposition of the Hermitian part (X + X*)/2.
HermEig herm_eig(const Matrix& x);
HermEig herm_eig(const Element& x);

struct MatrixFunction {
  enum class Kind { kSqrt, kInvSqrt, kPower, kAbs };
  Kind kind;
  double exponent = 1.0;

  static MatrixFunction sqrt() { return {Kind::kSqrt, 0.5}; }
  static MatrixFunction inv_sqrt() { return {Kind::kInvSqrt, -0.5}; }
  static MatrixFunction power(double t) { return {Kind::kPower, t}; }
  static MatrixFunction abs() { return {Kind::kAbs, 1.0}; }
};

// Applies f through the spectral decomposition. sqrt/power need a Hermitian
// PSD input; eigenvalues in [-tol.psd * lambda_max, 0) are clamped to zero.
// inv_sqrt and negative powers need strict positivity. abs accepts any input
// and is computed as sqrt(X* X) from singular values.
Element matrix_function(const Element& x, MatrixFunction f, const Tolerances& tol = {});
Matrix matrix_function(const Matrix& x, MatrixFunction f, const Tolerances& tol = {});

RealVector singular_values(const Matrix& x);

// ---------------------------------------------------------------------------
// Traces, inner products, norms

complex tau(const Element& x);
// tau(y* x), linear in x.
complex hs_inner(const Element& x, const Element& y);
// <X, Y>_B = tau(B^{-1/2} Y* B^{-1/2} X).
complex weighted_inner(const Element& x, const Element& y, const Reference& b);

// [tau(|X|^p)]^{1/p}; p = kInf gives the largest singular value.
double schatten_p_norm(const Element& x, double p);
// ||B^{-1/(2q)} X B^{-1/(2q)}||_p.
double weighted_p_norm(const Element& x, const Reference& b, double p);
// Largest singular value of a raw matrix.
double operator_norm(const Matrix& x);

// Hoelder conjugate q = p / (p - 1), with q(1) = inf and q(inf) = 1.
double conjugate_exponent(double p);

// ---------------------------------------------------------------------------
// Seeded generators

Matrix random_ginibre(int rows, int cols, std::mt19937_64& rng);
Matrix random_unitary(int dim, std::mt19937_64& rng);
Element random_element(TracialAlgebra algebra, std::uint64_t seed);
Element random_hermitian(TracialAlgebra algebra, std::uint64_t seed);
State random_state(TracialAlgebra algebra, std::uint64_t seed);
// Strictly positive reference with lambda_max / lambda_min <= cond_cap.
Reference random_reference(TracialAlgebra algebra, std::uint64_t seed, double cond_cap = 100.0);

}  // namespace petz
