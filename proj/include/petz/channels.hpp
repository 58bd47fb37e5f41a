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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "petz/algebra.hpp"

namespace petz {

// Results of checking complete positivity, trace preservation, unitality and
// strictness, together with the residuals the decisions were based on.
struct ChannelChecks {
  bool is_cp = false;
  bool is_tp = false;
  bool is_unital = false;
  bool is_strict = false;
  double choi_min_eig = 0.0;
  double choi_max_eig = 0.0;
  double tp_residual = 0.0;      // max_ij |tau'(phi(E_ij)) - tau(E_ij)|
  double unital_residual = 0.0;  // ||phi(I) - I||_inf
  double strict_min_eig = 0.0;   // lambda_min(phi(I))
  Tolerances tol;
};

// Linear map M_n -> M_m stored as an m^2 x n^2 matrix in the orthonormal bases
// {sqrt(n) E_ij} and {sqrt(m) E_kl} of (M_n, tau) and (M_m, tau'). Basis index
// of E_ij is i * dim + j. With these bases the tau-adjoint is the conjugate
// transpose.
class Superoperator {
 public:
  Superoperator(TracialAlgebra source, TracialAlgebra target, Matrix matrix);

  static Superoperator identity(TracialAlgebra algebra);
  static Superoperator from_map(TracialAlgebra source, TracialAlgebra target,
                                const std::function<Matrix(const Matrix&)>& map);
  // X -> left * X * right on a single algebra.
  static Superoperator sandwich(TracialAlgebra algebra, const Matrix& left, const Matrix& right);

  const TracialAlgebra& source() const { return source_; }
  const TracialAlgebra& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

  Element apply(const Element& x) const;
  Matrix apply(const Matrix& x) const;

  Superoperator adjoint() const;

  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator*(complex scale) const;

  // Copy carrying verification results computed with `tol`.
  Superoperator verified(const Tolerances& tol = {}) const;
  const std::optional<ChannelChecks>& cached_checks() const { return checks_; }

 private:
  TracialAlgebra source_;
  TracialAlgebra target_;
  Matrix matrix_;
  std::optional<ChannelChecks> checks_;
};

// Coordinates of x in the {sqrt(n) E_ij} basis, and back.
Vector coordinates(const Element& x);
Vector coordinates(const Matrix& x);
Element from_coordinates(TracialAlgebra algebra, const Vector& coords);

// g after f.
Superoperator compose(const Superoperator& g, const Superoperator& f);
// Integer power of an endomorphism by repeated squaring; power 0 is identity.
Superoperator power(const Superoperator& phi, int exponent);

// Choi matrix sum_ij E_ij (x) phi(E_ij), size nm x nm.
Matrix choi_matrix(const Superoperator& phi);

ChannelChecks verify(const Superoperator& phi, const Tolerances& tol = {});
bool is_cp(const Superoperator& phi, const Tolerances& tol = {});
bool is_tp(const Superoperator& phi, const Tolerances& tol = {});
bool is_unital(const Superoperator& phi, const Tolerances& tol = {});
// phi(B) >= lambda_min(B) phi(I) for positive B, so strictness reduces to
// phi(I) being strictly positive.
bool is_strict(const Superoperator& phi, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Kraus representation

struct KrausSpec {
  std::vector<Matrix> operators;  // each target_dim x source_dim
};

// phi(X) = sum_i K_i X K_i*.
Superoperator from_kraus(const KrausSpec& spec, TracialAlgebra source, TracialAlgebra target);
// ||sum_i K_i* K_i - (m/n) I||_inf; zero iff the map is tau-trace preserving.
double kraus_tp_residual(const KrausSpec& spec, TracialAlgebra source, TracialAlgebra target);

// ---------------------------------------------------------------------------
// Channel zoo. Every constructor returns a verified CP, tau-TP superoperator.

Superoperator pinching(TracialAlgebra algebra, const std::vector<int>& blocks);
Superoperator conditional_expectation_diag(TracialAlgebra algebra);
Superoperator mixed_unitary(TracialAlgebra algebra, const std::vector<double>& weights,
                            const std::vector<Matrix>& unitaries);
Superoperator unitary_conjugation(TracialAlgebra algebra, const Matrix& unitary);
// X -> lambda X + (1 - lambda) tau(X) I.
Superoperator depolarizing_like(TracialAlgebra algebra, double lambda);
// Ginibre Kraus operators re-normalized by sqrt(m/n) S^{-1/2}, S = sum K*K.
KrausSpec random_kraus(TracialAlgebra source, int target_dim, int rank, std::uint64_t seed);
Superoperator random_channel(TracialAlgebra source, int target_dim, int rank, std::uint64_t seed);

}  // namespace petz
