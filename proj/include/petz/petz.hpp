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
#include <string>
#include <vector>

#include "petz/algebra.hpp"
#include "petz/channels.hpp"

namespace petz {

// C_B(X) = B^{-1/4} X B^{-1/4} maps (L^2, <.,.>_B) isometrically onto
// (L^2, <.,.>_tau); the inverse direction is X -> B^{1/4} X B^{1/4}.
enum class Direction { kForward, kInverse };

Element weighted_conjugation(const Element& x, const Reference& b, Direction direction);
Superoperator weighted_conjugation_map(const Reference& b, Direction direction);

// R(Y) = B^{1/2} phi*(phi(B)^{-1/2} Y phi(B)^{-1/2}) B^{1/2}.
// Requires phi CP, tau-TP and strict.
Superoperator petz_map(const Superoperator& phi, const Reference& b, const Tolerances& tol = {});

struct PetzAnalysis {
  Superoperator petz;       // R
  Superoperator iteration;  // R o phi
  Superoperator psi;        // limit projection onto the recoverable space
  double delta = 0.0;       // largest eigenvalue of R o phi below the fixed cluster
  int fixed_dim = 0;
  std::vector<double> spectrum;  // eigenvalues of the symmetrized iteration operator, descending
  std::vector<Element> basis_v;  // <.,.>_B-orthonormal basis of the fixed space
  std::vector<std::string> warnings;
  double symmetrization_residual = 0.0;  // ||M - M*||_F in the conjugated frame
  Matrix conjugated_iteration;           // M = C_B (R o phi) C_B^{-1}, unsymmetrized
  Matrix fixed_projection;               // P_V in the conjugated frame
  double eps_fix = 1e-8;
};

// Spectral analysis of R o phi in the B-weighted inner product.
// Throws NumericalError if M is not Hermitian to 1e-6 or has an eigenvalue
// below -1e-9 or above 1 + 1e-9.
PetzAnalysis fixed_point_analysis(const Superoperator& phi, const Reference& b,
                                  double eps_fix = 1e-8, const Tolerances& tol = {});

// (R o phi)^n - psi. For n >= 1 this is evaluated as (R o phi - psi)^n, which
// is the same operator since (R o phi) psi = psi (R o phi) = psi^2 = psi, but
// keeps the roundoff relative to the (decaying) result.
Superoperator deviation(const PetzAnalysis& analysis, int n);

// ||(R o phi)^n - psi||_{B,2}, measured as the spectral norm of
// (M - P_V)^n in the conjugated frame.
double deviation_norm(const PetzAnalysis& analysis, int n);

// ---------------------------------------------------------------------------

struct IterationRow {
  int n = 0;
  double dist_l1 = 0.0;
  double dist_b2 = 0.0;
  double cert_delta_pow = 0.0;  // delta^n ||A - psi(A)||_{B,2}
  std::vector<double> dist_bp;  // one per entry of p_list
};

struct IterationTrace {
  std::vector<double> p_list;
  double delta = 0.0;
  std::vector<IterationRow> rows;  // n = 0..n_max
  std::vector<State> states;       // A_n = (R o phi)^n (A)
  State limit;                     // psi(A)
};

IterationTrace iterate(const PetzAnalysis& analysis, const Reference& b, const State& a, int n_max,
                       const std::vector<double>& p_list, const Tolerances& tol = {});
IterationTrace iterate(const Superoperator& phi, const Reference& b, const State& a, int n_max,
                       const std::vector<double>& p_list, double eps_fix = 1e-8,
                       const Tolerances& tol = {});

// CSV with header n,dist_l1,dist_B2,cert_delta_pow,dist_Bp_<p>...
std::string to_csv(const IterationTrace& trace);

// ---------------------------------------------------------------------------

struct Decomposition {
  State a0;   // psi(A), recoverable
  Element c;  // A - psi(A), vanishes under the iteration
  double recoverability_residual = 0.0;  // ||(R o phi)(A0) - A0||_2
  double psi_c_residual = 0.0;           // ||psi(C)||_2
  double tau_a0 = 0.0;
  double reconstruction_residual = 0.0;  // ||A - (A0 + C)||_2
};

Decomposition decompose(const PetzAnalysis& analysis, const State& a, const Tolerances& tol = {});
Decomposition decompose(const Superoperator& phi, const Reference& b, const State& a,
                        double eps_fix = 1e-8, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Lower bounds on ||(R o phi)^n - psi||_{1 -> 1}. The induced norm is maximized
// over extreme points n u v* of the trace-norm ball, so every value returned is
// attained by some explicit input. These are bounds from a local search, not
// the induced norm itself.

// ||((R o phi)^n - psi)(x)||_1 / ||x||_1.
double l1_ratio(const PetzAnalysis& analysis, int n, const Element& x);

// Multi-start ascent at a single n.
double l1_norm_probe(const PetzAnalysis& analysis, int n, int restarts = 32, std::uint64_t seed = 0);
double l1_norm_probe(const Superoperator& phi, const Reference& b, int n, int restarts = 32,
                     std::uint64_t seed = 0);

// Probes for n = 0..n_max. Local maximizers found at every n are pooled and
// each entry is the best ratio over the whole pool, so the sequence inherits
// monotonicity from the L^1 contractivity of R o phi.
std::vector<double> l1_norm_probe_sequence(const PetzAnalysis& analysis, int n_max,
                                           int restarts = 32, std::uint64_t seed = 0);

}  // namespace petz
