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

#include "petz/algebra.hpp"
#include "petz/channels.hpp"

namespace petz {

// tau[(B^{-1/(2q)} A B^{-1/(2q)})^p], 1/p + 1/q = 1. At p = kInf the trace of
// the p-th power diverges, so the weighted sup ||B^{-1/2} A B^{-1/2}||_inf is
// returned instead.
double sandwiched_entropy(const State& a, const Reference& b, double p);
// ||A||_{B,p}, the p-th root of sandwiched_entropy for finite p.
double sandwiched_entropy_norm_form(const State& a, const Reference& b, double p);

// tau(|A1^{1/2} A2^{1/2}|); equals Tr|sqrt(rho1) sqrt(rho2)| for the density
// matrices rho_i = A_i / n.
double fidelity(const State& a1, const State& a2);

// S_p(A|B) - S_p(phi(A)|phi(B)).
double dpi_gap(const Superoperator& phi, const State& a, const Reference& b, double p,
               const Tolerances& tol = {});

struct ContractionCheck {
  double lhs = 0.0;  // ||phi(X)||_{phi(B),p}
  double rhs = 0.0;  // ||X||_{B,p}
};

ContractionCheck weighted_contraction_check(const Superoperator& phi, const Reference& b,
                                            const Element& x, double p, const Tolerances& tol = {});

struct BoundReport {
  double lhs = 0.0;  // 4 [1 - F(A, R phi A)]^2
  double mid = 0.0;  // ||A - R phi A||_1^2
  double rhs = 0.0;  // S_2(A|B) - S_2(phi A|phi B)
  double slack_lower = 0.0;  // mid - lhs
  double slack_upper = 0.0;  // rhs - mid
  bool holds_lower = false;
  bool holds_upper = false;
};

inline constexpr double kBoundSlack = 1e-9;

BoundReport recoverability_bound(const Superoperator& phi, const Reference& b, const State& a,
                                 const Tolerances& tol = {});

}  // namespace petz
