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

#include "petz/entropy.hpp"

#include <cmath>

#include "petz/petz.hpp"

namespace petz {

namespace {

void require_p(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + ": p must satisfy p >= 1");
}

void require_channel(const Superoperator& phi, const Tolerances& tol, const char* what) {
  const ChannelChecks c = phi.cached_checks() ? *phi.cached_checks() : verify(phi, tol);
  if (!c.is_cp || !c.is_tp || !c.is_strict) {
    throw InvalidArgument(std::string(what) + ": channel must be strict CPTP");
  }
}

// phi(B) as a reference density on the target algebra.
Reference image_reference(const Superoperator& phi, const Reference& b, const Tolerances& tol) {
  if (phi.source() != b.algebra()) throw InvalidArgument("reference not in the source algebra");
  return Reference(phi.apply(b.element()), tol);
}

}  // namespace

double sandwiched_entropy(const State& a, const Reference& b, double p) {
  require_p(p, "sandwiched_entropy");
  if (a.algebra() != b.algebra()) throw InvalidArgument("sandwiched_entropy: algebra mismatch");
  if (p == 1.0) return tau(a.element()).real();
  const Matrix w = b.weight_for(p);
  const HermEig eig = herm_eig(Matrix(w * a.matrix() * w));
  const RealVector lambda = eig.values.cwiseMax(0.0);
  if (p == kInf) return lambda.maxCoeff();
  return lambda.unaryExpr([p](double l) { return std::pow(l, p); }).sum() *
         a.algebra().trace_weight();
}

double sandwiched_entropy_norm_form(const State& a, const Reference& b, double p) {
  return weighted_p_norm(a.element(), b, p);
}

double fidelity(const State& a1, const State& a2) {
  if (a1.algebra() != a2.algebra()) throw InvalidArgument("fidelity: algebra mismatch");
  const Matrix r1 = matrix_function(a1.matrix(), MatrixFunction::sqrt());
  const Matrix r2 = matrix_function(a2.matrix(), MatrixFunction::sqrt());
  return singular_values(r1 * r2).sum() * a1.algebra().trace_weight();
}

double dpi_gap(const Superoperator& phi, const State& a, const Reference& b, double p,
               const Tolerances& tol) {
  require_p(p, "dpi_gap");
  require_channel(phi, tol, "dpi_gap");
  const Reference phi_b = image_reference(phi, b, tol);
  const State phi_a(phi.apply(a.element()), tol);
  return sandwiched_entropy(a, b, p) - sandwiched_entropy(phi_a, phi_b, p);
}

ContractionCheck weighted_contraction_check(const Superoperator& phi, const Reference& b,
                                            const Element& x, double p, const Tolerances& tol) {
  require_p(p, "weighted_contraction_check");
  require_channel(phi, tol, "weighted_contraction_check");
  const Reference phi_b = image_reference(phi, b, tol);
  return {weighted_p_norm(phi.apply(x), phi_b, p), weighted_p_norm(x, b, p)};
}

BoundReport recoverability_bound(const Superoperator& phi, const Reference& b, const State& a,
                                 const Tolerances& tol) {
  const Superoperator r = petz_map(phi, b, tol);
  const State recovered(r.apply(phi.apply(a.element())), tol);
  BoundReport rep;
  const double f = fidelity(a, recovered);
  rep.lhs = 4.0 * (1.0 - f) * (1.0 - f);
  const double l1 = schatten_p_norm(a.element() - recovered.element(), 1.0);
  rep.mid = l1 * l1;
  rep.rhs = dpi_gap(phi, a, b, 2.0, tol);
  rep.slack_lower = rep.mid - rep.lhs;
  rep.slack_upper = rep.rhs - rep.mid;
  rep.holds_lower = rep.slack_lower >= -kBoundSlack;
  rep.holds_upper = rep.slack_upper >= -kBoundSlack;
  return rep;
}

}  // namespace petz
