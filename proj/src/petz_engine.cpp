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

#include "petz/petz.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace petz {

namespace {

constexpr double kSymmetrizationLimit = 1e-6;
constexpr double kSpectrumSlack = 1e-9;

void require_channel(const Superoperator& phi, const Tolerances& tol, const char* what) {
  const ChannelChecks c = phi.cached_checks() ? *phi.cached_checks() : verify(phi, tol);
  if (!c.is_cp) throw InvalidArgument(std::string(what) + ": channel is not completely positive");
  if (!c.is_tp) throw InvalidArgument(std::string(what) + ": channel is not trace preserving");
  if (!c.is_strict) throw InvalidArgument(std::string(what) + ": channel is not strict");
}

double spectral_norm(const Matrix& m) { return operator_norm(m); }

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Element weighted_conjugation(const Element& x, const Reference& b, Direction direction) {
  if (x.algebra() != b.algebra()) throw InvalidArgument("weighted_conjugation: algebra mismatch");
  const Matrix w = direction == Direction::kForward ? b.inv_quarter() : b.quarter();
  return {x.algebra(), w * x.matrix() * w};
}

Superoperator weighted_conjugation_map(const Reference& b, Direction direction) {
  const Matrix w = direction == Direction::kForward ? b.inv_quarter() : b.quarter();
  return Superoperator::sandwich(b.algebra(), w, w);
}

Superoperator petz_map(const Superoperator& phi, const Reference& b, const Tolerances& tol) {
  if (phi.source() != b.algebra()) throw InvalidArgument("petz_map: reference not in source algebra");
  require_channel(phi, tol, "petz_map");
  const Matrix phi_b = phi.apply(b.matrix());
  Matrix w;
  try {
    w = matrix_function(phi_b, MatrixFunction::inv_sqrt(), tol);
  } catch (const InvalidArgument&) {
    throw InvalidArgument("petz_map: phi(B) is numerically singular");
  }
  const Superoperator inner = Superoperator::sandwich(phi.target(), w, w);
  const Matrix bh = b.sqrt();
  const Superoperator outer = Superoperator::sandwich(phi.source(), bh, bh);
  return compose(outer, compose(phi.adjoint(), inner));
}

PetzAnalysis fixed_point_analysis(const Superoperator& phi, const Reference& b, double eps_fix,
                                  const Tolerances& tol) {
  if (!(eps_fix > 0.0 && eps_fix <= 1e-4)) {
    throw InvalidArgument("fixed_point_analysis: eps_fix must lie in (0, 1e-4]");
  }
  Superoperator r = petz_map(phi, b, tol);
  Superoperator t = compose(r, phi);

  const Matrix fwd = weighted_conjugation_map(b, Direction::kForward).matrix();
  const Matrix inv = weighted_conjugation_map(b, Direction::kInverse).matrix();
  Matrix m = fwd * t.matrix() * inv;

  const double residual = (m - m.adjoint()).norm();
  if (residual > kSymmetrizationLimit) {
    throw NumericalError("fixed_point_analysis: iteration operator is not self-adjoint in the "
                         "weighted frame (residual " + format_double(residual) + ")");
  }
  const HermEig eig = herm_eig(m);
  const auto size = eig.values.size();

  std::vector<std::string> warnings;
  std::vector<double> spectrum(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    double v = eig.values(size - 1 - i);
    if (v < -kSpectrumSlack || v > 1.0 + kSpectrumSlack) {
      throw NumericalError("fixed_point_analysis: eigenvalue " + format_double(v) +
                           " of the iteration operator lies outside [0, 1]");
    }
    spectrum[i] = std::clamp(v, 0.0, 1.0);
  }

  const double threshold = 1.0 - eps_fix;
  const double band_low = 1.0 - 1e-6 * std::max(1.0, b.condition_number());
  int fixed_dim = 0;
  double delta = 0.0;
  std::vector<double> band;
  for (double v : spectrum) {
    if (v >= threshold) {
      ++fixed_dim;
    } else {
      delta = std::max(delta, v);
      if (v >= band_low) band.push_back(v);
    }
  }
  if (fixed_dim == 0) {
    throw NumericalError("fixed_point_analysis: no eigenvalue at 1, but B must be fixed");
  }
  if (!band.empty()) {
    std::ostringstream os;
    os << "eigenvalues inside the ambiguity band [" << format_double(band_low) << ", "
       << format_double(threshold) << "):";
    for (double v : band) os << ' ' << format_double(v);
    os << "; gap detection unreliable";
    warnings.push_back(os.str());
  }

  // Fixed eigenvectors are the last fixed_dim columns (ascending order).
  const Matrix q = eig.vectors.rightCols(fixed_dim);
  Matrix projection = q * q.adjoint();
  Superoperator psi =
      Superoperator(phi.source(), phi.source(), inv * projection * fwd).verified(tol);

  std::vector<Element> basis;
  basis.reserve(fixed_dim);
  for (int k = fixed_dim - 1; k >= 0; --k) {
    basis.push_back(weighted_conjugation(from_coordinates(phi.source(), q.col(k)), b,
                                         Direction::kInverse));
  }

  return PetzAnalysis{std::move(r),          std::move(t),        std::move(psi),
                      delta,                 fixed_dim,           std::move(spectrum),
                      std::move(basis),      std::move(warnings), residual,
                      std::move(m),          std::move(projection), eps_fix};
}

Superoperator deviation(const PetzAnalysis& analysis, int n) {
  if (n < 0) throw InvalidArgument("deviation: n must be >= 0");
  if (n == 0) return Superoperator::identity(analysis.psi.source()) - analysis.psi;
  return power(analysis.iteration - analysis.psi, n);
}

double deviation_norm(const PetzAnalysis& analysis, int n) {
  if (n < 0) throw InvalidArgument("deviation_norm: n must be >= 0");
  const auto d = analysis.fixed_projection.rows();
  if (n == 0) return spectral_norm(Matrix::Identity(d, d) - analysis.fixed_projection);
  const Matrix step = analysis.conjugated_iteration - analysis.fixed_projection;
  Matrix acc = step;
  for (int k = 1; k < n; ++k) acc = step * acc;
  return spectral_norm(acc);
}

// ---------------------------------------------------------------------------

IterationTrace iterate(const PetzAnalysis& analysis, const Reference& b, const State& a, int n_max,
                       const std::vector<double>& p_list, const Tolerances& tol) {
  if (n_max < 1) throw InvalidArgument("iterate: n_max must be >= 1");
  if (a.algebra() != b.algebra() || a.algebra() != analysis.psi.source()) {
    throw InvalidArgument("iterate: algebra mismatch");
  }
  for (double p : p_list) {
    if (!(p >= 1.0)) throw InvalidArgument("iterate: every p must satisfy p >= 1");
  }
  const TracialAlgebra alg = a.algebra();
  const Element limit_elem = analysis.psi.apply(a.element());
  State limit(limit_elem, tol);
  const Matrix step = (analysis.iteration - analysis.psi).matrix();

  Element c = a.element() - limit.element();
  const double initial_b2 = weighted_p_norm(c, b, 2.0);

  std::vector<IterationRow> rows;
  std::vector<State> states;
  rows.reserve(n_max + 1);
  states.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) c = from_coordinates(alg, step * coordinates(c));
    IterationRow row;
    row.n = n;
    row.dist_l1 = schatten_p_norm(c, 1.0);
    row.dist_b2 = weighted_p_norm(c, b, 2.0);
    row.cert_delta_pow = std::pow(analysis.delta, n) * initial_b2;
    for (double p : p_list) row.dist_bp.push_back(weighted_p_norm(c, b, p));
    rows.push_back(std::move(row));
    states.emplace_back(limit.element() + c, tol);
  }
  return IterationTrace{p_list, analysis.delta, std::move(rows), std::move(states), std::move(limit)};
}

IterationTrace iterate(const Superoperator& phi, const Reference& b, const State& a, int n_max,
                       const std::vector<double>& p_list, double eps_fix, const Tolerances& tol) {
  return iterate(fixed_point_analysis(phi, b, eps_fix, tol), b, a, n_max, p_list, tol);
}

std::string to_csv(const IterationTrace& trace) {
  std::ostringstream os;
  os << "n,dist_l1,dist_B2,cert_delta_pow";
  for (double p : trace.p_list) {
    os << ",dist_Bp_";
    if (p == kInf) {
      os << "inf";
    } else {
      os << format_double(p);
    }
  }
  os << '\n';
  for (const IterationRow& row : trace.rows) {
    os << row.n << ',' << format_double(row.dist_l1) << ',' << format_double(row.dist_b2) << ','
       << format_double(row.cert_delta_pow);
    for (double v : row.dist_bp) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Decomposition decompose(const PetzAnalysis& analysis, const State& a, const Tolerances& tol) {
  if (a.algebra() != analysis.psi.source()) throw InvalidArgument("decompose: algebra mismatch");
  State a0(analysis.psi.apply(a.element()), tol);
  Element c = a.element() - a0.element();
  const double recover = schatten_p_norm(analysis.iteration.apply(a0.element()) - a0.element(), 2.0);
  const double psi_c = schatten_p_norm(analysis.psi.apply(c), 2.0);
  const double t = tau(a0.element()).real();
  const double recon = schatten_p_norm(a.element() - (a0.element() + c), 2.0);
  return Decomposition{std::move(a0), std::move(c), recover, psi_c, t, recon};
}

Decomposition decompose(const Superoperator& phi, const Reference& b, const State& a,
                        double eps_fix, const Tolerances& tol) {
  return decompose(fixed_point_analysis(phi, b, eps_fix, tol), a, tol);
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  Vector u;
  Vector v;
};

// Tr|D(u v*)| for unit u, v, which equals the trace-norm ratio at n u v*.
double rank_one_value(const Superoperator& d, const Vector& u, const Vector& v) {
  const Matrix y = d.apply(Matrix(u * v.adjoint()));
  return singular_values(y).sum();
}

// Alternating ascent: W = polar factor of D(u v*), then (u, v) = top singular
// pair of D^dagger(W)*. Never decreases the objective.
Candidate ascend(const Superoperator& d, const Superoperator& d_adj, Candidate c, double* value) {
  double current = rank_one_value(d, c.u, c.v);
  for (int sweep = 0; sweep < 200; ++sweep) {
    const Matrix y = d.apply(Matrix(c.u * c.v.adjoint()));
    Eigen::JacobiSVD<Matrix> svd_y(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix w = svd_y.matrixU() * svd_y.matrixV().adjoint();
    const Matrix g = d_adj.apply(w);
    Eigen::JacobiSVD<Matrix> svd_g(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Candidate next{svd_g.matrixU().col(0), svd_g.matrixV().col(0)};
    const double value_next = rank_one_value(d, next.u, next.v);
    if (!(value_next > current * (1.0 + 1e-13))) {
      if (value_next > current) {
        c = std::move(next);
        current = value_next;
      }
      break;
    }
    c = std::move(next);
    current = value_next;
  }
  *value = current;
  return c;
}

Vector random_unit(int dim, std::mt19937_64& rng) {
  Vector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

// Local maximizers for one deviation operator, in deterministic order.
std::vector<Candidate> search(const Superoperator& d, int restarts, std::uint64_t seed) {
  const int dim = d.source().dim();
  const Superoperator d_adj = d.adjoint();
  std::vector<Candidate> starts;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      starts.push_back({Vector::Unit(dim, i), Vector::Unit(dim, j)});
    }
  }
  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    Vector u = random_unit(dim, rng);
    Vector v = random_unit(dim, rng);
    starts.push_back({std::move(u), std::move(v)});
  }
  std::vector<Candidate> found;
  found.reserve(starts.size());
  for (Candidate& s : starts) {
    double value = 0.0;
    found.push_back(ascend(d, d_adj, std::move(s), &value));
  }
  return found;
}

double best_over(const Superoperator& d, const std::vector<Candidate>& pool) {
  double best = 0.0;
  for (const Candidate& c : pool) best = std::max(best, rank_one_value(d, c.u, c.v));
  return best;
}

}  // namespace

double l1_ratio(const PetzAnalysis& analysis, int n, const Element& x) {
  const double denom = schatten_p_norm(x, 1.0);
  if (denom == 0.0) return 0.0;
  return schatten_p_norm(deviation(analysis, n).apply(x), 1.0) / denom;
}

double l1_norm_probe(const PetzAnalysis& analysis, int n, int restarts, std::uint64_t seed) {
  if (n < 0) throw InvalidArgument("l1_norm_probe: n must be >= 0");
  if (restarts < 0) throw InvalidArgument("l1_norm_probe: restarts must be >= 0");
  const Superoperator d = deviation(analysis, n);
  return best_over(d, search(d, restarts, seed));
}

double l1_norm_probe(const Superoperator& phi, const Reference& b, int n, int restarts,
                     std::uint64_t seed) {
  return l1_norm_probe(fixed_point_analysis(phi, b), n, restarts, seed);
}

std::vector<double> l1_norm_probe_sequence(const PetzAnalysis& analysis, int n_max, int restarts,
                                           std::uint64_t seed) {
  if (n_max < 0) throw InvalidArgument("l1_norm_probe_sequence: n_max must be >= 0");
  if (restarts < 0) throw InvalidArgument("l1_norm_probe_sequence: restarts must be >= 0");
  std::vector<Superoperator> ops;
  ops.reserve(n_max + 1);
  std::vector<Candidate> pool;
  for (int n = 0; n <= n_max; ++n) {
    ops.push_back(deviation(analysis, n));
    std::vector<Candidate> found = search(ops.back(), restarts, seed + static_cast<std::uint64_t>(n));
    pool.insert(pool.end(), std::make_move_iterator(found.begin()),
                std::make_move_iterator(found.end()));
  }
  std::vector<double> out;
  out.reserve(n_max + 1);
  for (const Superoperator& d : ops) out.push_back(best_over(d, pool));
  return out;
}

}  // namespace petz
