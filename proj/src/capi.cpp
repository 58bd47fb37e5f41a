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

#include "petzlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "petz/entropy.hpp"
#include "petz/experiment.hpp"
#include "petz/json_io.hpp"
#include "petz/petz.hpp"

struct petz_channel {
  petz::Superoperator value;
};
struct petz_reference {
  petz::Reference value;
};
struct petz_state {
  petz::State value;
};
struct petz_analysis {
  petz::PetzAnalysis value;
};

namespace {

thread_local std::string g_last_error;

petz_status set_error(petz_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
petz_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PETZ_OK;
  } catch (const petz::ConfigError& e) {
    return set_error(PETZ_CONFIG_ERROR, e.what());
  } catch (const petz::InvalidArgument& e) {
    return set_error(PETZ_INVALID_ARGUMENT, e.what());
  } catch (const petz::NumericalError& e) {
    return set_error(PETZ_NUMERICAL_ERROR, e.what());
  } catch (const petz::json::exception& e) {
    return set_error(PETZ_CONFIG_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PETZ_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PETZ_INTERNAL_ERROR, e.what());
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw petz::InvalidArgument(message);
}

petz::Matrix read_matrix(const double* data, int rows, int cols) {
  require(data != nullptr, "null matrix data");
  require(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
  petz::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double* p = data + 2 * (static_cast<std::ptrdiff_t>(i) * cols + j);
      m(i, j) = petz::complex(p[0], p[1]);
    }
  }
  return m;
}

void write_matrix(const petz::Matrix& m, double* out) {
  require(out != nullptr, "null output buffer");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double* p = out + 2 * (i * m.cols() + j);
      p[0] = m(i, j).real();
      p[1] = m(i, j).imag();
    }
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* petz_version(void) { return "0.1.0"; }

const char* petz_last_error(void) { return g_last_error.c_str(); }

void petz_string_free(char* s) { std::free(s); }

petz_status petz_channel_from_json(const char* json, int source_dim, petz_channel** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    const petz::json j = petz::json::parse(json);
    *out = new petz_channel{petz::channel_from_json(j, petz::TracialAlgebra(source_dim))};
  });
}

petz_status petz_channel_from_kraus(const double* ops, int count, int source_dim, int target_dim,
                                    petz_channel** out) {
  return guarded([&] {
    require(ops != nullptr && out != nullptr, "null argument");
    require(count >= 1, "at least one Kraus operator is required");
    require(source_dim >= 1 && target_dim >= 1, "dimensions must be positive");
    petz::KrausSpec spec;
    const std::ptrdiff_t stride = 2 * static_cast<std::ptrdiff_t>(source_dim) * target_dim;
    for (int k = 0; k < count; ++k) {
      spec.operators.push_back(read_matrix(ops + k * stride, target_dim, source_dim));
    }
    *out = new petz_channel{
        petz::from_kraus(spec, petz::TracialAlgebra(source_dim), petz::TracialAlgebra(target_dim))};
  });
}

void petz_channel_destroy(petz_channel* channel) { delete channel; }

int petz_channel_source_dim(const petz_channel* channel) {
  return channel ? channel->value.source().dim() : 0;
}

int petz_channel_target_dim(const petz_channel* channel) {
  return channel ? channel->value.target().dim() : 0;
}

petz_status petz_channel_checks(const petz_channel* channel, int* flags) {
  return guarded([&] {
    require(channel != nullptr && flags != nullptr, "null argument");
    const petz::ChannelChecks c = channel->value.cached_checks() ? *channel->value.cached_checks()
                                                                 : petz::verify(channel->value);
    *flags = (c.is_cp ? 1 : 0) | (c.is_tp ? 2 : 0) | (c.is_unital ? 4 : 0) | (c.is_strict ? 8 : 0);
  });
}

petz_status petz_channel_apply(const petz_channel* channel, const double* x, double* y) {
  return guarded([&] {
    require(channel != nullptr, "null channel");
    const int n = channel->value.source().dim();
    write_matrix(channel->value.apply(read_matrix(x, n, n)), y);
  });
}

petz_status petz_channel_matrix(const petz_channel* channel, double* out) {
  return guarded([&] {
    require(channel != nullptr, "null channel");
    write_matrix(channel->value.matrix(), out);
  });
}

petz_status petz_reference_create(const double* matrix, int dim, petz_reference** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const petz::TracialAlgebra alg(dim);
    *out = new petz_reference{petz::Reference(petz::Element(alg, read_matrix(matrix, dim, dim)))};
  });
}

petz_status petz_reference_random(int dim, uint64_t seed, double cond_cap, petz_reference** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new petz_reference{petz::random_reference(petz::TracialAlgebra(dim), seed, cond_cap)};
  });
}

void petz_reference_destroy(petz_reference* reference) { delete reference; }

petz_status petz_state_create(const double* matrix, int dim, petz_state** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const petz::TracialAlgebra alg(dim);
    *out = new petz_state{petz::State(petz::Element(alg, read_matrix(matrix, dim, dim)))};
  });
}

petz_status petz_state_random(int dim, uint64_t seed, petz_state** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new petz_state{petz::random_state(petz::TracialAlgebra(dim), seed)};
  });
}

void petz_state_destroy(petz_state* state) { delete state; }

petz_status petz_state_matrix(const petz_state* state, double* out) {
  return guarded([&] {
    require(state != nullptr, "null state");
    write_matrix(state->value.matrix(), out);
  });
}

petz_status petz_map(const petz_channel* channel, const petz_reference* reference, petz_channel** out) {
  return guarded([&] {
    require(channel != nullptr && reference != nullptr && out != nullptr, "null argument");
    *out = new petz_channel{petz::petz_map(channel->value, reference->value)};
  });
}

petz_status petz_analyze(const petz_channel* channel, const petz_reference* reference, double eps_fix,
                         petz_analysis** out) {
  return guarded([&] {
    require(channel != nullptr && reference != nullptr && out != nullptr, "null argument");
    *out = new petz_analysis{petz::fixed_point_analysis(channel->value, reference->value, eps_fix)};
  });
}

void petz_analysis_destroy(petz_analysis* analysis) { delete analysis; }

double petz_analysis_delta(const petz_analysis* analysis) {
  return analysis ? analysis->value.delta : -1.0;
}

int petz_analysis_fixed_dim(const petz_analysis* analysis) {
  return analysis ? analysis->value.fixed_dim : -1;
}

petz_status petz_analysis_psi(const petz_analysis* analysis, petz_channel** out) {
  return guarded([&] {
    require(analysis != nullptr && out != nullptr, "null argument");
    *out = new petz_channel{analysis->value.psi};
  });
}

petz_status petz_analysis_deviation_norm(const petz_analysis* analysis, int n, double* out) {
  return guarded([&] {
    require(analysis != nullptr && out != nullptr, "null argument");
    *out = petz::deviation_norm(analysis->value, n);
  });
}

petz_status petz_analysis_to_json(const petz_analysis* analysis, char** out) {
  return guarded([&] {
    require(analysis != nullptr && out != nullptr, "null argument");
    *out = copy_string(petz::to_json(analysis->value).dump(2));
  });
}

petz_status petz_sandwiched_entropy(const petz_state* a, const petz_reference* b, double p,
                                    double* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = petz::sandwiched_entropy(a->value, b->value, p);
  });
}

petz_status petz_fidelity(const petz_state* a1, const petz_state* a2, double* out) {
  return guarded([&] {
    require(a1 != nullptr && a2 != nullptr && out != nullptr, "null argument");
    *out = petz::fidelity(a1->value, a2->value);
  });
}

petz_status petz_dpi_gap(const petz_channel* channel, const petz_state* a, const petz_reference* b,
                         double p, double* out) {
  return guarded([&] {
    require(channel != nullptr && a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = petz::dpi_gap(channel->value, a->value, b->value, p);
  });
}

int petz_run_command(const char* command, const char* config_json, int has_seed, uint64_t seed,
                     char** out, char** error) {
  if (out) *out = nullptr;
  if (error) *error = nullptr;
  if (command == nullptr || config_json == nullptr) {
    set_error(PETZ_CONFIG_ERROR, "null command or config");
    return PETZ_CONFIG_ERROR;
  }
  std::optional<std::uint64_t> override;
  if (has_seed) override = seed;
  try {
    const petz::CommandResult r = petz::run_command(command, std::string(config_json), override);
    g_last_error = r.error;
    if (out) *out = copy_string(r.output);
    if (error) *error = copy_string(r.error);
    return static_cast<int>(r.code);
  } catch (const std::exception& e) {
    set_error(PETZ_INTERNAL_ERROR, e.what());
    return PETZ_NUMERICAL_ERROR;
  }
}

}  // extern "C"
