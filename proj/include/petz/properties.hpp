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
#include <string>
#include <vector>

#include "petz/algebra.hpp"
#include "petz/channels.hpp"
#include "petz/petz.hpp"

namespace petz {

// Fully determines a random test instance.
struct InstanceSpec {
  std::uint64_t seed = 0;
  int dim = 2;
  int target_dim = 2;
  // "random" | "unitary" | "mixed_unitary" | "depolarizing_like" | "pinching"
  std::string kind = "random";
  int rank = 2;
  double cond_cap = 100.0;
  std::vector<double> p_list = {1.0, 1.5, 2.0, 3.0, kInf};
  int n_max = 60;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct Instance {
  InstanceSpec spec;
  Superoperator phi;
  Reference b;
  State a;
  std::optional<KrausSpec> kraus;
  int retries = 0;
};

// Thrown when no strict channel was produced within the retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kMaxGenerationRetries = 16;

// Regenerates the channel with a perturbed seed while strictness fails.
Instance generate(const InstanceSpec& spec, const Tolerances& tol = {});

// Deterministic sub-seed for a named component of an instance.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t attempt = 0);

// ---------------------------------------------------------------------------

struct PropertyOutcome {
  bool pass = true;
  double slack = 0.0;  // worst margin; negative means violated
  std::string detail;
};

// Data shared by all properties evaluated on one instance.
struct PropertyContext {
  const Instance& instance;
  const PetzAnalysis& analysis;
  const Tolerances& tol;
};

struct Property {
  std::string name;
  std::string module;
  // Empirical observations that are reported but never fail the suite.
  bool informational = false;
  std::function<PropertyOutcome(const PropertyContext&)> check;
};

// Every invariant of the library as an executable check, each exactly once.
const std::vector<Property>& property_registry();
const Property* find_property(const std::string& name);
std::vector<std::string> all_property_names();

struct PropertyReport {
  std::string name;
  bool informational = false;
  int pass = 0;
  int fail = 0;
  std::optional<double> worst_slack;
  std::vector<InstanceSpec> counterexamples;
  std::vector<std::string> details;
};

struct Rejection {
  InstanceSpec spec;
  std::string reason;
};

struct SuiteReport {
  std::vector<PropertyReport> properties;
  std::vector<Rejection> rejected;
};

struct SuiteOptions {
  int workers = 1;
  bool shrink_counterexamples = true;
  std::size_t max_counterexamples = 5;
  Tolerances tol;
};

// Throws InvalidArgument if a registry name does not exist. An empty name
// list selects no properties; pass all_property_names() for the full suite.
SuiteReport run_properties(const std::vector<InstanceSpec>& specs,
                           const std::vector<std::string>& registry,
                           const SuiteOptions& options = {});

// 0 when every non-informational property passed and nothing was rejected.
int exit_status(const SuiteReport& report);

// Greedily lowers dim, rank and n_max while `still_fails` holds.
InstanceSpec shrink(const InstanceSpec& failing,
                    const std::function<bool(const InstanceSpec&)>& still_fails);

// True if `property` fails, or its evaluation throws, on the instance of
// `spec`. Specs whose instance cannot be generated count as not failing.
bool fails_on(const Property& property, const InstanceSpec& spec, const Tolerances& tol = {});

// Seeded sweep of specs with the given shape; seeds are base_seed + i.
std::vector<InstanceSpec> sweep_specs(const InstanceSpec& shape, int count, std::uint64_t base_seed);

}  // namespace petz
