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
#include <vector>

#include <json.hpp>

#include "petz/algebra.hpp"
#include "petz/channels.hpp"
#include "petz/entropy.hpp"
#include "petz/petz.hpp"
#include "petz/properties.hpp"

namespace petz {

using json = nlohmann::ordered_json;

// {"re": [[...]], "im": [[...]]}, row-major. Doubles are written in shortest
// round-trip form, so parse(dump(m)) == m exactly.
json matrix_to_json(const Matrix& m);
// Throws ConfigError on malformed input.
Matrix matrix_from_json(const json& j);

// p exponents: a number >= 1 or the string "inf".
double exponent_from_json(const json& j);
json exponent_to_json(double p);

// Channel schema: {"kind": "identity" | "pinching" | "conditional_expectation_diag" |
// "mixed_unitary" | "kraus" | "random" | "depolarizing_like", ...}.
Superoperator channel_from_json(const json& j, TracialAlgebra source);

// {"kind": "identity" | "explicit" | "random", ...}
Reference reference_from_json(const json& j, TracialAlgebra algebra, const Tolerances& tol = {});
// {"kind": "explicit" | "random" | "reference", ...}
State state_from_json(const json& j, TracialAlgebra algebra, const Reference& b,
                      const Tolerances& tol = {});

Tolerances tolerances_from_json(const json& j);

json to_json(const PetzAnalysis& analysis);
json to_json(const BoundReport& report);
json to_json(const InstanceSpec& spec);
json to_json(const SuiteReport& report);

// Missing fields keep their InstanceSpec defaults.
InstanceSpec instance_spec_from_json(const json& j);

}  // namespace petz
