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

#include "petz/experiment.hpp"

#include <cmath>

#include "petz/entropy.hpp"
#include "petz/petz.hpp"
#include "petz/properties.hpp"

namespace petz {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(std::string("config: \"") + key + "\" must be an integer");
  return j.at(key).get<int>();
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(std::string("config: \"") + key + "\" must be an integer");
  return v.is_number_unsigned() ? v.get<std::uint64_t>()
                                : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

json object_or(const json& j, const char* key, json fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_object()) fail(std::string("config: \"") + key + "\" must be an object");
  return j.at(key);
}

// Adds `offset` to the component's own seed, if it has one.
json shift_seed(json component, std::uint64_t offset) {
  if (component.contains("seed")) {
    const json& s = component.at("seed");
    if (!s.is_number_integer()) fail("config: component seed must be an integer");
    const std::uint64_t base = s.is_number_unsigned() ? s.get<std::uint64_t>()
                                                      : static_cast<std::uint64_t>(s.get<std::int64_t>());
    component["seed"] = base + offset;
  } else if (component.value("kind", "") == "random") {
    component["seed"] = offset;
  }
  return component;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const std::vector<double>& default_dpi_ps() {
  static const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0, kInf};
  return ps;
}

json counterexample(const ConfiguredInstance& inst) {
  return json{{"instance", inst.resolved},
              {"phi", matrix_to_json(inst.phi.matrix())},
              {"b", matrix_to_json(inst.b.matrix())},
              {"a", matrix_to_json(inst.a.matrix())}};
}

CommandResult ok(std::string output, bool violation = false) {
  return {violation ? ExitCode::kViolation : ExitCode::kSuccess, std::move(output), {}};
}

// ---------------------------------------------------------------------------

CommandResult cmd_analyze(const ExperimentConfig& cfg) {
  const ConfiguredInstance inst = build_instance(cfg);
  const PetzAnalysis an = fixed_point_analysis(inst.phi, inst.b, cfg.eps_fix, cfg.tol);
  return ok(dump(to_json(an)));
}

CommandResult cmd_iterate(const ExperimentConfig& cfg) {
  const ConfiguredInstance inst = build_instance(cfg);
  const IterationTrace tr = iterate(inst.phi, inst.b, inst.a, cfg.n_max, cfg.p_list, cfg.eps_fix, cfg.tol);
  return ok(to_csv(tr));
}

CommandResult cmd_decompose(const ExperimentConfig& cfg) {
  const ConfiguredInstance inst = build_instance(cfg);
  const Decomposition d = decompose(inst.phi, inst.b, inst.a, cfg.eps_fix, cfg.tol);
  const bool recoverable = d.recoverability_residual <= 1e-9;
  const bool unit_trace = std::abs(d.tau_a0 - 1.0) <= cfg.tol.trace;
  const bool psi_c_zero = d.psi_c_residual <= 1e-9;
  json out{{"a0", matrix_to_json(d.a0.matrix())},
           {"c", matrix_to_json(d.c.matrix())},
           {"checks",
            {{"a0_recoverable", recoverable},
             {"tau_a0_is_one", unit_trace},
             {"psi_c_zero", psi_c_zero},
             {"recoverability_residual", d.recoverability_residual},
             {"psi_c_residual", d.psi_c_residual},
             {"tau_a0", d.tau_a0},
             {"reconstruction_residual", d.reconstruction_residual}}}};
  return ok(dump(out), !(recoverable && unit_trace && psi_c_zero));
}

CommandResult cmd_dpi(const ExperimentConfig& cfg) {
  const std::vector<double>& ps = cfg.p_list.empty() ? default_dpi_ps() : cfg.p_list;
  json instances = json::array();
  json counterexamples = json::array();
  bool violation = false;
  for (int i = 0; i < cfg.num_instances; ++i) {
    const ConfiguredInstance inst = build_instance(cfg, i);
    json gaps = json::array();
    bool bad = false;
    for (double p : ps) {
      const double gap = dpi_gap(inst.phi, inst.a, inst.b, p, cfg.tol);
      const bool holds = gap >= -1e-9;
      bad = bad || !holds;
      gaps.push_back({{"p", exponent_to_json(p)}, {"gap", gap}, {"holds", holds}});
    }
    instances.push_back({{"index", i}, {"gaps", std::move(gaps)}});
    if (bad) counterexamples.push_back(counterexample(inst));
    violation = violation || bad;
  }
  return ok(dump({{"instances", std::move(instances)}, {"counterexamples", std::move(counterexamples)}}),
            violation);
}

CommandResult cmd_bound(const ExperimentConfig& cfg) {
  json instances = json::array();
  json counterexamples = json::array();
  bool violation = false;
  for (int i = 0; i < cfg.num_instances; ++i) {
    const ConfiguredInstance inst = build_instance(cfg, i);
    const BoundReport r = recoverability_bound(inst.phi, inst.b, inst.a, cfg.tol);
    json entry = to_json(r);
    entry["index"] = i;
    instances.push_back(std::move(entry));
    if (!r.holds_lower || !r.holds_upper) {
      counterexamples.push_back(counterexample(inst));
      violation = true;
    }
  }
  return ok(dump({{"instances", std::move(instances)}, {"counterexamples", std::move(counterexamples)}}),
            violation);
}

CommandResult cmd_fuzz(const ExperimentConfig& cfg) {
  const json& fz = cfg.fuzz;
  std::vector<std::string> registry = all_property_names();
  if (fz.contains("registry")) {
    if (!fz.at("registry").is_array()) fail("config: fuzz.registry must be an array");
    registry.clear();
    for (const json& n : fz.at("registry")) {
      if (!n.is_string()) fail("config: fuzz.registry entries must be strings");
      const auto name = n.get<std::string>();
      if (!find_property(name)) fail("config: unknown property \"" + name + "\"");
      registry.push_back(name);
    }
  }
  json shape_json = fz.contains("shape") ? fz.at("shape") : json::object();
  if (!shape_json.contains("dim") && cfg.dim > 0) shape_json["dim"] = cfg.dim;
  InstanceSpec shape = instance_spec_from_json(shape_json);
  std::vector<InstanceSpec> specs = sweep_specs(shape, cfg.num_instances, cfg.seed);
  if (fz.contains("dims")) {
    const auto dims = fz.at("dims").get<std::vector<int>>();
    if (dims.empty()) fail("config: fuzz.dims must not be empty");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      specs[i].dim = dims[i % dims.size()];
      specs[i].target_dim = specs[i].dim;
    }
  }
  SuiteOptions opts;
  opts.tol = cfg.tol;
  opts.workers = get_int(fz, "workers", 1);
  SuiteReport report;
  try {
    report = run_properties(specs, registry, opts);
  } catch (const InvalidArgument& e) {
    fail(std::string("config: ") + e.what());
  }
  return ok(dump(to_json(report)), exit_status(report) != 0);
}

CommandResult cmd_probe_l1(const ExperimentConfig& cfg) {
  const ConfiguredInstance inst = build_instance(cfg);
  const PetzAnalysis an = fixed_point_analysis(inst.phi, inst.b, cfg.eps_fix, cfg.tol);
  const std::vector<double> seq = l1_norm_probe_sequence(an, cfg.n_max, cfg.restarts, cfg.seed);
  json probes = json::array();
  bool monotone = true;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    probes.push_back({{"n", n}, {"lower_bound", seq[n]}});
    if (n > 0 && seq[n] > seq[n - 1] * (1.0 + 1e-8)) monotone = false;
  }
  return ok(dump({{"delta", an.delta}, {"probes", std::move(probes)}, {"non_increasing", monotone}}),
            !monotone);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config: top level must be a JSON object");
  ExperimentConfig c;
  if (j.contains("algebra")) {
    const json& alg = j.at("algebra");
    if (!alg.is_object()) fail("config: \"algebra\" must be an object");
    c.dim = get_int(alg, "dim", 0);
    if (c.dim < 1) fail("config: algebra.dim must be >= 1");
  }
  c.reference = object_or(j, "reference", json{{"kind", "identity"}});
  c.channel = object_or(j, "channel", json{});
  c.state = object_or(j, "state", json{{"kind", "random"}, {"seed", 0}});
  if (j.contains("tolerances")) {
    c.tol = tolerances_from_json(j.at("tolerances"));
    if (j.at("tolerances").contains("eps_fix")) {
      const json& e = j.at("tolerances").at("eps_fix");
      if (!e.is_number()) fail("config: tolerances.eps_fix must be a number");
      c.eps_fix = e.get<double>();
      if (!(c.eps_fix > 0.0 && c.eps_fix <= 1e-4)) fail("config: eps_fix must lie in (0, 1e-4]");
    }
  }
  c.seed = get_u64(j, "seed", 0);
  c.n_max = get_int(j, "n_max", c.n_max);
  if (c.n_max < 1) fail("config: n_max must be >= 1");
  if (j.contains("p_list")) {
    if (!j.at("p_list").is_array()) fail("config: p_list must be an array");
    for (const json& p : j.at("p_list")) c.p_list.push_back(exponent_from_json(p));
  }
  c.restarts = get_int(j, "restarts", c.restarts);
  if (c.restarts < 0) fail("config: restarts must be >= 0");
  c.num_instances = get_int(j, "num_instances", c.num_instances);
  if (c.num_instances < 1) fail("config: num_instances must be >= 1");
  c.fuzz = object_or(j, "fuzz", json::object());
  return c;
}

ConfiguredInstance build_instance(const ExperimentConfig& cfg, int index) {
  if (cfg.dim < 1) fail("config: missing algebra.dim");
  if (cfg.channel.empty()) fail("config: missing \"channel\"");
  const std::uint64_t offset = cfg.seed + static_cast<std::uint64_t>(index);
  const TracialAlgebra alg(cfg.dim);
  json ref_spec = shift_seed(cfg.reference, offset);
  json ch_spec = shift_seed(cfg.channel, offset);
  json st_spec = shift_seed(cfg.state, offset);
  Reference b = reference_from_json(ref_spec, alg, cfg.tol);
  Superoperator phi = channel_from_json(ch_spec, alg);
  State a = state_from_json(st_spec, alg, b, cfg.tol);
  const ChannelChecks checks = phi.cached_checks() ? *phi.cached_checks() : verify(phi, cfg.tol);
  if (!checks.is_cp || !checks.is_tp || !checks.is_strict) {
    fail(std::string("config: channel must be strict CPTP (cp=") + (checks.is_cp ? "1" : "0") +
         ", tp=" + (checks.is_tp ? "1" : "0") + ", strict=" + (checks.is_strict ? "1" : "0") + ")");
  }
  json resolved{{"algebra", {{"dim", cfg.dim}}},
                {"reference", std::move(ref_spec)},
                {"channel", std::move(ch_spec)},
                {"state", std::move(st_spec)}};
  return {std::move(phi), std::move(b), std::move(a), std::move(resolved)};
}

CommandResult run_command(const std::string& command, const json& config,
                          std::optional<std::uint64_t> seed_override) {
  try {
    ExperimentConfig cfg = parse_config(config);
    if (seed_override) cfg.seed = *seed_override;
    if (command == "analyze") return cmd_analyze(cfg);
    if (command == "iterate") return cmd_iterate(cfg);
    if (command == "decompose") return cmd_decompose(cfg);
    if (command == "dpi") return cmd_dpi(cfg);
    if (command == "bound") return cmd_bound(cfg);
    if (command == "fuzz") return cmd_fuzz(cfg);
    if (command == "probe-l1") return cmd_probe_l1(cfg);
    return {ExitCode::kConfigError, {}, "unknown command \"" + command + "\""};
  } catch (const ConfigError& e) {
    return {ExitCode::kConfigError, {}, e.what()};
  } catch (const InvalidArgument& e) {
    return {ExitCode::kConfigError, {}, e.what()};
  } catch (const NumericalError& e) {
    return {ExitCode::kNumericalError, {}, e.what()};
  } catch (const json::exception& e) {
    return {ExitCode::kConfigError, {}, std::string("config: ") + e.what()};
  } catch (const std::exception& e) {
    return {ExitCode::kNumericalError, {}, e.what()};
  }
}

CommandResult run_command(const std::string& command, const std::string& config_text,
                          std::optional<std::uint64_t> seed_override) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const json::parse_error& e) {
    return {ExitCode::kConfigError, {}, std::string("config: ") + e.what()};
  }
  return run_command(command, j, seed_override);
}

}  // namespace petz
