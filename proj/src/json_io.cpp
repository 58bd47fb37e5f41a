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

#include "petz/json_io.hpp"

#include <string>

namespace petz {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& field(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    fail(std::string(context) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const char* key, const char* context) {
  const json& v = field(j, key, context);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    fail(std::string(context) + ": field \"" + key + "\" has the wrong type");
  }
}

std::uint64_t get_seed(const json& j, const char* context) {
  const json& v = field(j, "seed", context);
  if (!v.is_number_integer()) fail(std::string(context) + ": seed must be an integer");
  return v.is_number_unsigned() ? v.get<std::uint64_t>()
                                : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

std::vector<Matrix> matrices_from_json(const json& j, const char* context) {
  if (!j.is_array()) fail(std::string(context) + ": expected an array of matrices");
  std::vector<Matrix> out;
  for (const json& m : j) out.push_back(matrix_from_json(m));
  return out;
}

// Library precondition failures inside constructors are configuration errors
// from the CLI's point of view.
template <typename F>
auto as_config(const char* context, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    fail(std::string(context) + ": " + e.what());
  }
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ir.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re")) fail("matrix: expected {\"re\": [[...]], \"im\": [[...]]}");
  const json& re = j.at("re");
  if (!re.is_array() || re.empty() || !re[0].is_array()) fail("matrix: \"re\" must be a 2-D array");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re[0].size());
  const bool has_im = j.contains("im");
  const json& im = has_im ? j.at("im") : re;
  if (has_im && (!im.is_array() || static_cast<Eigen::Index>(im.size()) != rows)) {
    fail("matrix: \"im\" must have the same shape as \"re\"");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& rr = re[i];
    const json& ir = im[i];
    if (!rr.is_array() || static_cast<Eigen::Index>(rr.size()) != cols || !ir.is_array() ||
        static_cast<Eigen::Index>(ir.size()) != cols) {
      fail("matrix: ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!rr[k].is_number() || (has_im && !ir[k].is_number())) fail("matrix: non-numeric entry");
      m(i, k) = complex(rr[k].get<double>(), has_im ? ir[k].get<double>() : 0.0);
    }
  }
  return m;
}

double exponent_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    fail("exponent: unrecognized string \"" + s + "\"");
  }
  if (!j.is_number()) fail("exponent: expected a number or \"inf\"");
  const double p = j.get<double>();
  if (!(p >= 1.0)) fail("exponent: p must satisfy p >= 1");
  return p;
}

json exponent_to_json(double p) {
  if (p == kInf) return "inf";
  return p;
}

Superoperator channel_from_json(const json& j, TracialAlgebra source) {
  const auto kind = get_as<std::string>(j, "kind", "channel");
  if (kind == "identity") return Superoperator::identity(source).verified();
  if (kind == "pinching") {
    const auto blocks = get_as<std::vector<int>>(j, "blocks", "channel");
    return as_config("channel", [&] { return pinching(source, blocks); });
  }
  if (kind == "conditional_expectation_diag") return conditional_expectation_diag(source);
  if (kind == "mixed_unitary") {
    const auto weights = get_as<std::vector<double>>(j, "weights", "channel");
    const auto unitaries = matrices_from_json(field(j, "unitaries", "channel"), "channel");
    return as_config("channel", [&] { return mixed_unitary(source, weights, unitaries); });
  }
  if (kind == "kraus") {
    KrausSpec spec{matrices_from_json(field(j, "operators", "channel"), "channel")};
    if (spec.operators.empty()) fail("channel: empty Kraus list");
    const auto m = static_cast<int>(spec.operators.front().rows());
    return as_config("channel", [&] { return from_kraus(spec, source, TracialAlgebra(m)); });
  }
  if (kind == "random") {
    const int m = get_as<int>(j, "target_dim", "channel");
    const int rank = get_as<int>(j, "rank", "channel");
    const std::uint64_t seed = get_seed(j, "channel");
    return as_config("channel", [&] { return random_channel(source, m, rank, seed); });
  }
  if (kind == "depolarizing_like") {
    const double lambda = get_as<double>(j, "lambda", "channel");
    return as_config("channel", [&] { return depolarizing_like(source, lambda); });
  }
  fail("channel: unknown kind \"" + kind + "\"");
}

Reference reference_from_json(const json& j, TracialAlgebra algebra, const Tolerances& tol) {
  const auto kind = get_as<std::string>(j, "kind", "reference");
  if (kind == "identity") return Reference::identity(algebra);
  if (kind == "explicit") {
    const Matrix m = matrix_from_json(field(j, "matrix", "reference"));
    return as_config("reference", [&] { return Reference(Element(algebra, m), tol); });
  }
  if (kind == "random") {
    const std::uint64_t seed = get_seed(j, "reference");
    const double cap = j.contains("cond_cap") ? get_as<double>(j, "cond_cap", "reference") : 100.0;
    return as_config("reference", [&] { return random_reference(algebra, seed, cap); });
  }
  fail("reference: unknown kind \"" + kind + "\"");
}

State state_from_json(const json& j, TracialAlgebra algebra, const Reference& b,
                      const Tolerances& tol) {
  const auto kind = get_as<std::string>(j, "kind", "state");
  if (kind == "reference") return b.state();
  if (kind == "explicit") {
    const Matrix m = matrix_from_json(field(j, "matrix", "state"));
    return as_config("state", [&] { return State(Element(algebra, m), tol); });
  }
  if (kind == "random") return random_state(algebra, get_seed(j, "state"));
  fail("state: unknown kind \"" + kind + "\"");
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances tol;
  if (j.is_null()) return tol;
  if (!j.is_object()) fail("tolerances: expected an object");
  auto read = [&](const char* key, double& out) {
    if (j.contains(key)) {
      out = get_as<double>(j, key, "tolerances");
      if (!(out > 0.0)) fail(std::string("tolerances: ") + key + " must be positive");
    }
  };
  read("tol_herm", tol.herm);
  read("tol_trace", tol.trace);
  read("tol_psd", tol.psd);
  read("tol_pd", tol.pd);
  read("tol_cp", tol.cp);
  return tol;
}

json to_json(const PetzAnalysis& analysis) {
  return json{{"delta", analysis.delta},
              {"fixed_dim", analysis.fixed_dim},
              {"spectrum", analysis.spectrum},
              {"psi", matrix_to_json(analysis.psi.matrix())},
              {"warnings", analysis.warnings}};
}

json to_json(const BoundReport& r) {
  return json{{"lhs", r.lhs},
              {"mid", r.mid},
              {"rhs", r.rhs},
              {"slack_lower", r.slack_lower},
              {"slack_upper", r.slack_upper},
              {"holds_lower", r.holds_lower},
              {"holds_upper", r.holds_upper}};
}

json to_json(const InstanceSpec& spec) {
  json ps = json::array();
  for (double p : spec.p_list) ps.push_back(exponent_to_json(p));
  return json{{"seed", spec.seed},         {"dim", spec.dim},   {"target_dim", spec.target_dim},
              {"kind", spec.kind},         {"rank", spec.rank}, {"cond_cap", spec.cond_cap},
              {"p_list", std::move(ps)},   {"n_max", spec.n_max}};
}

InstanceSpec instance_spec_from_json(const json& j) {
  if (!j.is_object()) fail("instance spec: expected an object");
  InstanceSpec s;
  if (j.contains("seed")) s.seed = get_seed(j, "instance spec");
  if (j.contains("dim")) s.dim = get_as<int>(j, "dim", "instance spec");
  s.target_dim = j.contains("target_dim") ? get_as<int>(j, "target_dim", "instance spec") : s.dim;
  if (j.contains("kind")) s.kind = get_as<std::string>(j, "kind", "instance spec");
  if (j.contains("rank")) s.rank = get_as<int>(j, "rank", "instance spec");
  if (j.contains("cond_cap")) s.cond_cap = get_as<double>(j, "cond_cap", "instance spec");
  if (j.contains("n_max")) s.n_max = get_as<int>(j, "n_max", "instance spec");
  if (j.contains("p_list")) {
    const json& ps = j.at("p_list");
    if (!ps.is_array()) fail("instance spec: p_list must be an array");
    s.p_list.clear();
    for (const json& p : ps) s.p_list.push_back(exponent_from_json(p));
  }
  return s;
}

json to_json(const SuiteReport& report) {
  json props = json::array();
  for (const PropertyReport& p : report.properties) {
    json ces = json::array();
    for (const InstanceSpec& s : p.counterexamples) ces.push_back(to_json(s));
    json entry{{"name", p.name},
               {"pass", p.pass},
               {"fail", p.fail},
               {"worst_slack", p.worst_slack ? json(*p.worst_slack) : json(nullptr)},
               {"counterexamples", std::move(ces)}};
    if (p.informational) entry["informational"] = true;
    if (!p.details.empty()) entry["details"] = p.details;
    props.push_back(std::move(entry));
  }
  json rejected = json::array();
  for (const Rejection& r : report.rejected) {
    rejected.push_back(json{{"spec", to_json(r.spec)}, {"reason", r.reason}});
  }
  return json{{"properties", std::move(props)}, {"rejected", std::move(rejected)}};
}

}  // namespace petz
