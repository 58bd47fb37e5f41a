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

// petzlab command line front end. Talks to the library only through petzlab.h.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "petzlab.h"

namespace {

bool read_config(const std::string& path, std::string& text) {
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return static_cast<bool>(in) || in.eof();
}

struct Options {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the Petz recovery map on matrix algebras"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(petz_version()));

  Options opts;
  const char* commands[][2] = {
      {"analyze", "Fixed-point analysis of R o phi as JSON"},
      {"iterate", "Distances of the iterates to the limit as CSV"},
      {"decompose", "Split a state into recoverable and decaying parts"},
      {"dpi", "Data processing gaps of the sandwiched entropies"},
      {"bound", "Fidelity and trace-norm recoverability chain"},
      {"fuzz", "Randomized property suite"},
      {"probe-l1", "Lower bounds on the L1 distance to the limit map"},
  };
  CLI::Option* seed_opts[std::size(commands)] = {};
  std::size_t k = 0;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", opts.config, "Config JSON file, or - for stdin")->required();
    seed_opts[k++] = sub->add_option("--seed", opts.seed, "Seed offset added to every component seed");
    sub->add_option("--out", opts.out, "Write output here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : PETZ_CONFIG_ERROR;
  }

  CLI::App* sub = app.get_subcommands().front();
  bool has_seed = false;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    if (sub->get_name() == commands[i][0]) has_seed = seed_opts[i]->count() > 0;
  }

  std::string text;
  if (!read_config(opts.config, text)) {
    std::cerr << "petzlab: cannot read config " << opts.config << "\n";
    return PETZ_CONFIG_ERROR;
  }

  char* output = nullptr;
  char* error = nullptr;
  const int code =
      petz_run_command(sub->get_name().c_str(), text.c_str(), has_seed ? 1 : 0, opts.seed, &output, &error);
  if (error && *error) std::cerr << "petzlab: " << error << "\n";
  int status = code;
  if (output && *output) {
    if (opts.out.empty()) {
      std::cout << output;
    } else {
      std::ofstream f(opts.out, std::ios::binary);
      f << output;
      if (!f) {
        std::cerr << "petzlab: cannot write " << opts.out << "\n";
        status = PETZ_CONFIG_ERROR;
      }
    }
  }
  petz_string_free(output);
  petz_string_free(error);
  return status;
}
