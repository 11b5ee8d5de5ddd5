// Copyright 2026 The hypvol Authors
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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hypvol/predict.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Arithmeticity, volume prediction and volume of hyperbolic Coxeter polytopes"};
  app.require_subcommand(1);

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a Coxeter diagram file");
  std::string path;
  hypvol::AnalysisOptions options;
  std::string assume_volume, assume_error;
  bool json = false, text = false, no_integrate = false;
  analyze->add_option("diagram-file", path, "Diagram file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--precision", options.precision_bits, "Working precision in bits")
      ->capture_default_str()
      ->check(CLI::Range(64u, 8192u));
  analyze->add_option("--target-err", options.target_rel_error, "Relative error target of the volume")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--seed", options.seed, "Sampler seed")->capture_default_str();
  analyze->add_option("--max-samples", options.max_samples, "Density evaluation cap")->capture_default_str();
  analyze->add_option("--threads", options.threads, "Worker threads (0: all cores)")->capture_default_str();
  auto* av = analyze->add_option("--assume-volume", assume_volume,
                                 "Externally computed volume (decimal) used for recognition");
  analyze->add_option("--assume-err", assume_error, "Absolute error of --assume-volume")->needs(av);
  analyze->add_option("--smooth-primes", options.smooth_bound,
                      "Largest prime in the fallback denominator search (0: off, -1: n + 2)")
      ->capture_default_str();
  analyze->add_flag("--no-integrate", no_integrate, "Skip the volume integration");
  analyze->add_flag("--dump-geometry", options.dump_geometry, "Include vertices and triangulation in JSON");
  auto* jf = analyze->add_flag("--json", json, "JSON report");
  analyze->add_flag("--text", text, "Text report (default)")->excludes(jf);

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return 2;
  }
  if (!assume_volume.empty()) options.assume_volume = assume_volume;
  if (!assume_error.empty()) options.assume_error = assume_error;
  options.integrate = !no_integrate;

  const hypvol::AnalysisReport report = hypvol::Analyze(buffer.str(), options);
  if (json) std::cout << report.ToJson().dump(2) << "\n";
  else std::cout << report.ToText();
  return report.ExitCode();
}
