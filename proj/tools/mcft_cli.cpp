#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mcft/serialize.hpp"
#include "mcft/suites.hpp"

namespace {

std::string csv_path_for(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".csv";
  return out + ".csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated vertex-algebra / Wightman CFT verification driver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "build a model and run verification suites");
  std::string config_path, suite, model, c_str, out;
  int max_weight = 0, band = 0;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "JSON config file mirroring the run options");
  auto* o_suite = run->add_option("--suite", suite,
                                  "axioms | gram | roundtrip | correlators | reeh_schlieder | all");
  auto* o_model = run->add_option("--model", model, "heisenberg | virasoro");
  auto* o_c = run->add_option("--c", c_str, "central charge as a rational literal");
  auto* o_n = run->add_option("--max-weight", max_weight, "truncation weight N");
  auto* o_band = run->add_option("--band", band, "test-function band M");
  auto* o_seed = run->add_option("--seed", seed, "seed for the randomized grids");
  auto* o_out = run->add_option("--out", out, "report path (JSON; correlator CSV alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    mcft::Json jc = mcft::Json::object();
    if (!config_path.empty()) {
      std::string text;
      try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw mcft::ConfigError("cannot open config file: " + config_path);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
      } catch (const mcft::ConfigError&) {
        throw;
      }
      try {
        jc = mcft::json_from_string(text);
      } catch (const std::exception& e) {
        throw mcft::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    mcft::RunConfig cfg = mcft::config_from_json(jc);
    if (o_suite->count()) cfg.suite = suite;
    if (o_model->count()) cfg.model = model;
    if (o_c->count()) cfg.c = c_str;
    if (o_n->count()) cfg.max_weight = max_weight;
    if (o_band->count()) cfg.band = band;
    if (o_seed->count()) cfg.seed = seed;
    if (o_out->count()) cfg.out = out;
    mcft::validate_config(cfg);

    const mcft::Model m = mcft::build_from_config(cfg);
    const mcft::SuiteReport rep = mcft::run_suites(m, cfg);
    const mcft::Json rj = mcft::report_to_json(m, cfg, rep);
    const std::string text = mcft::json_to_string(rj);
    if (!cfg.out.empty()) {
      mcft::write_text_file(cfg.out, text);
      if (!rep.correlators.empty())
        mcft::write_text_file(csv_path_for(cfg.out), mcft::correlator_csv(rep.correlators));
      std::cout << "report written to " << cfg.out << "\n";
    } else {
      std::cout << text;
    }
    std::cout << "checks: " << rep.passed << " passed, " << rep.failed << " failed, "
              << rep.inconclusive << " inconclusive\n";
    return rep.pass() ? 0 : 1;
  } catch (const mcft::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
