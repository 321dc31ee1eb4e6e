#ifndef MCFT_SUITES_HPP
#define MCFT_SUITES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcft/serialize.hpp"
#include "mcft/vertex.hpp"

namespace mcft {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "heisenberg";  // heisenberg | virasoro
  std::string c = "1/2";             // rational string, virasoro only
  bool simple = false;               // virasoro only: quotient by the form radical
  int max_weight = 8;
  int band = 16;
  int margin = -1;  // -1 selects the model default (max generator dim + 2)
  double float_tol = 1e-10;
  double cov_tol = 1e-6;
  double group_tol = 1e-8;
  std::string suite = "all";  // axioms | gram | roundtrip | correlators | reeh_schlieder | all
  std::string out;            // report path; empty writes to stdout only
  std::uint64_t seed = 1;
};

// Strict parse: unknown keys are config errors so typos cannot silently fall back to
// defaults. Both throw ConfigError.
RunConfig config_from_json(const Json& j);
void validate_config(const RunConfig& cfg);

Model build_from_config(const RunConfig& cfg);

enum class CheckStatus { pass, fail, inconclusive };

struct CheckResult {
  std::string name;
  std::string anchor;  // axiom label the check instantiates
  CheckStatus status = CheckStatus::pass;
  double deviation = 0.0;
  int window = -1;
  Json params = Json::object();
  double runtime_ms = 0.0;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::vector<CorrelatorRow> correlators;  // filled by the correlators suite
  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
  bool pass() const { return failed == 0; }
};

// Runs the configured suite selection; check order is fixed so identical config and
// seed give identical reports (runtimes aside).
SuiteReport run_suites(const Model& m, const RunConfig& cfg);

Json report_to_json(const Model& m, const RunConfig& cfg, const SuiteReport& r);

}  // namespace mcft

#endif
