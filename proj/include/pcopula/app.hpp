#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pcopula/error.hpp"
#include "pcopula/measures.hpp"
#include "pcopula/pair_copula.hpp"
#include "pcopula/partial.hpp"
#include "pcopula/sampler.hpp"

namespace pcop {

inline constexpr const char* kArtifactVersion = "0.3.0";

/// Bad flags, unknown names, malformed config files. Exit status 2.
struct UsageError : InputError {
  using InputError::InputError;
};

struct RunConfig {
  std::string command;
  std::string scenario;   // "7", "11c"; empty = every scenario (sweep)
  std::string family;     // empty = every family of the scenario
  std::string params;     // theta function for eval, e.g. "const:2"
  int rotation = 0;       // eval only
  std::size_t n = 5000;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = ".";
  GridSpec grid;
  int workers = 0;        // 0 = OpenMP default
  std::vector<double> sigma;  // pitfall; empty = 0.1, 0.5, 1, 2
  std::string mutate;     // verify dev hook: "" | "gumbel-h2"
  std::string only;       // verify: run checks whose name starts with this
};

/// key = value lines, '#' comments. Keys are the RunConfig field names;
/// grid is "kdd=201,zoom=21,qpd=101,z=257", sigma a comma list.
void apply_config_text(const std::string& text, RunConfig& cfg);
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Every field with defaults materialized, one key=value per line.
std::string materialize(const RunConfig& cfg);

std::vector<double> default_sigmas();

/// One simulated scenario with its sample statistics.
struct ScenarioRun {
  ScenarioConfig config;
  SampleTriples samples;
  PseudoPairs pseudo;
  DependenceSummary marginal;
  DependenceSummary partial;
};

ScenarioRun run_scenario(const ScenarioConfig& config);

/// Configs of scenario_table matching a scenario id and optional family.
std::vector<ScenarioConfig> select_scenarios(const RunConfig& cfg);

/// Conditional families used by the certificate sweep (every family, every
/// theta kind).
std::vector<std::pair<std::string, ConditionalFamily>> verify_configs();

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};
std::string format_check(const CheckResult& c);

struct VerifyOptions {
  std::string only;
  std::size_t n = 5000;
  std::uint64_t seed = 42;
  GridSpec grid;
};

/// The invariant suite. Failing checks are returned, never thrown.
std::vector<CheckResult> run_verify(const VerifyOptions& opts, std::ostream* progress = nullptr);

/// Commands return the process exit status: 0 clean, 1 when FAIL or error
/// rows were produced. UsageError propagates to the caller.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_eval(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_pitfall(const RunConfig& cfg, std::ostream& log);

int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace pcop
