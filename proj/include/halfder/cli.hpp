#pragma once

// Command-line front end. Every command produces a Report whose canonical part is
// byte-deterministic for a fixed configuration; wall-clock timing lives apart from it.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "halfder/algebra.hpp"

namespace halfder {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string command;     // jacobi | solve | verify | relations | tpa-verify | tpa-example | tpa-probe
  std::string algebra;     // variant name
  std::string q = "2";     // generic variants
  int t = 3;               // root variants
  int window = 4;
  int interior = -1;       // -1: max(1, N - 2)
  int shifts = -1;         // -1: t for root variants, 2 otherwise
  std::string format = "json";
  std::string out;
  std::optional<long long> expect_dim;
  bool emit_basis = false;

  // verify
  std::string candidate;   // identity | thmF | thmH | torus-generic
  std::string a = "1", c = "0", d = "0", kappa = "1";
  std::string shift = "0,0";
  std::string center = "1";                // constant value on Gamma1
  std::vector<std::string> center_at;      // "m1,m2=value" overrides

  // tpa
  std::string product;                     // JSON file for tpa verify
  std::vector<std::string> tau;            // "m1,m2=value"
  std::string v = "0,3";
};

struct Report {
  nlohmann::json canonical;  // tool, toolVersion, command, config, results, violations
  double wall_clock_ms = 0;
  int exit_code = 0;
  std::vector<std::vector<std::string>> csv;  // header row first
};

/// Builds the algebra selected by the config; throws ConfigError on invalid combinations.
AlgebraSpec make_spec(const RunConfig& cfg);

Report cmd_jacobi(const RunConfig& cfg);
Report cmd_solve(const RunConfig& cfg);
Report cmd_verify(const RunConfig& cfg);
Report cmd_relations(const RunConfig& cfg);
Report cmd_tpa(const RunConfig& cfg);
/// Dispatches on cfg.command and fills in the timing.
Report run(const RunConfig& cfg);

/// Canonical JSON text (no timing section).
std::string canonical_dump(const Report& r);
/// Full output in the configured format.
std::string render(const Report& r, const std::string& format);

/// Entry point: parses argv, runs, writes the report. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfder
