#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arrham/io.hpp"

namespace arrham {

struct VerifyOptions {
  uint64_t seed = 0;
  double tol_newton = 1e-12;
  double tol_verify = 1e-8;
};

// One verification check.  `tag` names the mathematical fact being tested
// so a failure line points at the claim that broke.
struct CheckResult {
  std::string suite;
  std::string name;
  std::string tag;
  bool pass = false;
  std::string detail;
};

// Built-in property battery over the bundled model problems.
// which: "good" | "bad" | "gaudin" | "all".
std::vector<CheckResult> run_builtin_suite(const std::string& which, const VerifyOptions& opt);

// Verification battery for one arrangement file (good or bad fiber).
std::vector<CheckResult> run_arrangement_checks(const ArrangementFile& file,
                                                const VerifyOptions& opt);

// Full pipeline report for a rank-1 Gaudin preset.
std::vector<CheckResult> run_gaudin_checks(const GaudinPreset& preset, const VerifyOptions& opt);

Json checks_to_json(const std::vector<CheckResult>& checks, const VerifyOptions& opt);
bool all_pass(const std::vector<CheckResult>& checks);

// Deterministic random families used by the built-in battery (exposed for
// the acceptance suite).
ArrangementFamily random_family(Rng& rng, int k, int n, bool positive_weights);
RatVec random_good_fiber(Rng& rng, const ArrangementFamily& fam,
                         const std::vector<Circuit>& circuits);

}  // namespace arrham
