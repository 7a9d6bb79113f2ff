#ifndef RALLYSHAP_CLI_H_
#define RALLYSHAP_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rallyshap/forecast.h"
#include "rallyshap/losses.h"
#include "rallyshap/rally.h"

namespace rallyshap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;

// Prefix of the environment variables mirroring the command-line flags,
// e.g. RALLYSHAP_SEED for --seed.
inline constexpr const char* kEnvPrefix = "RALLYSHAP_";

// Runs the command line `args` (args[0] is the program name) and returns the
// process exit code. Human-readable output goes to `out`, diagnostics and
// progress to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

enum class AblationTarget { kPlayer, kPast };

struct AblationRow {
  int tau = 0;
  Metrics original;
  Metrics ablated;
  Metrics difference;  // original - ablated
  Metrics noise;       // half-width of the bootstrap CI of `original`
};

struct AblationOptions {
  std::string kind = "style";  // style | markov | blend
  double alpha = 1.0;
  int bins = 3;
  double lambda = 0.5;
  int k = 10;
  uint64_t seed = 0;
  int resamples = 1000;
  int threads = 1;
};

// Fits on the original and on the imputed training rallies (|R| > tau) and
// evaluates both on the untouched test set. The player target averages the
// A-removed and B-removed retrainings.
AblationRow RunAblation(const Dataset& train, const Dataset& test, int tau,
                        AblationTarget target, const AblationOptions& options);

std::shared_ptr<const Forecaster> FitForecaster(
    const std::string& kind, std::span<const Rally> inputs,
    std::span<const Rally> targets, double alpha, int bins, double lambda);

}  // namespace rallyshap

#endif  // RALLYSHAP_CLI_H_
