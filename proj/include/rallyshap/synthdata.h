#ifndef RALLYSHAP_SYNTHDATA_H_
#define RALLYSHAP_SYNTHDATA_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "rallyshap/forecast.h"
#include "rallyshap/losses.h"
#include "rallyshap/rally.h"

namespace rallyshap {

struct GeneratorConfig {
  int n_rallies = 1000;
  int n_players = 10;
  // Weight of the previous-stroke kernel against the current player's style.
  double lambda = 0.0;
  // Per-stroke stop probability from stroke 2 onwards.
  double termination_prob = 0.1;
  int max_len = kMaxRallyLength;
  uint64_t seed = 0;
  double short_serve_prob = 0.5;
  // Symmetric Dirichlet concentration of the player shot preferences.
  double concentration = 1.0;

  // Throws ContractViolation naming the first bad field.
  void Validate() const;
};

// Serve landing bands (depth, in the receiver's half).
inline constexpr double kShortServeMaxY = 0.35;
inline constexpr double kLongServeMinY = 0.75;

// Previous-stroke dependence used by the generator: the next shot type is
// drawn from a row of `next_shot` chosen by the previous shot, and the
// landing spot answers the previous landing spot.
struct MarkovKernel {
  std::array<ShotDistribution, kNumShotTypes> next_shot;
  double sigma = 0.08;

  AreaDistribution NextArea(const Stroke& previous) const;
};

struct SyntheticWorld {
  GeneratorConfig config;
  StyleRegistry players;
  MarkovKernel kernel;
};

StyleRegistry GeneratePlayers(const GeneratorConfig& config);
MarkovKernel GenerateKernel(const GeneratorConfig& config);
SyntheticWorld MakeWorld(const GeneratorConfig& config);

std::string PlayerName(int index);

// Stroke i >= 2 comes from the kernel with probability lambda and from the
// current player's style otherwise.
Rally GenerateRally(const SyntheticWorld& world, std::string_view player_a,
                    std::string_view player_b, std::string rally_id,
                    uint64_t rally_seed);

Dataset GenerateDataset(const SyntheticWorld& world, int threads = 1);
Dataset GenerateDataset(const GeneratorConfig& config, int threads = 1);

// Seeded split by whole rallies; each side keeps the input order.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset, double ratio,
                                         uint64_t seed);

// ---------------------------------------------------------------------------
// CSV files: optional "# frame=<name>" line, then the header
//   rally_id,stroke_no,player_id,role,shot_type,landing_x,landing_y
// and one row per stroke. Coordinates are written with 17 significant digits.

enum class CoordinateFrame {
  kOpponentHalf,  // canonical: x in [-0.5, 0.5], y in [0, 1]
  kMeters,        // metres from the centre line / from the net
};

inline constexpr double kSinglesCourtWidthMeters = 5.18;
inline constexpr double kHalfCourtDepthMeters = 6.70;

std::string_view FrameName(CoordinateFrame frame);
std::optional<CoordinateFrame> ParseFrame(std::string_view name);

std::string FormatCsv(const Dataset& dataset);
// Parses CSV text; errors name the offending line or rally.
Dataset ParseCsv(std::string_view text);

void SaveCsv(const Dataset& dataset, const std::string& path);
Dataset LoadCsv(const std::string& path);

// Sidecar document describing how a dataset file was produced.
std::string GeneratorMetadata(const GeneratorConfig& config);

}  // namespace rallyshap

#endif  // RALLYSHAP_SYNTHDATA_H_
