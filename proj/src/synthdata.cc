#include "rallyshap/synthdata.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "rallyshap/error.h"
#include "rallyshap/parallel.h"
#include "rallyshap/random.h"

namespace rallyshap {

namespace {

// Stream tags.
constexpr uint64_t kPlayersStream = 1;
constexpr uint64_t kKernelStream = 2;
constexpr uint64_t kRallyStream = 3;
constexpr uint64_t kSplitStream = 4;

constexpr double kKernelConcentration = 0.3;

// Typical landing depth per shot type.
constexpr std::array<double, kNumShotTypes> kShotDepth = {
    0.85, 0.15, 0.55, 0.45, 0.25, 0.50, 0.85, 0.60, 0.20, 0.85};

ShotDistribution Dirichlet(StreamRng& rng, double concentration) {
  ShotDistribution d;
  double sum = 0.0;
  for (double& p : d.probs) {
    p = rng.Gamma(concentration);
    sum += p;
  }
  if (sum <= 0.0) return ShotDistribution::Uniform();
  for (double& p : d.probs) p /= sum;
  // Push the rounding residue into the largest entry.
  double total = 0.0;
  for (const double p : d.probs) total += p;
  d.probs[ShotCode(d.Argmax())] += 1.0 - total;
  return d;
}

Coord DrawArea(StreamRng& rng, const AreaDistribution& g) {
  const double z1 = rng.Normal();
  const double z2 = rng.Normal();
  return ClampToCourt(
      {g.mu_x + g.sigma_x * z1,
       g.mu_y + g.sigma_y * (g.rho * z1 + std::sqrt(1.0 - g.rho * g.rho) * z2)});
}

const PlayerStyle& StyleOf(const SyntheticWorld& world, std::string_view id) {
  const auto it = world.players.find(id);
  Require(it != world.players.end(),
          fmt::format("GenerateRally: unknown player '{}'", id));
  return it->second;
}

}  // namespace

void GeneratorConfig::Validate() const {
  Require(n_rallies >= 0, "generator: n_rallies must be >= 0");
  Require(n_players >= 2, "generator: n_players must be >= 2");
  Require(lambda >= 0.0 && lambda <= 1.0, "generator: lambda outside [0, 1]");
  Require(termination_prob > 0.0 && termination_prob <= 1.0,
          "generator: termination_prob outside (0, 1]");
  Require(max_len >= 2 && max_len <= kMaxRallyLength,
          fmt::format("generator: max_len outside [2, {}]", kMaxRallyLength));
  Require(short_serve_prob >= 0.0 && short_serve_prob <= 1.0,
          "generator: short_serve_prob outside [0, 1]");
  Require(concentration > 0.0 && std::isfinite(concentration),
          "generator: concentration must be positive and finite");
}

AreaDistribution MarkovKernel::NextArea(const Stroke& previous) const {
  // Cross-court, depth-inverting reply to the previous landing spot.
  return {-0.6 * previous.area.x, 0.9 - 0.7 * previous.area.y, sigma, sigma,
          0.0};
}

std::string PlayerName(int index) { return fmt::format("p{:02d}", index); }

StyleRegistry GeneratePlayers(const GeneratorConfig& config) {
  config.Validate();
  StyleRegistry players;
  for (int p = 0; p < config.n_players; ++p) {
    StreamRng rng(DeriveKey(config.seed, kPlayersStream, p));
    PlayerStyle style;
    style.preference = Dirichlet(rng, config.concentration);
    for (int s = 0; s < kNumShotTypes; ++s) {
      AreaDistribution& g = style.areas[s];
      g.mu_x = rng.Uniform(-0.35, 0.35);
      g.mu_y = std::clamp(kShotDepth[s] + rng.Uniform(-0.1, 0.1), 0.05, 0.95);
      g.sigma_x = rng.Uniform(0.05, 0.15);
      g.sigma_y = rng.Uniform(0.05, 0.15);
      g.rho = rng.Uniform(-0.3, 0.3);
    }
    players.emplace(PlayerName(p), std::move(style));
  }
  return players;
}

MarkovKernel GenerateKernel(const GeneratorConfig& config) {
  MarkovKernel kernel;
  for (int s = 0; s < kNumShotTypes; ++s) {
    StreamRng rng(DeriveKey(config.seed, kKernelStream, s));
    kernel.next_shot[s] = Dirichlet(rng, kKernelConcentration);
  }
  return kernel;
}

SyntheticWorld MakeWorld(const GeneratorConfig& config) {
  config.Validate();
  return {config, GeneratePlayers(config), GenerateKernel(config)};
}

Rally GenerateRally(const SyntheticWorld& world, std::string_view player_a,
                    std::string_view player_b, std::string rally_id,
                    uint64_t rally_seed) {
  const GeneratorConfig& config = world.config;
  const PlayerStyle& style_a = StyleOf(world, player_a);
  const PlayerStyle& style_b = StyleOf(world, player_b);
  StreamRng rng(rally_seed);

  Rally rally;
  rally.id = std::move(rally_id);
  rally.player_a = std::string(player_a);
  rally.player_b = std::string(player_b);

  Stroke serve;
  serve.role = PlayerRole::kA;
  serve.player_id = rally.player_a;
  const bool short_serve = rng.Uniform() < config.short_serve_prob;
  serve.shot = short_serve ? ShotType::kShortService : ShotType::kLongService;
  const bool left = rng.Uniform() < 0.5;
  serve.area.x = left ? rng.Uniform(kCourtMinX, 0.0) : rng.Uniform(0.0, kCourtMaxX);
  serve.area.y = short_serve ? rng.Uniform(kCourtMinY, kShortServeMaxY)
                             : rng.Uniform(kLongServeMinY, kCourtMaxY);
  rally.strokes.push_back(std::move(serve));

  for (int i = 2; i <= config.max_len; ++i) {
    const PlayerRole role = RoleAt(i);
    const PlayerStyle& style = role == PlayerRole::kA ? style_a : style_b;
    const Stroke& previous = rally.strokes.back();
    Stroke next;
    next.role = role;
    next.player_id = rally.PlayerId(role);
    if (rng.Uniform() < config.lambda) {
      next.shot = static_cast<ShotType>(
          rng.Categorical(world.kernel.next_shot[ShotCode(previous.shot)].probs));
      next.area = DrawArea(rng, world.kernel.NextArea(previous));
    } else {
      next.shot = static_cast<ShotType>(rng.Categorical(style.preference.probs));
      next.area = DrawArea(rng, style.areas[ShotCode(next.shot)]);
    }
    rally.strokes.push_back(std::move(next));
    if (rng.Uniform() < config.termination_prob) break;
  }
  return rally;
}

Dataset GenerateDataset(const SyntheticWorld& world, int threads) {
  const GeneratorConfig& config = world.config;
  Dataset out(config.n_rallies);
  ParallelFor(out.size(), threads, [&](size_t r) {
    const uint64_t rally_seed = DeriveKey(config.seed, kRallyStream, r);
    StreamRng pick(DeriveKey(rally_seed, 0));
    const auto a = static_cast<int>(pick.Below(config.n_players));
    auto b = static_cast<int>(pick.Below(config.n_players - 1));
    if (b >= a) ++b;
    out[r] = GenerateRally(world, PlayerName(a), PlayerName(b),
                           fmt::format("r{:06d}", r), rally_seed);
  });
  return out;
}

Dataset GenerateDataset(const GeneratorConfig& config, int threads) {
  return GenerateDataset(MakeWorld(config), threads);
}

std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset, double ratio,
                                         uint64_t seed) {
  Require(ratio > 0.0 && ratio < 1.0, "SplitDataset: ratio outside (0, 1)");
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  StreamRng rng(DeriveKey(seed, kSplitStream));
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  const auto n_first = static_cast<size_t>(
      std::llround(ratio * static_cast<double>(dataset.size())));
  std::vector<size_t> first(order.begin(), order.begin() + n_first);
  std::vector<size_t> second(order.begin() + n_first, order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  std::pair<Dataset, Dataset> out;
  for (const size_t i : first) out.first.push_back(dataset[i]);
  for (const size_t i : second) out.second.push_back(dataset[i]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kCsvHeader =
    "rally_id,stroke_no,player_id,role,shot_type,landing_x,landing_y";
constexpr std::string_view kFramePrefix = "# frame=";

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

Coord ToCanonical(CoordinateFrame frame, const Coord& raw) {
  switch (frame) {
    case CoordinateFrame::kOpponentHalf:
      return raw;
    case CoordinateFrame::kMeters:
      return {raw.x / kSinglesCourtWidthMeters, raw.y / kHalfCourtDepthMeters};
  }
  return raw;
}

void FinishRally(Rally& rally, int first_line) {
  if (rally.strokes.empty()) return;
  rally.player_a = rally.stroke(1).player_id;
  if (rally.size() >= 2) rally.player_b = rally.stroke(2).player_id;
  const ValidationReport report = ValidateRally(rally);
  if (!report.ok()) {
    throw ValidationError(fmt::format("rally '{}' (line {}): {}", rally.id,
                                      first_line, report.Summary()));
  }
  for (int i = 1; i <= rally.size(); ++i) {
    const Stroke& s = rally.stroke(i);
    if (s.player_id != rally.PlayerId(s.role)) {
      throw ValidationError(fmt::format(
          "rally '{}' (line {}): stroke {} by '{}' does not match role {}",
          rally.id, first_line, i, s.player_id, RoleName(s.role)));
    }
  }
  if (rally.player_a == rally.player_b) {
    throw ValidationError(fmt::format(
        "rally '{}' (line {}): both roles played by '{}'", rally.id,
        first_line, rally.player_a));
  }
}

}  // namespace

std::string_view FrameName(CoordinateFrame frame) {
  return frame == CoordinateFrame::kOpponentHalf ? "opponent_half" : "meters";
}

std::optional<CoordinateFrame> ParseFrame(std::string_view name) {
  if (name == "opponent_half") return CoordinateFrame::kOpponentHalf;
  if (name == "meters") return CoordinateFrame::kMeters;
  return std::nullopt;
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  out += kFramePrefix;
  out += FrameName(CoordinateFrame::kOpponentHalf);
  out += '\n';
  out += kCsvHeader;
  out += '\n';
  for (const Rally& rally : dataset) {
    for (int i = 1; i <= rally.size(); ++i) {
      const Stroke& s = rally.stroke(i);
      out += fmt::format("{},{},{},{},{},{:.17g},{:.17g}\n", rally.id, i,
                         s.player_id, RoleName(s.role), ShotTypeName(s.shot),
                         s.area.x, s.area.y);
    }
  }
  return out;
}

Dataset ParseCsv(std::string_view text) {
  Dataset out;
  CoordinateFrame frame = CoordinateFrame::kOpponentHalf;
  bool header_seen = false;
  std::set<std::string, std::less<>> finished_ids;
  Rally current;
  int current_line = 0;
  int line_no = 0;

  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line.starts_with(kFramePrefix)) {
        const auto parsed = ParseFrame(line.substr(kFramePrefix.size()));
        if (!parsed) {
          throw ValidationError(
              fmt::format("line {}: unknown coordinate frame", line_no));
        }
        frame = *parsed;
        continue;
      }
      if (line != kCsvHeader) {
        throw ValidationError(fmt::format(
            "line {}: expected header '{}'", line_no, kCsvHeader));
      }
      header_seen = true;
      continue;
    }

    const auto fields = SplitFields(line);
    if (fields.size() != 7) {
      throw ValidationError(fmt::format("line {}: expected 7 fields, got {}",
                                        line_no, fields.size()));
    }
    const std::string_view rally_id = fields[0];
    int stroke_no = 0;
    Coord raw;
    if (rally_id.empty()) {
      throw ValidationError(fmt::format("line {}: empty rally_id", line_no));
    }
    if (!ParseNumber(fields[1], stroke_no)) {
      throw ValidationError(fmt::format("line {}: bad stroke_no '{}'", line_no,
                                        fields[1]));
    }
    const auto role = ParseRole(fields[3]);
    if (!role) {
      throw ValidationError(
          fmt::format("line {}: bad role '{}'", line_no, fields[3]));
    }
    const auto shot = ParseShotType(fields[4]);
    if (!shot) {
      throw ValidationError(fmt::format("line {}: unknown shot type '{}'",
                                        line_no, fields[4]));
    }
    if (!ParseNumber(fields[5], raw.x) || !ParseNumber(fields[6], raw.y)) {
      throw ValidationError(
          fmt::format("line {}: bad landing coordinates", line_no));
    }
    if (fields[2].empty()) {
      throw ValidationError(fmt::format("line {}: empty player_id", line_no));
    }

    if (current.strokes.empty() || current.id != rally_id) {
      if (!current.strokes.empty()) {
        FinishRally(current, current_line);
        finished_ids.insert(current.id);
        out.push_back(std::move(current));
        current = Rally{};
      }
      if (finished_ids.contains(rally_id)) {
        throw ValidationError(fmt::format(
            "line {}: rows of rally '{}' are not contiguous", line_no,
            rally_id));
      }
      current.id = std::string(rally_id);
      current_line = line_no;
    }
    if (stroke_no != current.size() + 1) {
      throw ValidationError(fmt::format(
          "line {}: stroke_no {} breaks the sequence of rally '{}'", line_no,
          stroke_no, rally_id));
    }
    current.strokes.push_back(Stroke{*role, std::string(fields[2]), *shot,
                                     ToCanonical(frame, raw)});
  }
  if (!header_seen) throw ValidationError("missing CSV header");
  if (!current.strokes.empty()) {
    FinishRally(current, current_line);
    out.push_back(std::move(current));
  }
  return out;
}

void SaveCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << FormatCsv(dataset);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

Dataset LoadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCsv(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string GeneratorMetadata(const GeneratorConfig& config) {
  nlohmann::json doc = {
      {"format", "rallyshap-dataset"},
      {"version", 1},
      {"frame", FrameName(CoordinateFrame::kOpponentHalf)},
      {"generator",
       {{"n_rallies", config.n_rallies},
        {"n_players", config.n_players},
        {"lambda", config.lambda},
        {"termination_prob", config.termination_prob},
        {"max_len", config.max_len},
        {"seed", config.seed},
        {"short_serve_prob", config.short_serve_prob},
        {"concentration", config.concentration}}},
      {"streams",
       {{"players", "DeriveKey(seed, 1, player_index)"},
        {"kernel", "DeriveKey(seed, 2, shot_code)"},
        {"rally", "DeriveKey(seed, 3, rally_index)"},
        {"split", "DeriveKey(split_seed, 4)"}}}};
  return doc.dump(2) + "\n";
}

}  // namespace rallyshap
