#include "rallyshap/attribution.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rallyshap/error.h"
#include "rallyshap/random.h"

namespace rallyshap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void CheckTau(const Rally& rally, std::string_view what) {
  Require(rally.tau >= 2 && rally.tau <= rally.size() - 1,
          fmt::format("{}: tau {} invalid for rally '{}' of length {}", what,
                      rally.tau, rally.id, rally.size()));
}

std::vector<int> OutputStrokes(const Rally& rally) {
  std::vector<int> out;
  for (int i = rally.tau + 1; i <= rally.size(); ++i) out.push_back(i);
  return out;
}

void PutLosses(PayoffVector& payoff, size_t output, double ce, double nll) {
  const double type = -ce;
  const double area = -nll;
  payoff[output * kNumComponents + 0] = type;
  payoff[output * kNumComponents + 1] = area;
  payoff[output * kNumComponents + 2] = 0.5 * (type + area);
}

// Negated per-step losses of `request` against `truth`.
PayoffVector LossPayoff(const Forecaster& forecaster,
                        const ForecastRequest& request,
                        std::span<const Stroke> truth,
                        const PayoffOptions& options) {
  PayoffVector payoff(truth.size() * kNumComponents);
  if (!options.sampled) {
    const RolloutResult r = RolloutGreedy(forecaster, request);
    for (size_t o = 0; o < truth.size(); ++o) {
      PutLosses(payoff, o, CrossEntropy(r.predictions[o].shot, truth[o].shot),
                GaussianNll(r.predictions[o].area, truth[o].area));
    }
    return payoff;
  }
  Require(options.k >= 1, "sampled payoff: K must be >= 1");
  std::vector<double> ce(truth.size(), 0.0);
  std::vector<double> nll(truth.size(), 0.0);
  for (const RolloutResult& r :
       RolloutSamples(forecaster, request, options.k, options.seed)) {
    for (size_t o = 0; o < truth.size(); ++o) {
      ce[o] += CrossEntropy(r.predictions[o].shot, truth[o].shot);
      nll[o] += GaussianNll(r.predictions[o].area, truth[o].area);
    }
  }
  for (size_t o = 0; o < truth.size(); ++o) {
    PutLosses(payoff, o, ce[o] / options.k, nll[o] / options.k);
  }
  return payoff;
}

}  // namespace

std::string_view GameName(Game game) {
  return game == Game::kPast ? "past" : "player";
}

std::string_view ComponentName(Component component) {
  switch (component) {
    case Component::kType:
      return "type";
    case Component::kArea:
      return "area";
    case Component::kMacro:
      return "macro";
  }
  return "?";
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kExact:
      return "exact";
    case Method::kSampled:
      return "sampled";
    case Method::kLoo:
      return "loo";
  }
  return "?";
}

std::optional<Game> ParseGame(std::string_view name) {
  if (name == "past") return Game::kPast;
  if (name == "player") return Game::kPlayer;
  return std::nullopt;
}

std::optional<Component> ParseComponent(std::string_view name) {
  for (const Component c : kComponents) {
    if (ComponentName(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (const Method m : {Method::kExact, Method::kSampled, Method::kLoo}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

Feature Feature::PastStroke(int index) {
  Require(index >= 2, "Feature: the serve is never a feature");
  return Feature{Kind::kPastStroke, index, PlayerRole::kA};
}

Feature Feature::Player(PlayerRole role) {
  return Feature{Kind::kPlayer, 0, role};
}

std::string Feature::Label() const {
  return kind == Kind::kPastStroke ? std::to_string(stroke_index)
                                   : std::string(RoleName(role));
}

// ---------------------------------------------------------------------------

RallyGame BuildPastGame(const Rally& rally, const Forecaster& forecaster,
                        const PayoffOptions& options) {
  CheckTau(rally, "BuildPastGame");
  RallyGame game{Game::kPast, {}, OutputStrokes(rally), {}};
  for (int i = 2; i <= rally.tau; ++i) {
    game.features.push_back(Feature::PastStroke(i));
  }
  game.payoff = [rally, &forecaster, options](CoalitionMask mask) {
    std::vector<int> keep;
    for (int i = 2; i <= rally.tau; ++i) {
      if (mask & (CoalitionMask{1} << (i - 2))) keep.push_back(i);
    }
    const Rally imputed = ImputePast(rally, keep);
    return LossPayoff(forecaster, MakeRequest(imputed), FutureStrokes(rally),
                      options);
  };
  return game;
}

RallyGame BuildPlayerGame(const Rally& rally, const Forecaster& forecaster,
                          const PayoffOptions& options) {
  CheckTau(rally, "BuildPlayerGame");
  RallyGame game{Game::kPlayer,
                 {Feature::Player(PlayerRole::kA),
                  Feature::Player(PlayerRole::kB)},
                 OutputStrokes(rally),
                 {}};
  game.payoff = [rally, &forecaster, options](CoalitionMask mask) {
    const bool drop_a = (mask & 1) == 0;
    const bool drop_b = (mask & 2) == 0;
    Rally imputed = rally;
    if (drop_a) imputed = ImputePlayer(imputed, PlayerRole::kA, rally.size());
    if (drop_b) imputed = ImputePlayer(imputed, PlayerRole::kB, rally.size());
    ForecastRequest request = MakeRequest(imputed);
    if (options.impute_feedback) request.impute_feedback = {drop_a, drop_b};
    return LossPayoff(forecaster, request, FutureStrokes(rally), options);
  };
  return game;
}

// ---------------------------------------------------------------------------

AttributionMatrix::AttributionMatrix(std::string rally_id, int tau, Game game,
                                     Method method,
                                     std::vector<Feature> features,
                                     std::vector<int> output_strokes)
    : rally_id_(std::move(rally_id)),
      tau_(tau),
      game_(game),
      method_(method),
      features_(std::move(features)),
      output_strokes_(std::move(output_strokes)) {
  const size_t cells =
      features_.size() * output_strokes_.size() * kNumComponents;
  values_.assign(cells, 0.0);
  stderr_.assign(cells, kNaN);
}

std::optional<double> AttributionMatrix::stderr_at(size_t feature,
                                                   size_t output,
                                                   Component c) const {
  const double v = stderr_[Index(feature, output, c)];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void AttributionMatrix::set_stderr(size_t feature, size_t output, Component c,
                                   double v) {
  stderr_[Index(feature, output, c)] = v;
}

double AttributionMatrix::EfficiencyGap() const {
  if (full_payoff_.empty() || empty_payoff_.empty()) return kNaN;
  double worst = 0.0;
  for (size_t o = 0; o < output_strokes_.size(); ++o) {
    for (const Component c : kComponents) {
      const size_t e = o * kNumComponents + static_cast<size_t>(c);
      double sum = 0.0;
      for (size_t f = 0; f < features_.size(); ++f) sum += value(f, o, c);
      worst = std::max(
          worst, std::abs(sum - (full_payoff_[e] - empty_payoff_[e])));
    }
  }
  return worst;
}

AttributionMatrix Attribute(const Rally& rally, const Forecaster& forecaster,
                            Game game, const MethodOptions& method,
                            const PayoffOptions& payoff) {
  RallyGame g = game == Game::kPast ? BuildPastGame(rally, forecaster, payoff)
                                    : BuildPlayerGame(rally, forecaster, payoff);
  const int n = static_cast<int>(g.features.size());
  PayoffTable table(n, g.payoff);

  std::vector<PayoffVector> phi;
  std::vector<PayoffVector> stderrs;
  switch (method.method) {
    case Method::kExact:
      if (n > method.exact_cap) {
        throw ContractViolation(fmt::format(
            "exact Shapley refused: {} features exceed the cap of {}", n,
            method.exact_cap));
      }
      table.EvaluateAll(method.threads);
      phi = ExactShapley(table, method.exact_cap);
      break;
    case Method::kSampled: {
      SampledEstimate est = SampledShapley(table, method.samples, method.seed);
      phi = std::move(est.phi);
      stderrs = std::move(est.stderr_);
      break;
    }
    case Method::kLoo:
      phi = LeaveOneOut(table);
      break;
  }

  AttributionMatrix matrix(rally.id, rally.tau, game, method.method,
                           g.features, g.output_strokes);
  matrix.set_n_evaluations(table.evaluations());
  for (size_t f = 0; f < g.features.size(); ++f) {
    for (size_t o = 0; o < g.output_strokes.size(); ++o) {
      const double type = phi[f][o * kNumComponents + 0];
      const double area = phi[f][o * kNumComponents + 1];
      matrix.set_value(f, o, Component::kType, type);
      matrix.set_value(f, o, Component::kArea, area);
      matrix.set_value(f, o, Component::kMacro, 0.5 * (type + area));
      if (!stderrs.empty()) {
        for (const Component c : kComponents) {
          matrix.set_stderr(f, o, c,
                            stderrs[f][o * kNumComponents +
                                       static_cast<size_t>(c)]);
        }
      }
    }
  }
  if (method.method != Method::kLoo) {
    matrix.set_boundary_payoffs(table.Get(FullCoalition(n)), table.Get(0));
  }
  return matrix;
}

// ---------------------------------------------------------------------------

std::vector<ComponentValues> AggregateRally(const AttributionMatrix& matrix) {
  const size_t n_out = matrix.output_strokes().size();
  Require(n_out > 0, "AggregateRally: empty matrix");
  std::vector<ComponentValues> out(matrix.features().size());
  for (size_t f = 0; f < out.size(); ++f) {
    for (const Component c : kComponents) {
      double sum = 0.0;
      for (size_t o = 0; o < n_out; ++o) sum += matrix.value(f, o, c);
      out[f][static_cast<size_t>(c)] = sum / static_cast<double>(n_out);
    }
  }
  return out;
}

std::vector<ComponentValues> CombinePlayers(const AttributionMatrix& matrix) {
  Require(matrix.game() == Game::kPlayer && matrix.features().size() == 2,
          "CombinePlayers: requires a player-game matrix");
  std::vector<ComponentValues> out(matrix.output_strokes().size());
  for (size_t o = 0; o < out.size(); ++o) {
    for (const Component c : kComponents) {
      out[o][static_cast<size_t>(c)] =
          0.5 * (matrix.value(0, o, c) + matrix.value(1, o, c));
    }
  }
  return out;
}

ComponentValues RallyScalar(const AttributionMatrix& matrix) {
  ComponentValues out{};
  if (matrix.game() == Game::kPlayer) {
    const auto combined = CombinePlayers(matrix);
    for (const auto& row : combined) {
      for (int c = 0; c < kNumComponents; ++c) out[c] += row[c];
    }
    for (double& v : out) v /= static_cast<double>(combined.size());
    return out;
  }
  const auto per_feature = AggregateRally(matrix);
  for (const auto& row : per_feature) {
    for (int c = 0; c < kNumComponents; ++c) out[c] += row[c];
  }
  for (double& v : out) v /= static_cast<double>(per_feature.size());
  return out;
}

ComponentValues RallyScalarPlayersLast(const AttributionMatrix& matrix) {
  Require(matrix.game() == Game::kPlayer,
          "RallyScalarPlayersLast: requires a player-game matrix");
  const auto per_player = AggregateRally(matrix);
  ComponentValues out{};
  for (int c = 0; c < kNumComponents; ++c) {
    out[c] = 0.5 * (per_player[0][c] + per_player[1][c]);
  }
  return out;
}

GlobalAggregate AggregateGlobal(std::span<const double> values, int resamples,
                                uint64_t seed, double level) {
  Require(!values.empty(), "AggregateGlobal: no values");
  Require(resamples >= 0, "AggregateGlobal: negative resample count");
  Require(level > 0.0 && level < 1.0, "AggregateGlobal: level outside (0, 1)");
  const size_t n = values.size();
  GlobalAggregate out;
  out.n = static_cast<int>(n);
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (resamples == 0) {
    out.ci_low = out.ci_high = out.mean;
    return out;
  }

  StreamRng rng(DeriveKey(seed, 0x626f6f74ULL));
  std::vector<double> means(resamples);
  for (int b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += values[rng.Below(n)];
    means[b] = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  // Linear interpolation between order statistics.
  auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] + frac * (means[hi] - means[lo]);
  };
  const double tail = 0.5 * (1.0 - level);
  out.ci_low = quantile(tail);
  out.ci_high = quantile(1.0 - tail);
  return out;
}

}  // namespace rallyshap
