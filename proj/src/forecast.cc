#include "rallyshap/forecast.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rallyshap/error.h"
#include "rallyshap/parallel.h"
#include "rallyshap/random.h"

namespace rallyshap {

namespace {

// Running sums for the sample mean and covariance of landing spots.
struct Moments {
  int64_t n = 0;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;

  void Add(const Coord& c) {
    ++n;
    sx += c.x;
    sy += c.y;
    sxx += c.x * c.x;
    syy += c.y * c.y;
    sxy += c.x * c.y;
  }

  AreaDistribution ToGaussian() const {
    const double inv = 1.0 / static_cast<double>(n);
    const double mx = sx * inv;
    const double my = sy * inv;
    const double vx = std::max(0.0, sxx * inv - mx * mx);
    const double vy = std::max(0.0, syy * inv - my * my);
    const double cxy = sxy * inv - mx * my;
    AreaDistribution g;
    g.mu_x = mx;
    g.mu_y = my;
    g.sigma_x = std::max(kMinSigma, std::sqrt(vx));
    g.sigma_y = std::max(kMinSigma, std::sqrt(vy));
    g.rho = std::clamp(cxy / (g.sigma_x * g.sigma_y), -kMaxAbsRho, kMaxAbsRho);
    return g;
  }
};

constexpr int kMinAreaSamples = 3;

// Used only when a fit has fewer than kMinAreaSamples strokes overall.
constexpr AreaDistribution kWideArea{0.0, 0.5, 0.5, 0.5, 0.0};

AreaDistribution GaussianOr(const Moments& m, const AreaDistribution& fallback) {
  return m.n >= kMinAreaSamples ? m.ToGaussian() : fallback;
}

ShotDistribution Smoothed(const std::array<int64_t, kNumShotTypes>& counts,
                          double alpha) {
  int64_t total = 0;
  for (const int64_t c : counts) total += c;
  const double denom = static_cast<double>(total) + kNumShotTypes * alpha;
  ShotDistribution d;
  for (int s = 0; s < kNumShotTypes; ++s) {
    d.probs[s] = (static_cast<double>(counts[s]) + alpha) / denom;
  }
  return d;
}

void CheckTrainingPairs(std::span<const Rally> inputs,
                        std::span<const Rally> targets, double alpha,
                        std::string_view what) {
  if (targets.empty()) {
    throw ContractViolation(fmt::format("{}: empty dataset", what));
  }
  Require(inputs.size() == targets.size(),
          fmt::format("{}: {} input rallies vs {} targets", what,
                      inputs.size(), targets.size()));
  Require(alpha > 0.0, fmt::format("{}: alpha must be > 0", what));
  for (size_t r = 0; r < inputs.size(); ++r) {
    Require(inputs[r].size() == targets[r].size(),
            fmt::format("{}: rally '{}' input/target length mismatch", what,
                        targets[r].id));
  }
}

Stroke Realize(PlayerRole role, std::string_view id, ShotType shot,
               const Coord& area) {
  return Stroke{role, std::string(id), shot, ClampToCourt(area)};
}

template <typename Realizer>
RolloutResult Rollout(const Forecaster& forecaster,
                      const ForecastRequest& request, Realizer&& realize) {
  Require(request.horizon() >= 1, "rollout: horizon must be >= 1");
  Require(request.ids_ahead.size() == request.roles_ahead.size(),
          "rollout: ids_ahead and roles_ahead differ in length");
  RolloutResult out;
  out.predictions.reserve(request.horizon());
  out.realized.reserve(request.horizon());
  std::vector<Stroke> history = request.past;
  history.reserve(request.past.size() + request.horizon());
  for (int j = 0; j < request.horizon(); ++j) {
    const PlayerRole role = request.roles_ahead[j];
    const std::string& id = request.ids_ahead[j];
    ForecastContext context{request.rally_id, history,
                            static_cast<int>(history.size()) + 1, role, id};
    StrokePrediction prediction = forecaster.Step(context);
    Stroke realized = realize(role, id, prediction);
    history.push_back(request.impute_feedback[static_cast<int>(role)]
                          ? ReferenceStroke(role, id)
                          : realized);
    out.predictions.push_back(std::move(prediction));
    out.realized.push_back(std::move(realized));
  }
  return out;
}

}  // namespace

ForecastRequest MakeRequest(const Rally& rally) {
  const int tau = rally.tau;
  Require(tau >= 2 && tau <= rally.size() - 1,
          fmt::format("MakeRequest: tau {} invalid for rally '{}' of length {}",
                      tau, rally.id, rally.size()));
  ForecastRequest request;
  request.rally_id = rally.id;
  request.past.assign(rally.strokes.begin(), rally.strokes.begin() + tau);
  request.player_a = rally.player_a;
  request.player_b = rally.player_b;
  bool seen_a = false;
  bool seen_b = false;
  for (int i = tau + 1; i <= rally.size(); ++i) {
    const PlayerRole role = RoleAt(i);
    const std::string& id = rally.stroke(i).player_id;
    request.roles_ahead.push_back(role);
    request.ids_ahead.push_back(id);
    if (role == PlayerRole::kA && !seen_a) {
      request.player_a = id;
      seen_a = true;
    } else if (role == PlayerRole::kB && !seen_b) {
      request.player_b = id;
      seen_b = true;
    }
  }
  return request;
}

std::span<const Stroke> FutureStrokes(const Rally& rally) {
  Require(rally.tau >= 2 && rally.tau <= rally.size() - 1,
          "FutureStrokes: tau not set");
  return std::span<const Stroke>(rally.strokes).subspan(rally.tau);
}

RolloutResult RolloutGreedy(const Forecaster& forecaster,
                            const ForecastRequest& request) {
  return Rollout(forecaster, request,
                 [](PlayerRole role, std::string_view id,
                    const StrokePrediction& p) {
                   return Realize(role, id, p.shot.Argmax(), p.area.Mean());
                 });
}

RolloutResult RolloutSample(const Forecaster& forecaster,
                            const ForecastRequest& request, uint64_t key) {
  StreamRng rng(key);
  return Rollout(forecaster, request,
                 [&rng](PlayerRole role, std::string_view id,
                        const StrokePrediction& p) {
                   const ShotType shot =
                       static_cast<ShotType>(rng.Categorical(p.shot.probs));
                   const double z1 = rng.Normal();
                   const double z2 = rng.Normal();
                   const AreaDistribution& a = p.area;
                   const Coord c{
                       a.mu_x + a.sigma_x * z1,
                       a.mu_y + a.sigma_y * (a.rho * z1 +
                                             std::sqrt(1.0 - a.rho * a.rho) *
                                                 z2)};
                   return Realize(role, id, shot, c);
                 });
}

uint64_t SampleStreamKey(uint64_t master_seed, std::string_view rally_id,
                         int index) {
  return DeriveKey(master_seed, HashString(rally_id),
                   static_cast<uint64_t>(index));
}

std::vector<RolloutResult> RolloutSamples(const Forecaster& forecaster,
                                          const ForecastRequest& request,
                                          int k, uint64_t master_seed) {
  Require(k >= 1, "RolloutSamples: K must be >= 1");
  std::vector<RolloutResult> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    out.push_back(RolloutSample(
        forecaster, request, SampleStreamKey(master_seed, request.rally_id, i)));
  }
  return out;
}

// ---------------------------------------------------------------------------

AreaDistribution MomentMatch(const PlayerStyle& style) {
  double mx = 0.0;
  double my = 0.0;
  double exx = 0.0;
  double eyy = 0.0;
  double exy = 0.0;
  for (int s = 0; s < kNumShotTypes; ++s) {
    const double w = style.preference.probs[s];
    const AreaDistribution& g = style.areas[s];
    mx += w * g.mu_x;
    my += w * g.mu_y;
    exx += w * (g.sigma_x * g.sigma_x + g.mu_x * g.mu_x);
    eyy += w * (g.sigma_y * g.sigma_y + g.mu_y * g.mu_y);
    exy += w * (g.rho * g.sigma_x * g.sigma_y + g.mu_x * g.mu_y);
  }
  AreaDistribution out;
  out.mu_x = mx;
  out.mu_y = my;
  out.sigma_x = std::max(kMinSigma, std::sqrt(std::max(0.0, exx - mx * mx)));
  out.sigma_y = std::max(kMinSigma, std::sqrt(std::max(0.0, eyy - my * my)));
  out.rho = std::clamp((exy - mx * my) / (out.sigma_x * out.sigma_y),
                       -kMaxAbsRho, kMaxAbsRho);
  return out;
}

StyleForecaster::StyleForecaster(StyleRegistry players, PlayerStyle fallback,
                                 double alpha)
    : players_(std::move(players)),
      fallback_(std::move(fallback)),
      alpha_(alpha) {
  for (const auto& [id, style] : players_) {
    cache_.emplace(id, StrokePrediction{style.preference, MomentMatch(style)});
  }
  fallback_prediction_ = {fallback_.preference, MomentMatch(fallback_)};
}

StrokePrediction StyleForecaster::PredictFor(std::string_view player_id) const {
  const auto it = cache_.find(player_id);
  return it == cache_.end() ? fallback_prediction_ : it->second;
}

StrokePrediction StyleForecaster::Step(const ForecastContext& context) const {
  return PredictFor(context.next_player_id);
}

StyleForecaster FitStyle(std::span<const Rally> inputs,
                         std::span<const Rally> targets, double alpha) {
  CheckTrainingPairs(inputs, targets, alpha, "FitStyle");

  struct Tally {
    std::array<int64_t, kNumShotTypes> counts{};
    std::array<Moments, kNumShotTypes> areas;
  };
  std::map<std::string, Tally, std::less<>> tallies;
  Tally pooled;
  Moments all;

  for (size_t r = 0; r < targets.size(); ++r) {
    for (int i = 2; i <= targets[r].size(); ++i) {
      const Stroke& target = targets[r].stroke(i);
      Tally& t = tallies[inputs[r].stroke(i).player_id];
      const int s = ShotCode(target.shot);
      ++t.counts[s];
      t.areas[s].Add(target.area);
      ++pooled.counts[s];
      pooled.areas[s].Add(target.area);
      all.Add(target.area);
    }
  }

  const AreaDistribution global = GaussianOr(all, kWideArea);
  PlayerStyle fallback;
  fallback.preference = Smoothed(pooled.counts, alpha);
  for (int s = 0; s < kNumShotTypes; ++s) {
    fallback.areas[s] = GaussianOr(pooled.areas[s], global);
  }

  StyleRegistry players;
  for (const auto& [id, t] : tallies) {
    PlayerStyle style;
    style.preference = Smoothed(t.counts, alpha);
    for (int s = 0; s < kNumShotTypes; ++s) {
      style.areas[s] = GaussianOr(t.areas[s], fallback.areas[s]);
    }
    players.emplace(id, std::move(style));
  }
  return StyleForecaster(std::move(players), std::move(fallback), alpha);
}

StyleForecaster FitStyle(std::span<const Rally> rallies, double alpha) {
  return FitStyle(rallies, rallies, alpha);
}

// ---------------------------------------------------------------------------

MarkovForecaster::MarkovForecaster(int bins, double alpha,
                                   std::vector<State> states,
                                   StrokePrediction unseen)
    : bins_(bins),
      alpha_(alpha),
      states_(std::move(states)),
      unseen_(std::move(unseen)) {
  Require(bins_ >= 1, "MarkovForecaster: bins must be >= 1");
  Require(states_.size() ==
              static_cast<size_t>(kNumShotTypes) * bins_ * bins_,
          "MarkovForecaster: state table has the wrong size");
}

int MarkovForecaster::StateIndex(const Stroke& previous) const {
  const Coord c = ClampToCourt(previous.area);
  const int cx = std::clamp(
      static_cast<int>(std::floor((c.x - kCourtMinX) * bins_)), 0, bins_ - 1);
  const int cy = std::clamp(
      static_cast<int>(std::floor((c.y - kCourtMinY) * bins_)), 0, bins_ - 1);
  return (ShotCode(previous.shot) * bins_ + cy) * bins_ + cx;
}

StrokePrediction MarkovForecaster::PredictAfter(const Stroke& previous) const {
  const State& state = states_[StateIndex(previous)];
  return state.count > 0 ? state.next : unseen_;
}

StrokePrediction MarkovForecaster::Step(const ForecastContext& context) const {
  if (context.history.empty()) return unseen_;
  return PredictAfter(context.history.back());
}

MarkovForecaster FitMarkov(std::span<const Rally> inputs,
                           std::span<const Rally> targets, double alpha,
                           int bins) {
  CheckTrainingPairs(inputs, targets, alpha, "FitMarkov");
  Require(bins >= 1, "FitMarkov: bins must be >= 1");

  const size_t n_states = static_cast<size_t>(kNumShotTypes) * bins * bins;
  // The index function only needs the grid size.
  const MarkovForecaster indexer(bins, alpha,
                                 std::vector<MarkovForecaster::State>(n_states),
                                 {});
  std::vector<std::array<int64_t, kNumShotTypes>> counts(n_states);
  std::vector<Moments> areas(n_states);
  Moments all;
  for (size_t r = 0; r < targets.size(); ++r) {
    for (int i = 2; i <= targets[r].size(); ++i) {
      const int state = indexer.StateIndex(inputs[r].stroke(i - 1));
      const Stroke& target = targets[r].stroke(i);
      ++counts[state][ShotCode(target.shot)];
      areas[state].Add(target.area);
      all.Add(target.area);
    }
  }

  const AreaDistribution global = GaussianOr(all, kWideArea);
  StrokePrediction unseen{ShotDistribution::Uniform(), global};
  std::vector<MarkovForecaster::State> states(n_states);
  for (size_t s = 0; s < n_states; ++s) {
    states[s].count = areas[s].n;
    states[s].next = areas[s].n > 0
                         ? StrokePrediction{Smoothed(counts[s], alpha),
                                            GaussianOr(areas[s], global)}
                         : unseen;
  }
  return MarkovForecaster(bins, alpha, std::move(states), std::move(unseen));
}

MarkovForecaster FitMarkov(std::span<const Rally> rallies, double alpha,
                           int bins) {
  return FitMarkov(rallies, rallies, alpha, bins);
}

// ---------------------------------------------------------------------------

StrokePrediction BlendPredictions(const StrokePrediction& style,
                                  const StrokePrediction& markov,
                                  double lambda) {
  const double keep = 1.0 - lambda;
  auto mix = [&](double s, double m) { return lambda * m + keep * s; };
  StrokePrediction out;
  for (int i = 0; i < kNumShotTypes; ++i) {
    out.shot.probs[i] = mix(style.shot.probs[i], markov.shot.probs[i]);
  }
  out.area.mu_x = mix(style.area.mu_x, markov.area.mu_x);
  out.area.mu_y = mix(style.area.mu_y, markov.area.mu_y);
  out.area.sigma_x = mix(style.area.sigma_x, markov.area.sigma_x);
  out.area.sigma_y = mix(style.area.sigma_y, markov.area.sigma_y);
  out.area.rho = mix(style.area.rho, markov.area.rho);
  return out;
}

BlendForecaster::BlendForecaster(std::shared_ptr<const StyleForecaster> style,
                                 std::shared_ptr<const MarkovForecaster> markov,
                                 double lambda)
    : style_(std::move(style)), markov_(std::move(markov)), lambda_(lambda) {
  Require(style_ && markov_, "BlendForecaster: null component");
  Require(lambda_ >= 0.0 && lambda_ <= 1.0,
          fmt::format("BlendForecaster: lambda {} outside [0, 1]", lambda_));
}

StrokePrediction BlendForecaster::Step(const ForecastContext& context) const {
  return BlendPredictions(style_->Step(context), markov_->Step(context),
                          lambda_);
}

StrokePrediction UniformForecaster::Step(const ForecastContext&) const {
  return {ShotDistribution::Uniform(), kWideArea};
}

OracleForecaster::OracleForecaster(std::span<const Rally> rallies) {
  for (const Rally& r : rallies) truth_.emplace(r.id, r.strokes);
}

StrokePrediction OracleForecaster::Step(const ForecastContext& context) const {
  const auto it = truth_.find(context.rally_id);
  Require(it != truth_.end() && context.step >= 1 &&
              context.step <= static_cast<int>(it->second.size()),
          fmt::format("OracleForecaster: no truth for rally '{}' step {}",
                      context.rally_id, context.step));
  const Stroke& s = it->second[context.step - 1];
  return {ShotDistribution::OneHot(s.shot),
          {s.area.x, s.area.y, kOracleSigma, kOracleSigma, 0.0}};
}

// ---------------------------------------------------------------------------

EvaluationResult Evaluate(const Forecaster& forecaster,
                          std::span<const Rally> dataset, int tau, int k,
                          uint64_t seed, int threads) {
  Require(tau >= 2, "Evaluate: tau must be >= 2");
  Require(k >= 1, "Evaluate: K must be >= 1");
  std::vector<const Rally*> usable;
  EvaluationResult result;
  for (const Rally& r : dataset) {
    if (r.size() > tau) {
      usable.push_back(&r);
    } else {
      ++result.skipped;
    }
  }
  result.per_rally.resize(usable.size());
  ParallelFor(usable.size(), threads, [&](size_t i) {
    const Rally rally = WithTau(*usable[i], tau);
    const ForecastRequest request = MakeRequest(rally);
    const std::span<const Stroke> truth = FutureStrokes(rally);
    const RolloutResult greedy = RolloutGreedy(forecaster, request);
    std::vector<ShotDistribution> shots;
    shots.reserve(greedy.predictions.size());
    for (const auto& p : greedy.predictions) shots.push_back(p.shot);
    std::vector<std::vector<Coord>> samples;
    samples.reserve(k);
    for (const RolloutResult& s :
         RolloutSamples(forecaster, request, k, seed)) {
      std::vector<Coord> coords;
      coords.reserve(s.realized.size());
      for (const Stroke& st : s.realized) coords.push_back(st.area);
      samples.push_back(std::move(coords));
    }
    result.per_rally[i] = EvalMetrics(samples, shots, truth);
  });

  for (size_t i = 0; i < usable.size(); ++i) {
    result.rally_ids.push_back(usable[i]->id);
    result.metrics.ce += result.per_rally[i].ce;
    result.metrics.mse += result.per_rally[i].mse;
    result.metrics.mae += result.per_rally[i].mae;
  }
  const double n = static_cast<double>(usable.size());
  if (usable.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.metrics = {nan, nan, nan};
  } else {
    result.metrics.ce /= n;
    result.metrics.mse /= n;
    result.metrics.mae /= n;
  }
  return result;
}

}  // namespace rallyshap
