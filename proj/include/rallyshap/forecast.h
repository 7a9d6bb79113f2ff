#ifndef RALLYSHAP_FORECAST_H_
#define RALLYSHAP_FORECAST_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rallyshap/losses.h"
#include "rallyshap/rally.h"

namespace rallyshap {

// What a forecaster sees when predicting stroke `step` (1-based).
struct ForecastContext {
  std::string_view rally_id;
  std::span<const Stroke> history;  // strokes 1..step-1
  int step = 0;
  PlayerRole next_role = PlayerRole::kA;
  std::string_view next_player_id;
};

// Black-box rally forecaster. Implementations are immutable after fitting and
// must return identical output for identical input.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual StrokePrediction Step(const ForecastContext& context) const = 0;
  virtual std::string_view kind() const = 0;
};

struct ForecastRequest {
  std::string rally_id;
  std::vector<Stroke> past;  // the tau given strokes
  // Identities conditioning the prediction for each role; after a player
  // imputation these may be the opponent's id.
  std::string player_a;
  std::string player_b;
  std::vector<PlayerRole> roles_ahead;
  std::vector<std::string> ids_ahead;
  // Roles whose own predicted strokes are replaced by the reference stroke
  // before being fed back during rollout.
  std::array<bool, 2> impute_feedback{false, false};

  int horizon() const { return static_cast<int>(roles_ahead.size()); }
};

// Builds the request for predicting strokes tau+1..|R| of `rally` (tau must
// be set). Identities for future steps come from the rally's strokes, so a
// player-imputed rally yields flipped identities.
ForecastRequest MakeRequest(const Rally& rally);

// Ground-truth strokes tau+1..|R|.
std::span<const Stroke> FutureStrokes(const Rally& rally);

struct RolloutResult {
  std::vector<StrokePrediction> predictions;
  std::vector<Stroke> realized;
};

// Greedy: argmax shot (lowest code on ties) and the mean landing spot are
// fed back. Deterministic.
RolloutResult RolloutGreedy(const Forecaster& forecaster,
                            const ForecastRequest& request);

// One stochastic rollout drawing every realization from the stream `key`.
RolloutResult RolloutSample(const Forecaster& forecaster,
                            const ForecastRequest& request, uint64_t key);

// Stream key for sample `index` of a rally: (master seed, rally id hash,
// sample index). Shared by every coalition of an attribution run.
uint64_t SampleStreamKey(uint64_t master_seed, std::string_view rally_id,
                         int index);

// K sampled rollouts using SampleStreamKey streams.
std::vector<RolloutResult> RolloutSamples(const Forecaster& forecaster,
                                          const ForecastRequest& request,
                                          int k, uint64_t master_seed);

// ---------------------------------------------------------------------------
// Reference forecasters.

inline constexpr double kMinSigma = 1e-3;
inline constexpr double kMaxAbsRho = 0.99;

struct PlayerStyle {
  ShotDistribution preference;
  std::array<AreaDistribution, kNumShotTypes> areas;

  friend bool operator==(const PlayerStyle&, const PlayerStyle&) = default;
};

using StyleRegistry = std::map<std::string, PlayerStyle, std::less<>>;

// Single Gaussian with the mean and covariance of the shot-weighted mixture
// of a style's per-shot Gaussians.
AreaDistribution MomentMatch(const PlayerStyle& style);

// Predicts from the identity of the player on turn only.
class StyleForecaster final : public Forecaster {
 public:
  StyleForecaster(StyleRegistry players, PlayerStyle fallback, double alpha);

  StrokePrediction Step(const ForecastContext& context) const override;
  std::string_view kind() const override { return "style"; }

  const StyleRegistry& players() const { return players_; }
  const PlayerStyle& fallback() const { return fallback_; }
  double alpha() const { return alpha_; }
  StrokePrediction PredictFor(std::string_view player_id) const;

  friend bool operator==(const StyleForecaster& a, const StyleForecaster& b) {
    return a.players_ == b.players_ && a.fallback_ == b.fallback_ &&
           a.alpha_ == b.alpha_;
  }

 private:
  StyleRegistry players_;
  PlayerStyle fallback_;
  double alpha_;
  std::map<std::string, StrokePrediction, std::less<>> cache_;
  StrokePrediction fallback_prediction_;
};

// Order-1 chain over (shot type, landing cell of a bins x bins grid) of the
// previous stroke. Player identity is never read.
class MarkovForecaster final : public Forecaster {
 public:
  struct State {
    int64_t count = 0;
    StrokePrediction next;

    friend bool operator==(const State&, const State&) = default;
  };

  MarkovForecaster(int bins, double alpha, std::vector<State> states,
                   StrokePrediction unseen);

  StrokePrediction Step(const ForecastContext& context) const override;
  std::string_view kind() const override { return "markov"; }

  int bins() const { return bins_; }
  double alpha() const { return alpha_; }
  const std::vector<State>& states() const { return states_; }
  const StrokePrediction& unseen() const { return unseen_; }
  int StateIndex(const Stroke& previous) const;
  StrokePrediction PredictAfter(const Stroke& previous) const;

  friend bool operator==(const MarkovForecaster& a,
                         const MarkovForecaster& b) {
    return a.bins_ == b.bins_ && a.alpha_ == b.alpha_ &&
           a.states_ == b.states_ && a.unseen_ == b.unseen_;
  }

 private:
  int bins_;
  double alpha_;
  std::vector<State> states_;  // indexed by StateIndex; count 0 = unseen
  StrokePrediction unseen_;
};

// Convex combination: shot probabilities lambda * markov + (1 - lambda) *
// style, area parameters interpolated the same way.
class BlendForecaster final : public Forecaster {
 public:
  BlendForecaster(std::shared_ptr<const StyleForecaster> style,
                  std::shared_ptr<const MarkovForecaster> markov,
                  double lambda);

  StrokePrediction Step(const ForecastContext& context) const override;
  std::string_view kind() const override { return "blend"; }

  const StyleForecaster& style() const { return *style_; }
  const MarkovForecaster& markov() const { return *markov_; }
  double lambda() const { return lambda_; }

 private:
  std::shared_ptr<const StyleForecaster> style_;
  std::shared_ptr<const MarkovForecaster> markov_;
  double lambda_;
};

StrokePrediction BlendPredictions(const StrokePrediction& style,
                                  const StrokePrediction& markov,
                                  double lambda);

// Uniform shots and a fixed wide Gaussian centred on the half-court.
class UniformForecaster final : public Forecaster {
 public:
  StrokePrediction Step(const ForecastContext& context) const override;
  std::string_view kind() const override { return "uniform"; }
};

// Looks up the ground truth by rally id and step; a perfect forecaster used
// to pin metric baselines.
class OracleForecaster final : public Forecaster {
 public:
  explicit OracleForecaster(std::span<const Rally> rallies);

  StrokePrediction Step(const ForecastContext& context) const override;
  std::string_view kind() const override { return "oracle"; }

 private:
  std::map<std::string, std::vector<Stroke>, std::less<>> truth_;
};

inline constexpr double kOracleSigma = 1e-150;

// ---------------------------------------------------------------------------
// Fitting. Every stroke i >= 2 of `targets` is a training target; the
// conditioning (identity of the player on turn, previous stroke) is read
// from the same position of `inputs`. Passing the same rallies for both is
// ordinary fitting; an imputed copy as `inputs` trains on degraded context.

StyleForecaster FitStyle(std::span<const Rally> inputs,
                         std::span<const Rally> targets, double alpha = 1.0);
StyleForecaster FitStyle(std::span<const Rally> rallies, double alpha = 1.0);

MarkovForecaster FitMarkov(std::span<const Rally> inputs,
                           std::span<const Rally> targets, double alpha = 1.0,
                           int bins = 3);
MarkovForecaster FitMarkov(std::span<const Rally> rallies, double alpha = 1.0,
                           int bins = 3);

// ---------------------------------------------------------------------------
// Evaluation.

struct EvaluationResult {
  Metrics metrics;  // means over evaluated rallies
  std::vector<std::string> rally_ids;
  std::vector<Metrics> per_rally;
  int skipped = 0;  // rallies with |R| <= tau
};

// CE from the greedy rollout; MSE/MAE best-of-K over sampled rollouts.
EvaluationResult Evaluate(const Forecaster& forecaster,
                          std::span<const Rally> dataset, int tau, int k,
                          uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Model files: versioned JSON documents.

inline constexpr int kModelFormatVersion = 1;

void SaveModel(const Forecaster& forecaster, const std::string& path);
std::shared_ptr<const Forecaster> LoadModel(const std::string& path);
std::string SerializeModel(const Forecaster& forecaster);
std::shared_ptr<const Forecaster> ParseModel(const std::string& text);

}  // namespace rallyshap

#endif  // RALLYSHAP_FORECAST_H_
