#ifndef RALLYSHAP_ATTRIBUTION_H_
#define RALLYSHAP_ATTRIBUTION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rallyshap/forecast.h"
#include "rallyshap/rally.h"
#include "rallyshap/shapley.h"

namespace rallyshap {

enum class Game { kPast, kPlayer };
enum class Component { kType = 0, kArea = 1, kMacro = 2 };
enum class Method { kExact, kSampled, kLoo };

inline constexpr int kNumComponents = 3;
inline constexpr std::array<Component, kNumComponents> kComponents = {
    Component::kType, Component::kArea, Component::kMacro};

std::string_view GameName(Game game);
std::string_view ComponentName(Component component);
std::string_view MethodName(Method method);
std::optional<Game> ParseGame(std::string_view name);
std::optional<Component> ParseComponent(std::string_view name);
std::optional<Method> ParseMethod(std::string_view name);

// An attribution unit: a given stroke (index >= 2) or a player role.
struct Feature {
  enum class Kind { kPastStroke, kPlayer };
  Kind kind = Kind::kPastStroke;
  int stroke_index = 0;
  PlayerRole role = PlayerRole::kA;

  static Feature PastStroke(int index);
  static Feature Player(PlayerRole role);
  std::string Label() const;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// How each coalition's loss is measured.
struct PayoffOptions {
  // Greedy rollout by default; otherwise the mean loss over K sampled
  // rollouts sharing the same random streams across coalitions.
  bool sampled = false;
  int k = 10;
  uint64_t seed = 0;
  // Also replace a dropped player's fed-back predictions during rollout.
  bool impute_feedback = false;
};

struct MethodOptions {
  Method method = Method::kExact;
  int samples = 1000;  // permutations for kSampled
  uint64_t seed = 0;
  int exact_cap = kDefaultExactCap;
  int threads = 1;  // coalition-level parallelism
};

// A coalition game over one rally. Payoff entry layout: for each output
// stroke o (0-based over tau+1..|R|) entries 3o + component, each holding
// the negated loss (macro = mean of type and area).
struct RallyGame {
  Game game;
  std::vector<Feature> features;
  std::vector<int> output_strokes;
  PayoffFn payoff;
};

RallyGame BuildPastGame(const Rally& rally, const Forecaster& forecaster,
                        const PayoffOptions& options);
RallyGame BuildPlayerGame(const Rally& rally, const Forecaster& forecaster,
                          const PayoffOptions& options);

// Shapley values indexed by (feature, output stroke, component).
class AttributionMatrix {
 public:
  AttributionMatrix() = default;
  AttributionMatrix(std::string rally_id, int tau, Game game, Method method,
                    std::vector<Feature> features,
                    std::vector<int> output_strokes);

  double value(size_t feature, size_t output, Component c) const {
    return values_[Index(feature, output, c)];
  }
  void set_value(size_t feature, size_t output, Component c, double v) {
    values_[Index(feature, output, c)] = v;
  }
  std::optional<double> stderr_at(size_t feature, size_t output,
                                  Component c) const;
  void set_stderr(size_t feature, size_t output, Component c, double v);

  const std::string& rally_id() const { return rally_id_; }
  int tau() const { return tau_; }
  Game game() const { return game_; }
  Method method() const { return method_; }
  const std::vector<Feature>& features() const { return features_; }
  const std::vector<int>& output_strokes() const { return output_strokes_; }
  int64_t n_evaluations() const { return n_evaluations_; }
  void set_n_evaluations(int64_t n) { n_evaluations_ = n; }

  // v(N) and v(empty) per (output, component); empty when not recorded.
  const PayoffVector& full_payoff() const { return full_payoff_; }
  const PayoffVector& empty_payoff() const { return empty_payoff_; }
  void set_boundary_payoffs(PayoffVector full, PayoffVector empty) {
    full_payoff_ = std::move(full);
    empty_payoff_ = std::move(empty);
  }

  // Largest |sum_i phi_i - (v(N) - v(empty))| over all cells.
  double EfficiencyGap() const;

 private:
  size_t Index(size_t f, size_t o, Component c) const {
    return (f * output_strokes_.size() + o) * kNumComponents +
           static_cast<size_t>(c);
  }

  std::string rally_id_;
  int tau_ = 0;
  Game game_ = Game::kPast;
  Method method_ = Method::kExact;
  std::vector<Feature> features_;
  std::vector<int> output_strokes_;
  std::vector<double> values_;
  std::vector<double> stderr_;  // NaN = not available
  int64_t n_evaluations_ = 0;
  PayoffVector full_payoff_;
  PayoffVector empty_payoff_;
};

// `rally.tau` must be set.
AttributionMatrix Attribute(const Rally& rally, const Forecaster& forecaster,
                            Game game, const MethodOptions& method,
                            const PayoffOptions& payoff = {});

using ComponentValues = std::array<double, kNumComponents>;

// Mean over output strokes, per feature.
std::vector<ComponentValues> AggregateRally(const AttributionMatrix& matrix);

// Mean of the two player values, per output stroke. Player games only.
std::vector<ComponentValues> CombinePlayers(const AttributionMatrix& matrix);

// One number per component summarising the rally: the mean over features of
// the per-feature aggregates (past game), or the mean over output strokes of
// the combined player values (player game).
ComponentValues RallyScalar(const AttributionMatrix& matrix);

// Player-game scalar with the other aggregation order: per-player means over
// output strokes, then the mean of both players.
ComponentValues RallyScalarPlayersLast(const AttributionMatrix& matrix);

struct GlobalAggregate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n = 0;
};

inline constexpr int kDefaultBootstrapResamples = 1000;

// Mean with a percentile-bootstrap confidence interval.
GlobalAggregate AggregateGlobal(std::span<const double> values,
                                int resamples = kDefaultBootstrapResamples,
                                uint64_t seed = 0, double level = 0.95);

}  // namespace rallyshap

#endif  // RALLYSHAP_ATTRIBUTION_H_
