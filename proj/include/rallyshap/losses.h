#ifndef RALLYSHAP_LOSSES_H_
#define RALLYSHAP_LOSSES_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rallyshap/rally.h"

namespace rallyshap {

// Floor added to the true-class probability before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

struct ShotDistribution {
  std::array<double, kNumShotTypes> probs{};

  static ShotDistribution Uniform();
  static ShotDistribution OneHot(ShotType shot);

  double operator[](ShotType shot) const { return probs[ShotCode(shot)]; }
  // Most likely shot; ties go to the lowest code.
  ShotType Argmax() const;

  friend bool operator==(const ShotDistribution&,
                         const ShotDistribution&) = default;
};

// Bivariate Gaussian over the landing coordinates.
struct AreaDistribution {
  double mu_x = 0.0;
  double mu_y = 0.5;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double rho = 0.0;

  Coord Mean() const { return {mu_x, mu_y}; }

  friend bool operator==(const AreaDistribution&,
                         const AreaDistribution&) = default;
};

bool IsValid(const ShotDistribution& dist);
bool IsValid(const AreaDistribution& dist);

struct StrokeLoss {
  double ce = 0.0;
  double nll = 0.0;
  double total = 0.0;
};

struct RallyLoss {
  std::vector<StrokeLoss> steps;
  double mean_ce = 0.0;
  double mean_nll = 0.0;
  double mean_total = 0.0;
};

struct Metrics {
  double ce = 0.0;
  double mse = 0.0;
  double mae = 0.0;
};

double CrossEntropy(const ShotDistribution& dist, ShotType truth);
double GaussianNll(const AreaDistribution& dist, const Coord& truth);
StrokeLoss ComputeStrokeLoss(const ShotDistribution& shot,
                             const AreaDistribution& area,
                             const Stroke& truth);

struct StrokePrediction {
  ShotDistribution shot;
  AreaDistribution area;

  friend bool operator==(const StrokePrediction&,
                         const StrokePrediction&) = default;
};

RallyLoss ComputeRallyLoss(std::span<const StrokePrediction> predictions,
                           std::span<const Stroke> truth);

// Best-of-K benchmark metrics. The sampled coordinate sequence with the least
// summed squared error is selected; MSE and MAE are then averaged over
// strokes and both coordinates. CE is averaged over `shot_dists`.
Metrics EvalMetrics(std::span<const std::vector<Coord>> samples,
                    std::span<const ShotDistribution> shot_dists,
                    std::span<const Stroke> truth);

}  // namespace rallyshap

#endif  // RALLYSHAP_LOSSES_H_
