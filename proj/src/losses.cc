#include "rallyshap/losses.h"

#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "rallyshap/error.h"

namespace rallyshap {

ShotDistribution ShotDistribution::Uniform() {
  ShotDistribution d;
  d.probs.fill(1.0 / kNumShotTypes);
  return d;
}

ShotDistribution ShotDistribution::OneHot(ShotType shot) {
  ShotDistribution d;
  d.probs[ShotCode(shot)] = 1.0;
  return d;
}

ShotType ShotDistribution::Argmax() const {
  int best = 0;
  for (int i = 1; i < kNumShotTypes; ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return static_cast<ShotType>(best);
}

bool IsValid(const ShotDistribution& dist) {
  double sum = 0.0;
  for (const double p : dist.probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= 1e-12;
}

bool IsValid(const AreaDistribution& dist) {
  return std::isfinite(dist.mu_x) && std::isfinite(dist.mu_y) &&
         std::isfinite(dist.sigma_x) && std::isfinite(dist.sigma_y) &&
         std::isfinite(dist.rho) && dist.sigma_x > 0.0 && dist.sigma_y > 0.0 &&
         std::abs(dist.rho) < 1.0;
}

double CrossEntropy(const ShotDistribution& dist, ShotType truth) {
  Require(IsValid(dist), "CrossEntropy: invalid shot distribution");
  return -std::log(dist[truth] + kProbabilityFloor);
}

double GaussianNll(const AreaDistribution& dist, const Coord& truth) {
  Require(IsValid(dist), "GaussianNll: invalid area distribution");
  const double dx = (truth.x - dist.mu_x) / dist.sigma_x;
  const double dy = (truth.y - dist.mu_y) / dist.sigma_y;
  const double one_minus_rho2 = 1.0 - dist.rho * dist.rho;
  const double z = dx * dx - 2.0 * dist.rho * dx * dy + dy * dy;
  // Summed logs: sigma_x * sigma_y underflows for near-degenerate oracles.
  return std::log(2.0 * std::numbers::pi) + std::log(dist.sigma_x) +
         std::log(dist.sigma_y) + 0.5 * std::log(one_minus_rho2) +
         z / (2.0 * one_minus_rho2);
}

StrokeLoss ComputeStrokeLoss(const ShotDistribution& shot,
                             const AreaDistribution& area,
                             const Stroke& truth) {
  StrokeLoss loss;
  loss.ce = CrossEntropy(shot, truth.shot);
  loss.nll = GaussianNll(area, truth.area);
  loss.total = loss.ce + loss.nll;
  return loss;
}

RallyLoss ComputeRallyLoss(std::span<const StrokePrediction> predictions,
                           std::span<const Stroke> truth) {
  Require(!predictions.empty() && predictions.size() == truth.size(),
          fmt::format("ComputeRallyLoss: {} predictions vs {} truth strokes",
                      predictions.size(), truth.size()));
  RallyLoss out;
  out.steps.reserve(predictions.size());
  for (size_t i = 0; i < predictions.size(); ++i) {
    out.steps.push_back(
        ComputeStrokeLoss(predictions[i].shot, predictions[i].area, truth[i]));
    out.mean_ce += out.steps.back().ce;
    out.mean_nll += out.steps.back().nll;
    out.mean_total += out.steps.back().total;
  }
  const double n = static_cast<double>(predictions.size());
  out.mean_ce /= n;
  out.mean_nll /= n;
  out.mean_total /= n;
  return out;
}

Metrics EvalMetrics(std::span<const std::vector<Coord>> samples,
                    std::span<const ShotDistribution> shot_dists,
                    std::span<const Stroke> truth) {
  Require(!samples.empty(), "EvalMetrics: K must be >= 1");
  Require(!truth.empty() && shot_dists.size() == truth.size(),
          "EvalMetrics: shot distributions must match the truth length");
  for (const auto& seq : samples) {
    Require(seq.size() == truth.size(),
            "EvalMetrics: sampled sequence length differs from truth");
  }

  // Selection is by summed squared error; exact ties fall back to the summed
  // absolute error and then to the coordinates themselves so that the result
  // does not depend on sample order.
  auto errors = [&](size_t k) {
    double sse = 0.0;
    double sae = 0.0;
    for (size_t i = 0; i < truth.size(); ++i) {
      const double dx = samples[k][i].x - truth[i].area.x;
      const double dy = samples[k][i].y - truth[i].area.y;
      sse += dx * dx + dy * dy;
      sae += std::abs(dx) + std::abs(dy);
    }
    return std::pair{sse, sae};
  };
  auto coords_less = [&](size_t a, size_t b) {
    for (size_t i = 0; i < truth.size(); ++i) {
      const Coord& ca = samples[a][i];
      const Coord& cb = samples[b][i];
      if (ca.x != cb.x) return ca.x < cb.x;
      if (ca.y != cb.y) return ca.y < cb.y;
    }
    return false;
  };
  size_t best = 0;
  auto best_err = errors(0);
  for (size_t k = 1; k < samples.size(); ++k) {
    const auto err = errors(k);
    if (err < best_err || (err == best_err && coords_less(k, best))) {
      best = k;
      best_err = err;
    }
  }

  Metrics m;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double dx = samples[best][i].x - truth[i].area.x;
    const double dy = samples[best][i].y - truth[i].area.y;
    m.mse += dx * dx + dy * dy;
    m.mae += std::abs(dx) + std::abs(dy);
    m.ce += CrossEntropy(shot_dists[i], truth[i].shot);
  }
  const double n = static_cast<double>(truth.size());
  m.mse /= 2.0 * n;
  m.mae /= 2.0 * n;
  m.ce /= n;
  return m;
}

}  // namespace rallyshap
