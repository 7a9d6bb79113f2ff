#include "rallyshap/losses.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rallyshap/error.h"
#include "rallyshap/random.h"

namespace rallyshap {
namespace {

constexpr double kLn2Pi = 1.8378770664093453;

// Negative log of the explicitly written bivariate normal density.
double DensityOracleNll(const AreaDistribution& d, const Coord& t) {
  const double sx = d.sigma_x;
  const double sy = d.sigma_y;
  const double r = d.rho;
  const double ex = (t.x - d.mu_x) / sx;
  const double ey = (t.y - d.mu_y) / sy;
  const double q = (ex * ex - 2.0 * r * ex * ey + ey * ey) / (1.0 - r * r);
  const double density = std::exp(-0.5 * q) /
                         (2.0 * std::numbers::pi * sx * sy * std::sqrt(1.0 - r * r));
  return -std::log(density);
}

Stroke At(ShotType shot, Coord c) {
  return Stroke{PlayerRole::kB, "p", shot, c};
}

TEST(CrossEntropy, UnitValues) {
  const auto uniform = ShotDistribution::Uniform();
  for (int s = 0; s < kNumShotTypes; ++s) {
    EXPECT_NEAR(CrossEntropy(uniform, ShotFromCode(s)), std::log(10.0), 1e-9);
  }
  EXPECT_NEAR(CrossEntropy(ShotDistribution::OneHot(ShotType::kDrop),
                           ShotType::kDrop),
              0.0, 1e-11);
  ShotDistribution half{};
  half.probs[2] = 0.5;
  half.probs[3] = 0.5;
  EXPECT_NEAR(CrossEntropy(half, ShotType::kSmash), std::log(2.0), 1e-11);
  // The floor keeps an impossible outcome finite.
  EXPECT_NEAR(CrossEntropy(half, ShotType::kClear), -std::log(1e-12), 1e-9);
}

TEST(CrossEntropy, RejectsInvalidDistribution) {
  ShotDistribution bad{};
  bad.probs[0] = 0.7;
  EXPECT_THROW(CrossEntropy(bad, ShotType::kClear), ContractViolation);
  ShotDistribution negative = ShotDistribution::Uniform();
  negative.probs[0] = -0.1;
  negative.probs[1] = 0.3;
  EXPECT_THROW(CrossEntropy(negative, ShotType::kClear), ContractViolation);
}

TEST(GaussianNll, UnitValues) {
  EXPECT_NEAR(GaussianNll({0.1, 0.4, 1.0, 1.0, 0.0}, {0.1, 0.4}), kLn2Pi, 1e-9);
  EXPECT_NEAR(GaussianNll({0.0, 0.0, 1.0, 1.0, 0.0}, {1.0, 0.0}), kLn2Pi + 0.5,
              1e-9);
}

TEST(GaussianNll, RejectsInvalidParameters) {
  EXPECT_THROW(GaussianNll({0, 0, 0.0, 1.0, 0.0}, {}), ContractViolation);
  EXPECT_THROW(GaussianNll({0, 0, 1.0, 1.0, 1.0}, {}), ContractViolation);
  EXPECT_THROW(GaussianNll({0, 0, 1.0, std::nan(""), 0.0}, {}),
               ContractViolation);
}

TEST(GaussianNll, MatchesDensityOracle) {
  StreamRng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const AreaDistribution d{rng.Uniform(-0.5, 0.5), rng.Uniform(0.0, 1.0),
                             rng.Uniform(0.05, 2.0), rng.Uniform(0.05, 2.0),
                             rng.Uniform(-0.95, 0.95)};
    // Within a few sigma so the explicit density stays representable.
    const Coord t{d.mu_x + d.sigma_x * rng.Uniform(-4.0, 4.0),
                  d.mu_y + d.sigma_y * rng.Uniform(-4.0, 4.0)};
    worst = std::max(worst, std::abs(GaussianNll(d, t) - DensityOracleNll(d, t)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(GaussianNll, FiniteForNearDegenerateSigma) {
  const double nll = GaussianNll({0.2, 0.3, 1e-150, 1e-150, 0.0}, {0.2, 0.3});
  EXPECT_TRUE(std::isfinite(nll));
  EXPECT_LT(nll, -600.0);
}

TEST(GaussianNll, MinimizedAtTruth) {
  const Coord t{0.12, 0.61};
  const double h = 1e-5;
  for (const double rho : {-0.6, 0.0, 0.45}) {
    auto f = [&](double mx, double my) {
      return GaussianNll({mx, my, 0.2, 0.35, rho}, t);
    };
    const double gx = (f(t.x + h, t.y) - f(t.x - h, t.y)) / (2 * h);
    const double gy = (f(t.x, t.y + h) - f(t.x, t.y - h)) / (2 * h);
    EXPECT_LT(std::hypot(gx, gy), 1e-6);
    EXPECT_LT(f(t.x, t.y), f(t.x + 0.01, t.y - 0.02));
  }
}

TEST(GaussianNll, DensityIntegratesToOne) {
  const AreaDistribution d{0.1, -0.2, 0.3, 0.4, 0.5};
  const double step = 0.01;
  double mass = 0.0;
  for (double x = -2.5; x < 2.5; x += step) {
    for (double y = -3.0; y < 3.0; y += step) {
      mass += std::exp(-GaussianNll(d, {x + step / 2, y + step / 2}));
    }
  }
  EXPECT_NEAR(mass * step * step, 1.0, 1e-3);
}

TEST(RallyLoss, SingleStep) {
  const std::vector<StrokePrediction> preds = {
      {ShotDistribution::OneHot(ShotType::kLob), {0.2, 0.8, 1.0, 1.0, 0.0}}};
  const std::vector<Stroke> truth = {At(ShotType::kLob, {0.2, 0.8})};
  const RallyLoss loss = ComputeRallyLoss(preds, truth);
  ASSERT_EQ(loss.steps.size(), 1u);
  EXPECT_NEAR(loss.steps[0].ce, 0.0, 1e-11);
  EXPECT_NEAR(loss.steps[0].nll, kLn2Pi, 1e-12);
  EXPECT_EQ(loss.steps[0].total, loss.steps[0].ce + loss.steps[0].nll);
}

TEST(RallyLoss, IdenticalStepsMeanEqualsStep) {
  const StrokePrediction p{ShotDistribution::Uniform(), {0, 0.5, 0.3, 0.3, 0.1}};
  const std::vector<StrokePrediction> preds = {p, p};
  const std::vector<Stroke> truth(2, At(ShotType::kDrive, {0.1, 0.2}));
  const RallyLoss loss = ComputeRallyLoss(preds, truth);
  EXPECT_DOUBLE_EQ(loss.mean_ce, loss.steps[0].ce);
  EXPECT_DOUBLE_EQ(loss.mean_nll, loss.steps[0].nll);
  EXPECT_DOUBLE_EQ(loss.mean_total, loss.steps[0].total);
}

TEST(RallyLoss, HeterogeneousStepsAverage) {
  ShotDistribution half{};
  half.probs[0] = 0.5;
  half.probs[4] = 0.5;
  const std::vector<StrokePrediction> preds = {
      {ShotDistribution::Uniform(), {0, 0, 1, 1, 0}},
      {half, {0, 0, 1, 1, 0}},
      {ShotDistribution::OneHot(ShotType::kDrop), {0, 0, 2, 1, 0}}};
  const std::vector<Stroke> truth = {At(ShotType::kClear, {0, 0}),
                                     At(ShotType::kDrop, {0.4, 0.6}),
                                     At(ShotType::kDrop, {0, 0})};
  const double ce[] = {std::log(10.0), std::log(2.0), 0.0};
  const double nll[] = {kLn2Pi, kLn2Pi + 0.5 * (0.16 + 0.36),
                        kLn2Pi + std::log(2.0)};
  const RallyLoss loss = ComputeRallyLoss(preds, truth);
  EXPECT_NEAR(loss.mean_ce, (ce[0] + ce[1] + ce[2]) / 3, 1e-11);
  EXPECT_NEAR(loss.mean_nll, (nll[0] + nll[1] + nll[2]) / 3, 1e-12);
  EXPECT_NEAR(loss.mean_total, loss.mean_ce + loss.mean_nll, 1e-12);
  for (const StrokeLoss& s : loss.steps) EXPECT_EQ(s.total, s.ce + s.nll);
}

TEST(RallyLoss, LengthMismatchIsRejected) {
  const std::vector<StrokePrediction> preds(2);
  const std::vector<Stroke> truth(3);
  EXPECT_THROW(ComputeRallyLoss(preds, truth), ContractViolation);
  EXPECT_THROW(ComputeRallyLoss({}, {}), ContractViolation);
}

class EvalMetricsTest : public ::testing::Test {
 protected:
  std::vector<Stroke> truth_ = {At(ShotType::kClear, {0.1, 0.9}),
                                At(ShotType::kSmash, {-0.2, 0.4}),
                                At(ShotType::kNetShot, {0.3, 0.1})};
  std::vector<ShotDistribution> dists_ =
      std::vector<ShotDistribution>(3, ShotDistribution::Uniform());

  std::vector<Coord> Exact() const {
    std::vector<Coord> c;
    for (const Stroke& s : truth_) c.push_back(s.area);
    return c;
  }
};

TEST_F(EvalMetricsTest, ExactSampleGivesZeroError) {
  const std::vector<std::vector<Coord>> samples = {Exact()};
  const Metrics m = EvalMetrics(samples, dists_, truth_);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_NEAR(m.ce, std::log(10.0), 1e-9);
}

TEST_F(EvalMetricsTest, SelectsExactAmongTwo) {
  std::vector<Coord> offset = Exact();
  for (Coord& c : offset) c.x += 0.1;
  const std::vector<std::vector<Coord>> samples = {offset, Exact()};
  EXPECT_EQ(EvalMetrics(samples, dists_, truth_).mse, 0.0);
}

TEST_F(EvalMetricsTest, MatchesExhaustiveSelection) {
  StreamRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Coord>> samples(3);
    for (auto& s : samples) {
      for (int i = 0; i < 3; ++i) {
        s.push_back({rng.Uniform(-0.5, 0.5), rng.Uniform(0.0, 1.0)});
      }
    }
    double best_sse = INFINITY;
    double best_mae = 0.0;
    for (const auto& s : samples) {
      double sse = 0.0;
      double sae = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double dx = s[i].x - truth_[i].area.x;
        const double dy = s[i].y - truth_[i].area.y;
        sse += dx * dx + dy * dy;
        sae += std::abs(dx) + std::abs(dy);
      }
      if (sse < best_sse) {
        best_sse = sse;
        best_mae = sae / 6.0;
      }
    }
    const Metrics m = EvalMetrics(samples, dists_, truth_);
    EXPECT_NEAR(m.mse, best_sse / 6.0, 1e-15);
    EXPECT_NEAR(m.mae, best_mae, 1e-15);

    // Permuting the samples or adding a strictly worse one changes nothing.
    std::vector<std::vector<Coord>> shuffled = {samples[2], samples[0],
                                                samples[1]};
    std::vector<Coord> worse(3, Coord{5.0, 5.0});
    shuffled.push_back(worse);
    const Metrics m2 = EvalMetrics(shuffled, dists_, truth_);
    EXPECT_EQ(m2.mse, m.mse);
    EXPECT_EQ(m2.mae, m.mae);
  }
}

TEST_F(EvalMetricsTest, RejectsEmptyAndMismatched) {
  EXPECT_THROW(EvalMetrics({}, dists_, truth_), ContractViolation);
  const std::vector<std::vector<Coord>> short_sample = {{Coord{}}};
  EXPECT_THROW(EvalMetrics(short_sample, dists_, truth_), ContractViolation);
}

TEST(ShotDistribution, ArgmaxTieBreaksToLowestCode) {
  ShotDistribution d{};
  d.probs[3] = 0.4;
  d.probs[6] = 0.4;
  d.probs[1] = 0.2;
  EXPECT_EQ(d.Argmax(), ShotType::kPushRush);
  EXPECT_EQ(ShotDistribution::Uniform().Argmax(), ShotType::kClear);
}

}  // namespace
}  // namespace rallyshap
