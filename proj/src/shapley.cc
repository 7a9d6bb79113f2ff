#include "rallyshap/shapley.h"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "rallyshap/error.h"
#include "rallyshap/parallel.h"
#include "rallyshap/random.h"

namespace rallyshap {

PayoffTable::PayoffTable(int n_features, PayoffFn fn)
    : n_features_(n_features), fn_(std::move(fn)) {
  Require(n_features_ >= 1 && n_features_ <= kMaxFeatures,
          fmt::format("PayoffTable: {} features outside 1..{}", n_features_,
                      kMaxFeatures));
}

const PayoffVector& PayoffTable::Get(CoalitionMask mask) {
  {
    std::lock_guard lock(mutex_);
    const auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
  }
  PayoffVector value = fn_(mask);
  std::lock_guard lock(mutex_);
  return cache_.try_emplace(mask, std::move(value)).first->second;
}

void PayoffTable::EvaluateAll(int threads) {
  Require(n_features_ < 32, "PayoffTable::EvaluateAll: too many features");
  const size_t count = size_t{1} << n_features_;
  ParallelFor(count, threads, [this](size_t mask) { Get(mask); });
}

int64_t PayoffTable::evaluations() const {
  std::lock_guard lock(mutex_);
  return static_cast<int64_t>(cache_.size());
}

double ShapleyWeight(int n_features, int coalition_size) {
  // 1 / (n * C(n-1, s)); the binomial is exact in double for n <= 63.
  const int k = std::min(coalition_size, n_features - 1 - coalition_size);
  double binom = 1.0;
  for (int j = 1; j <= k; ++j) {
    binom = binom * (n_features - 1 - k + j) / j;
  }
  return 1.0 / (static_cast<double>(n_features) * std::round(binom));
}

double PairwiseSum(std::span<const double> values) {
  constexpr size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

namespace {

void CheckEfficiency(PayoffTable& table,
                     const std::vector<PayoffVector>& phi) {
  const int n = table.n_features();
  const PayoffVector& full = table.Get(FullCoalition(n));
  const PayoffVector& empty = table.Get(0);
  for (size_t e = 0; e < full.size(); ++e) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += phi[i][e];
    const double gap = full[e] - empty[e];
    const double scale =
        std::max({1.0, std::abs(full[e]), std::abs(empty[e])});
    if (!(std::abs(sum - gap) <= 1e-9 * scale)) {
      throw std::logic_error(fmt::format(
          "Shapley efficiency violated at entry {}: sum {} vs v(N)-v(0) {}", e,
          sum, gap));
    }
  }
}

}  // namespace

std::vector<PayoffVector> ExactShapley(PayoffTable& table, int cap) {
  const int n = table.n_features();
  if (n > cap) {
    throw ContractViolation(fmt::format(
        "exact Shapley refused: {} features exceed the cap of {}", n, cap));
  }
  const size_t entries = table.Get(0).size();
  const CoalitionMask full = FullCoalition(n);
  const size_t half = size_t{1} << (n - 1);

  std::vector<double> weights(n);
  for (int s = 0; s < n; ++s) weights[s] = ShapleyWeight(n, s);

  std::vector<PayoffVector> phi(n, PayoffVector(entries, 0.0));
  std::vector<std::vector<double>> terms(entries, std::vector<double>(half));
  for (int i = 0; i < n; ++i) {
    const CoalitionMask bit = CoalitionMask{1} << i;
    const CoalitionMask others = full & ~bit;
    // Enumerate every subset of `others` (Gosper-free submask walk).
    size_t t = 0;
    CoalitionMask s = 0;
    do {
      const PayoffVector& with = table.Get(s | bit);
      const PayoffVector& without = table.Get(s);
      const double w = weights[std::popcount(s)];
      for (size_t e = 0; e < entries; ++e) {
        terms[e][t] = w * (with[e] - without[e]);
      }
      ++t;
      s = (s - others) & others;
    } while (s != 0);
    for (size_t e = 0; e < entries; ++e) phi[i][e] = PairwiseSum(terms[e]);
  }
  CheckEfficiency(table, phi);
  return phi;
}

std::vector<double> ExactShapley(
    int n_features, const std::function<double(CoalitionMask)>& payoff,
    int cap) {
  PayoffTable table(n_features, [&payoff](CoalitionMask m) {
    return PayoffVector{payoff(m)};
  });
  const auto phi = ExactShapley(table, cap);
  std::vector<double> out;
  out.reserve(phi.size());
  for (const auto& p : phi) out.push_back(p[0]);
  return out;
}

SampledEstimate SampledShapley(PayoffTable& table, int permutations,
                               uint64_t seed) {
  Require(permutations >= 1, "SampledShapley: m must be >= 1");
  const int n = table.n_features();
  const size_t entries = table.Get(0).size();

  // Welford accumulators per (feature, entry).
  std::vector<PayoffVector> mean(n, PayoffVector(entries, 0.0));
  std::vector<PayoffVector> m2(n, PayoffVector(entries, 0.0));
  StreamRng rng(DeriveKey(seed, 0x73686170ULL));
  std::vector<int> order(n);
  for (int k = 1; k <= permutations; ++k) {
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.Below(static_cast<uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    CoalitionMask mask = 0;
    const PayoffVector* prev = &table.Get(mask);
    for (const int f : order) {
      mask |= CoalitionMask{1} << f;
      const PayoffVector* cur = &table.Get(mask);
      for (size_t e = 0; e < entries; ++e) {
        const double x = (*cur)[e] - (*prev)[e];
        const double delta = x - mean[f][e];
        mean[f][e] += delta / k;
        m2[f][e] += delta * (x - mean[f][e]);
      }
      prev = cur;
    }
  }

  SampledEstimate out;
  out.phi = mean;
  out.stderr_.assign(n, PayoffVector(entries, 0.0));
  for (int f = 0; f < n; ++f) {
    for (size_t e = 0; e < entries; ++e) {
      out.stderr_[f][e] =
          permutations > 1
              ? std::sqrt(m2[f][e] / (permutations - 1)) /
                    std::sqrt(static_cast<double>(permutations))
              : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

std::vector<PayoffVector> LeaveOneOut(PayoffTable& table) {
  const int n = table.n_features();
  const CoalitionMask full = FullCoalition(n);
  const PayoffVector& v_full = table.Get(full);
  std::vector<PayoffVector> phi(n, PayoffVector(v_full.size()));
  for (int i = 0; i < n; ++i) {
    const PayoffVector& v_drop = table.Get(full & ~(CoalitionMask{1} << i));
    for (size_t e = 0; e < v_full.size(); ++e) phi[i][e] = v_full[e] - v_drop[e];
  }
  return phi;
}

}  // namespace rallyshap
