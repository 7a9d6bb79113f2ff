#ifndef RALLYSHAP_SHAPLEY_H_
#define RALLYSHAP_SHAPLEY_H_

#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace rallyshap {

// Bit i set = feature i kept at its original value.
using CoalitionMask = uint64_t;
// One payoff per output entry; games are evaluated for all entries at once.
using PayoffVector = std::vector<double>;
using PayoffFn = std::function<PayoffVector(CoalitionMask)>;

inline constexpr int kDefaultExactCap = 16;
inline constexpr int kMaxFeatures = 63;

inline CoalitionMask FullCoalition(int n_features) {
  return n_features >= 64 ? ~CoalitionMask{0}
                          : (CoalitionMask{1} << n_features) - 1;
}

// Memoized payoff function. Safe for concurrent Get(); the first completed
// evaluation of a coalition is kept (all evaluations agree by determinism).
class PayoffTable {
 public:
  PayoffTable(int n_features, PayoffFn fn);

  const PayoffVector& Get(CoalitionMask mask);
  // Evaluates all 2^n coalitions, spread over `threads` workers.
  void EvaluateAll(int threads);

  int n_features() const { return n_features_; }
  int64_t evaluations() const;

 private:
  int n_features_;
  PayoffFn fn_;
  mutable std::mutex mutex_;
  std::unordered_map<CoalitionMask, PayoffVector> cache_;
};

// Shapley weight |S|! (n-1-|S|)! / n!.
double ShapleyWeight(int n_features, int coalition_size);

// phi[feature][entry]. Throws ContractViolation when n_features exceeds `cap`
// and std::logic_error if the efficiency identity fails (which would mean an
// engine bug).
std::vector<PayoffVector> ExactShapley(PayoffTable& table,
                                       int cap = kDefaultExactCap);

std::vector<double> ExactShapley(
    int n_features, const std::function<double(CoalitionMask)>& payoff,
    int cap = kDefaultExactCap);

struct SampledEstimate {
  std::vector<PayoffVector> phi;
  // Sample standard deviation of the marginals over sqrt(m); NaN for m = 1.
  std::vector<PayoffVector> stderr_;
};

// Permutation sampling: m seeded uniform orderings, each feature credited
// with its marginal contribution at its position.
SampledEstimate SampledShapley(PayoffTable& table, int permutations,
                               uint64_t seed);

// v(N) - v(N \ {i}).
std::vector<PayoffVector> LeaveOneOut(PayoffTable& table);

// Pairwise (cascade) summation.
double PairwiseSum(std::span<const double> values);

}  // namespace rallyshap

#endif  // RALLYSHAP_SHAPLEY_H_
