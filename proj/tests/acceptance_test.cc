// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "rallyshap/attribution.h"
#include "rallyshap/cli.h"
#include "rallyshap/error.h"
#include "rallyshap/forecast.h"
#include "rallyshap/losses.h"
#include "rallyshap/random.h"
#include "rallyshap/report.h"
#include "rallyshap/shapley.h"
#include "rallyshap/synthdata.h"

namespace rallyshap {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::vector<double> PermutationOracle(int n, const std::vector<double>& v) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  double count = 0;
  do {
    CoalitionMask mask = 0;
    for (const int f : order) {
      const CoalitionMask next = mask | (CoalitionMask{1} << f);
      phi[f] += v[next] - v[mask];
      mask = next;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= count;
  return phi;
}

std::vector<double> RandomTable(StreamRng& rng, int n) {
  std::vector<double> v(size_t{1} << n);
  for (double& x : v) x = rng.Uniform(-10.0, 10.0);
  return v;
}

// ---------------------------------------------------------------------------

Outcome Criterion1() {
  const auto start = Clock::now();
  StreamRng rng(DeriveKey(2024, 1));
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 6;
    const auto v = RandomTable(rng, n);
    const auto phi = ExactShapley(n, [&](CoalitionMask m) { return v[m]; });
    const auto oracle = PermutationOracle(n, v);
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(phi[i] - oracle[i]));
  }
  const double secs = Seconds(start);
  return {worst <= 1e-10 && secs < 5.0,
          fmt::format("200 tables, |N| 1..6: max |dphi| = {:.2e} (<= 1e-10), {:.3f} s (< 5 s)",
                      worst, secs)};
}

// World used by criteria 2, 5 and 6.
struct World {
  double lambda;
  Dataset train;
  Dataset test;
  std::shared_ptr<StyleForecaster> style;
  std::shared_ptr<MarkovForecaster> markov;
  std::shared_ptr<BlendForecaster> blend;
};

World MakeSyntheticWorld(double lambda, int n_rallies, uint64_t seed) {
  GeneratorConfig config;
  config.n_rallies = n_rallies;
  config.lambda = lambda;
  config.seed = seed;
  World w;
  w.lambda = lambda;
  std::tie(w.train, w.test) = SplitDataset(GenerateDataset(config), 0.8, seed);
  w.style = std::make_shared<StyleForecaster>(FitStyle(w.train));
  w.markov = std::make_shared<MarkovForecaster>(FitMarkov(w.train));
  w.blend = std::make_shared<BlendForecaster>(w.style, w.markov, lambda);
  return w;
}

Outcome Criterion2() {
  // Efficiency and dummy over a 1000-rally run.
  GeneratorConfig config;
  config.n_rallies = 1000;
  config.lambda = 0.5;
  config.seed = 77;
  const Dataset data = GenerateDataset(config);
  const auto style = std::make_shared<StyleForecaster>(FitStyle(data));
  const auto markov = std::make_shared<MarkovForecaster>(FitMarkov(data));
  const BlendForecaster blend(style, markov, 0.5);

  double worst_gap = 0.0;
  double worst_dummy = 0.0;
  int matrices = 0;
  for (const Rally& r : data) {
    if (r.size() < 3) continue;
    const int tau = std::min(8, r.size() - 1);
    const Rally rally = WithTau(r, tau);
    for (const Game game : {Game::kPast, Game::kPlayer}) {
      const AttributionMatrix m = Attribute(rally, blend, game, MethodOptions{});
      worst_gap = std::max(worst_gap, m.EfficiencyGap());
      ++matrices;
    }
    const AttributionMatrix dummy =
        Attribute(rally, *style, Game::kPast, MethodOptions{});
    for (size_t f = 0; f < dummy.features().size(); ++f) {
      for (size_t o = 0; o < dummy.output_strokes().size(); ++o) {
        for (const Component c : kComponents) {
          worst_dummy = std::max(worst_dummy, std::abs(dummy.value(f, o, c)));
        }
      }
    }
  }

  // Symmetry and linearity on constructed payoffs.
  StreamRng rng(DeriveKey(2024, 2));
  double worst_sym = 0.0;
  double worst_lin = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 7;
    const auto v1 = RandomTable(rng, n);
    const auto v2 = RandomTable(rng, n);
    const auto p1 = ExactShapley(n, [&](CoalitionMask m) { return v1[m]; });
    const auto p2 = ExactShapley(n, [&](CoalitionMask m) { return v2[m]; });
    const auto p12 = ExactShapley(n, [&](CoalitionMask m) { return v1[m] + v2[m]; });
    for (int i = 0; i < n; ++i) {
      worst_lin = std::max(worst_lin, std::abs(p12[i] - (p1[i] + p2[i])));
    }
    // Symmetrize features 0 and 1.
    const auto sym = ExactShapley(n, [&](CoalitionMask m) {
      const CoalitionMask swapped =
          (m & ~CoalitionMask{3}) | ((m & 1) << 1) | ((m >> 1) & 1);
      return v1[m] + v1[swapped];
    });
    worst_sym = std::max(worst_sym, std::abs(sym[0] - sym[1]));
  }
  const bool pass = worst_gap <= 1e-9 && worst_dummy <= 1e-12 &&
                    worst_sym <= 1e-12 && worst_lin <= 1e-9;
  return {pass,
          fmt::format("efficiency max gap {:.2e} over {} matrices (<= 1e-9); "
                      "dummy max |phi| {:.2e} (<= 1e-12); symmetry {:.2e} "
                      "(<= 1e-12); linearity {:.2e} (<= 1e-9)",
                      worst_gap, matrices, worst_dummy, worst_sym, worst_lin)};
}

Outcome Criterion3() {
  StreamRng rng(DeriveKey(2024, 3));
  int good = 0;
  int features_within = 0;
  for (int t = 0; t < 100; ++t) {
    const auto v = RandomTable(rng, 8);
    PayoffTable table(8, [&](CoalitionMask m) { return PayoffVector{v[m]}; });
    const auto exact = ExactShapley(table);
    const SampledEstimate est = SampledShapley(table, 2000, DeriveKey(3, t));
    bool all = true;
    for (int i = 0; i < 8; ++i) {
      const bool ok = std::abs(est.phi[i][0] - exact[i][0]) <= 3.0 * est.stderr_[i][0];
      features_within += ok;
      all = all && ok;
    }
    good += all;
  }
  return {good >= 95,
          fmt::format("{}/100 trials with all 8 features within 3 SE (>= 95); "
                      "{}/800 individual estimates within 3 SE",
                      good, features_within)};
}

Outcome Criterion4() {
  const double ce = CrossEntropy(ShotDistribution::Uniform(), ShotType::kSmash);
  const double nll = GaussianNll({0.1, 0.6, 1.0, 1.0, 0.0}, {0.1, 0.6});
  StreamRng rng(DeriveKey(2024, 4));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const AreaDistribution d{rng.Uniform(-0.5, 0.5), rng.Uniform(0.0, 1.0),
                             rng.Uniform(0.05, 1.5), rng.Uniform(0.05, 1.5),
                             rng.Uniform(-0.95, 0.95)};
    const Coord t{d.mu_x + d.sigma_x * rng.Uniform(-4, 4),
                  d.mu_y + d.sigma_y * rng.Uniform(-4, 4)};
    const double ex = (t.x - d.mu_x) / d.sigma_x;
    const double ey = (t.y - d.mu_y) / d.sigma_y;
    const double q = (ex * ex - 2 * d.rho * ex * ey + ey * ey) / (1 - d.rho * d.rho);
    const double density =
        std::exp(-0.5 * q) /
        (2 * std::numbers::pi * d.sigma_x * d.sigma_y * std::sqrt(1 - d.rho * d.rho));
    worst = std::max(worst, std::abs(GaussianNll(d, t) + std::log(density)));
  }
  const double ce_err = std::abs(ce - std::log(10.0));
  const double nll_err = std::abs(nll - std::log(2 * std::numbers::pi));
  return {ce_err <= 1e-9 && nll_err <= 1e-9 && worst <= 1e-12,
          fmt::format("CE uniform {:.9f} (err {:.1e}); NLL at mean {:.9f} (err "
                      "{:.1e}); density oracle max err {:.2e} over 1e4 cases",
                      ce, ce_err, nll, nll_err, worst)};
}

struct LambdaResult {
  double lambda;
  GlobalAggregate past;
  GlobalAggregate player;
  int rallies;
};

Outcome Criterion5(std::vector<World>& worlds) {
  // Timed from data generation through fitting and attribution.
  const auto start = Clock::now();
  for (const double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    worlds.push_back(MakeSyntheticWorld(lambda, 2000, 2025));
  }
  const int tau = 8;
  std::vector<LambdaResult> results;
  for (World& w : worlds) {
    std::vector<AttributionRecord> records;
    int rallies = 0;
    for (const Rally& r : w.test) {
      if (r.size() <= tau) continue;
      ++rallies;
      for (const Game game : {Game::kPast, Game::kPlayer}) {
        for (auto& rec : ToRecords(
                 Attribute(WithTau(r, tau), *w.blend, game, MethodOptions{}))) {
          records.push_back(std::move(rec));
        }
      }
    }
    LambdaResult res{w.lambda, {}, {}, rallies};
    for (const GlobalRow& row : GlobalReport(records, 1000, 5)) {
      if (row.component != Component::kMacro) continue;
      (row.game == Game::kPast ? res.past : res.player) = row.aggregate;
    }
    results.push_back(res);
  }
  const double secs = Seconds(start);

  const LambdaResult& zero = results.front();
  const LambdaResult& one = results.back();
  const bool a = std::abs(zero.past.mean) < 1e-9 && zero.player.mean > 0 &&
                 zero.player.ci_low > 0;
  const bool b = one.past.mean > 0 && one.past.ci_low > 0;
  bool c = true;
  for (size_t k = 1; k < results.size(); ++k) {
    const auto& lo = results[k - 1].past;
    const auto& hi = results[k].past;
    const bool overlap = hi.ci_high >= lo.ci_low && lo.ci_high >= hi.ci_low;
    c = c && (hi.mean >= lo.mean || overlap);
  }
  std::string detail;
  for (const auto& r : results) {
    detail += fmt::format(
        "\n    lambda {:.2f}: past {:+.6f} [{:+.6f}, {:+.6f}]  player {:+.6f} "
        "[{:+.6f}, {:+.6f}]  ({} rallies)",
        r.lambda, r.past.mean, r.past.ci_low, r.past.ci_high, r.player.mean,
        r.player.ci_low, r.player.ci_high, r.rallies);
  }
  return {a && b && c && secs < 300.0,
          fmt::format("(a) {} (b) {} (c) {}; {:.1f} s single-threaded (< 300 s); "
                      "macro component, tau 8:{}",
                      a ? "ok" : "FAIL", b ? "ok" : "FAIL", c ? "ok" : "FAIL",
                      secs, detail)};
}

std::string Slurp(const fs::path& p);

// Runs the ablate subcommand and returns its rows keyed by tau.
std::map<int, nlohmann::json> Ablate(const fs::path& dir, const char* target,
                                     std::string& error) {
  std::ostringstream out;
  std::ostringstream err;
  const fs::path sub = dir / target;
  const int code = RunCli(
      {"rallyshap", "--out", sub.string(), "--seed", "6", "--threads", "1",
       "ablate", "--train", (dir / "train.csv").string(), "--test",
       (dir / "test.csv").string(), "--target", target, "--kind", "style",
       "--tau", "8,4,2"},
      out, err);
  std::map<int, nlohmann::json> rows;
  if (code != kExitOk) {
    error = err.str();
    return rows;
  }
  std::istringstream lines(Slurp(sub / "ablation.jsonl"));
  for (std::string line; std::getline(lines, line);) {
    const auto row = nlohmann::json::parse(line);
    rows[row.at("tau").get<int>()] = row;
  }
  return rows;
}

Outcome Criterion6(const World& w) {
  const fs::path dir = fs::temp_directory_path() / "rallyshap_acceptance_ablate";
  fs::remove_all(dir);
  fs::create_directories(dir);
  SaveCsv(w.train, (dir / "train.csv").string());
  SaveCsv(w.test, (dir / "test.csv").string());
  std::string error;
  const auto player = Ablate(dir, "player", error);
  const auto past = Ablate(dir, "past", error);
  fs::remove_all(dir);
  if (player.size() != 3 || past.size() != 3) return {false, "ablate: " + error};

  bool pass = true;
  std::string detail;
  for (const int tau : {8, 4, 2}) {
    const auto& pd = player.at(tau).at("difference");
    const auto& qd = past.at(tau).at("difference");
    const auto& qn = past.at(tau).at("noise");
    bool past_ok = true;
    for (const char* m : {"ce", "mse", "mae"}) {
      past_ok = past_ok && std::abs(qd.at(m).get<double>()) < qn.at(m).get<double>();
    }
    const bool player_ok = pd.at("mse").get<double>() < 0;
    pass = pass && player_ok && past_ok;
    detail += fmt::format(
        "\n    tau {}: player diff CE {:+.5f} MSE {:+.5f} MAE {:+.5f}; past diff "
        "CE {:+.5f} MSE {:+.5f} MAE {:+.5f} vs noise {:.5f}/{:.5f}/{:.5f}",
        tau, pd.at("ce").get<double>(), pd.at("mse").get<double>(),
        pd.at("mae").get<double>(), qd.at("ce").get<double>(),
        qd.at("mse").get<double>(), qd.at("mae").get<double>(),
        qn.at("ce").get<double>(), qn.at("mse").get<double>(),
        qn.at("mae").get<double>());
  }
  return {pass, "ablate on the lambda 0 world, style forecaster:" + detail};
}

Outcome Criterion7() {
  StreamRng rng(DeriveKey(2024, 7));
  int64_t calls = 0;
  int64_t violations = 0;
  Rally r;
  while (calls < 100000) {
    if (calls % 10 == 0) {
      const int n = 3 + static_cast<int>(rng.Below(kMaxRallyLength - 2));
      std::vector<Stroke> strokes;
      r = Rally{"r", "pa", "pb", {}, 0};
      for (int i = 1; i <= n; ++i) {
        const PlayerRole role = RoleAt(i);
        const ShotType shot =
            i == 1 ? (rng.Uniform() < 0.5 ? ShotType::kShortService
                                          : ShotType::kLongService)
                   : ShotFromCode(static_cast<int>(rng.Below(kNumShotTypes)));
        r.strokes.push_back({role, r.PlayerId(role), shot,
                             {rng.Uniform(-0.5, 0.5), rng.Uniform(0.0, 1.0)}});
      }
      r.tau = 2 + static_cast<int>(rng.Below(n - 2));
    }
    const Rally before = r;
    Rally out;
    if (rng.Uniform() < 0.5) {
      std::vector<int> keep;
      for (int i = 2; i <= r.tau; ++i) {
        if (rng.Uniform() < 0.5) keep.push_back(i);
      }
      out = ImputePast(r, keep);
    } else {
      const PlayerRole role = rng.Uniform() < 0.5 ? PlayerRole::kA : PlayerRole::kB;
      out = ImputePlayer(r, role, r.tau + static_cast<int>(rng.Below(r.size() - r.tau + 1)));
    }
    ++calls;
    if (!(out.stroke(1) == r.stroke(1))) ++violations;
    if (!(before == r)) ++violations;
    violations += static_cast<int64_t>(ValidateRally(out).violations.size()) -
                  static_cast<int64_t>(ValidateRally(r).violations.size());
    if (out.size() != r.size()) ++violations;
  }
  return {violations == 0,
          fmt::format("{} imputation calls, {} violations", calls, violations)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs every subcommand into `dir` and returns false on a nonzero exit.
bool Pipeline(const fs::path& dir, int threads, std::string& error) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::string t = std::to_string(threads);
  auto p = [&](const char* f) { return (dir / f).string(); };
  const std::vector<std::vector<std::string>> commands = {
      {"synth", "--n-rallies", "100", "--lambda", "0.5"},
      {"fit", "--kind", "style", "--data", p("train.csv"), "--name", "style.json"},
      {"fit", "--kind", "markov", "--data", p("train.csv"), "--name", "markov.json"},
      {"fit", "--kind", "blend", "--data", p("train.csv"), "--name", "blend.json"},
      {"eval", "--model", p("blend.json"), "--data", p("dataset.csv")},
      {"attribute", "--model", p("blend.json"), "--data", p("dataset.csv"),
       "--tau", "8,4,2", "--method", "exact"},
      {"report", "--records", p("attributions.jsonl"), "--mode", "global"},
      {"report", "--records", p("attributions.jsonl"), "--mode", "local",
       "--rally-id", "r000000"},
      {"ablate", "--train", p("train.csv"), "--test", p("test.csv"), "--target",
       "player", "--k", "5", "--resamples", "200"},
  };
  for (const auto& cmd : commands) {
    std::vector<std::string> args = {"rallyshap", "--out", d, "--seed", "9",
                                     "--threads", t};
    args.insert(args.end(), cmd.begin(), cmd.end());
    std::ostringstream out;
    std::ostringstream err;
    if (RunCli(args, out, err) != kExitOk) {
      error = cmd.front() + ": " + err.str();
      return false;
    }
  }
  // Sampled attribution goes to its own directory so both variants are kept.
  const std::string sampled_dir = (dir / "sampled").string();
  std::vector<std::string> args = {"rallyshap", "--out", sampled_dir, "--seed", "9",
                                   "--threads", t, "attribute", "--model",
                                   p("blend.json"), "--data", p("dataset.csv"),
                                   "--tau", "4", "--method", "sampled",
                                   "--samples", "100", "--payoff", "sample"};
  std::ostringstream out;
  std::ostringstream err;
  if (RunCli(args, out, err) != kExitOk) {
    error = "attribute sampled: " + err.str();
    return false;
  }
  return true;
}

std::map<std::string, std::string> Files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = Slurp(e.path());
    }
  }
  return files;
}

Outcome Criterion8() {
  const fs::path root = fs::temp_directory_path() / "rallyshap_acceptance";
  std::string error;
  const std::vector<std::pair<std::string, int>> runs = {
      {"t1a", 1}, {"t1b", 1}, {"t8a", 8}, {"t8b", 8}};
  std::vector<std::map<std::string, std::string>> outputs;
  for (const auto& [name, threads] : runs) {
    if (!Pipeline(root / name, threads, error)) return {false, error};
    outputs.push_back(Files(root / name));
  }
  bool identical = true;
  std::string mismatch;
  for (size_t i = 1; i < outputs.size(); ++i) {
    if (outputs[i] != outputs[0]) {
      identical = false;
      for (const auto& [f, content] : outputs[0]) {
        if (!outputs[i].contains(f) || outputs[i].at(f) != content) mismatch += " " + f;
      }
    }
  }

  // Round-trips on 100-rally fixtures.
  const fs::path dir = root / "t1a";
  const Dataset data = LoadCsv((dir / "dataset.csv").string());
  const fs::path copy = root / "roundtrip.csv";
  SaveCsv(data, copy.string());
  bool csv_ok = data.size() == 100 && LoadCsv(copy.string()) == data;
  bool model_ok = true;
  for (const char* f : {"style.json", "markov.json", "blend.json"}) {
    const auto model = LoadModel((dir / f).string());
    const std::string text = SerializeModel(*model);
    const auto again = ParseModel(text);
    model_ok = model_ok && SerializeModel(*again) == text &&
               text == Slurp(dir / f);
  }
  const auto s1 = LoadModel((dir / "style.json").string());
  const auto m1 = LoadModel((dir / "markov.json").string());
  model_ok = model_ok &&
             dynamic_cast<const StyleForecaster&>(*s1) == FitStyle(LoadCsv((dir / "train.csv").string())) &&
             dynamic_cast<const MarkovForecaster&>(*m1) == FitMarkov(LoadCsv((dir / "train.csv").string()));
  fs::remove_all(root);
  return {identical && csv_ok && model_ok,
          fmt::format("{} files byte-identical across 2 runs at --threads 1 and 2 "
                      "at --threads 8: {}{}; CSV round-trip: {}; model round-trip: {}",
                      outputs[0].size(), identical ? "yes" : "NO", mismatch,
                      csv_ok ? "equal" : "DIFFERENT", model_ok ? "equal" : "DIFFERENT")};
}

Outcome Criterion9(const World& w) {
  std::vector<AttributionRecord> records;
  const int tau = 4;
  std::vector<const Rally*> used;
  for (const Rally& r : w.test) {
    if (r.size() <= tau) continue;
    used.push_back(&r);
    for (const Game game : {Game::kPast, Game::kPlayer}) {
      for (auto& rec :
           ToRecords(Attribute(WithTau(r, tau), *w.blend, game, MethodOptions{}))) {
        records.push_back(std::move(rec));
      }
    }
  }
  const fs::path dir = fs::temp_directory_path() / "rallyshap_acceptance_local";
  fs::remove_all(dir);
  fs::create_directories(dir);
  WriteRecords(records, (dir / "records.jsonl").string());
  int bad_shape = 0;
  int bad_macro = 0;
  for (const Rally* r : used) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = RunCli({"rallyshap", "--out", dir.string(), "report", "--records",
                             (dir / "records.jsonl").string(), "--mode", "local",
                             "--rally-id", r->id},
                            out, err);
    if (code != kExitOk) return {false, err.str()};
    const auto rows =
        ParseLocalCsv(Slurp(dir / fmt::format("report_local_{}.csv", r->id)));
    int per_game[2] = {0, 0};
    for (const LocalRow& row : rows) ++per_game[static_cast<int>(row.game)];
    const int expected = (r->size() - tau) * 3;
    if (per_game[0] != expected || per_game[1] != expected) ++bad_shape;
    for (size_t i = 0; i + 2 < rows.size(); i += 3) {
      if (rows[i].component != Component::kType ||
          rows[i + 1].component != Component::kArea ||
          rows[i + 2].component != Component::kMacro ||
          rows[i + 2].value != (rows[i].value + rows[i + 1].value) / 2) {
        ++bad_macro;
      }
    }
  }
  fs::remove_all(dir);
  return {bad_shape == 0 && bad_macro == 0 && !used.empty(),
          fmt::format("{} rallies at tau {}: {} with wrong row counts, {} macro "
                      "rows not exactly (type + area) / 2",
                      used.size(), tau, bad_shape, bad_macro)};
}

}  // namespace
}  // namespace rallyshap

int main() {
  using namespace rallyshap;
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << fmt::format("criterion {} {}: {}", id, o.pass ? "PASS" : "FAIL",
                             o.detail)
              << std::endl;
    failures += !o.pass;
  };

  report(1, Criterion1);
  report(2, Criterion2);
  report(3, Criterion3);
  report(4, Criterion4);

  std::vector<World> worlds;
  report(5, [&] { return Criterion5(worlds); });
  if (worlds.size() != 5) {
    std::cout << "criteria 6 and 9 need the criterion 5 worlds" << std::endl;
    return 1;
  }
  report(6, [&] { return Criterion6(worlds.front()); });
  report(7, Criterion7);
  report(8, Criterion8);
  report(9, [&] { return Criterion9(worlds[2]); });

  std::cout << fmt::format("{} of 9 criteria passed", 9 - failures) << std::endl;
  return failures == 0 ? 0 : 1;
}
