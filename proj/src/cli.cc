#include "rallyshap/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "rallyshap/attribution.h"
#include "rallyshap/error.h"
#include "rallyshap/parallel.h"
#include "rallyshap/random.h"
#include "rallyshap/report.h"
#include "rallyshap/synthdata.h"

namespace rallyshap {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
  uint64_t seed = 0;
  int threads = DefaultThreads();
  std::string out = ".";
};

struct SynthOptions {
  GeneratorConfig config;
  double split = 0.8;
};

struct FitOptions {
  std::string kind;
  std::string data;
  double alpha = 1.0;
  int bins = 3;
  double lambda = 0.5;
  std::string name = "model.json";
};

struct EvalOptions {
  std::string model;
  std::string data;
  std::vector<int> taus = {8, 4, 2};
  int k = 10;
};

struct AttributeOptions {
  std::string model;
  std::string data;
  std::vector<int> taus = {8, 4, 2};
  std::string game = "both";
  std::string method = "exact";
  int samples = 1000;
  std::string component = "all";
  bool impute_feedback = false;
  std::string payoff = "greedy";
  int k = 10;
  int max_rallies = 0;
  int resamples = kDefaultBootstrapResamples;
};

struct AblateOptions {
  std::string train;
  std::string test;
  std::string target = "player";
  std::vector<int> taus = {8, 4, 2};
  AblationOptions fit;
};

struct ReportOptions {
  std::string records;
  std::string mode = "global";
  std::string rally_id;
  int resamples = kDefaultBootstrapResamples;
};

std::string Env(std::string_view flag) {
  std::string name = kEnvPrefix;
  for (const char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  }
  return name;
}

fs::path OutputDir(const GlobalOptions& g) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create output directory '{}': {}",
                              g.out, ec.message()));
  }
  return fs::path(g.out);
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

void CheckTaus(const std::vector<int>& taus) {
  Require(!taus.empty(), "--tau: at least one value required");
  for (const int t : taus) {
    Require(t >= 2 && t < kMaxRallyLength,
            fmt::format("--tau {}: must lie in [2, {}]", t,
                        kMaxRallyLength - 1));
  }
}

std::shared_ptr<const Forecaster> ResolveModel(const std::string& spec,
                                               const Dataset& data) {
  if (spec == "builtin:uniform") return std::make_shared<UniformForecaster>();
  if (spec == "builtin:oracle") return std::make_shared<OracleForecaster>(data);
  return LoadModel(spec);
}

std::string MetricsJson(const Metrics& m) {
  return json{{"ce", m.ce}, {"mse", m.mse}, {"mae", m.mae}}.dump();
}

// ---------------------------------------------------------------------------

int CmdSynth(const GlobalOptions& g, SynthOptions o, std::ostream& out) {
  o.config.seed = g.seed;
  o.config.Validate();
  Require(o.split > 0.0 && o.split < 1.0, "--split must lie in (0, 1)");
  const fs::path dir = OutputDir(g);
  const Dataset dataset = GenerateDataset(o.config, g.threads);
  const auto [train, test] = SplitDataset(dataset, o.split, g.seed);
  SaveCsv(dataset, (dir / "dataset.csv").string());
  SaveCsv(train, (dir / "train.csv").string());
  SaveCsv(test, (dir / "test.csv").string());
  WriteFile(dir / "dataset.meta.json", GeneratorMetadata(o.config));
  int strokes = 0;
  for (const Rally& r : dataset) strokes += r.size();
  out << fmt::format("generated {} rallies ({} strokes): {} train / {} test\n",
                     dataset.size(), strokes, train.size(), test.size());
  return kExitOk;
}

int CmdFit(const GlobalOptions& g, const FitOptions& o, std::ostream& out) {
  const Dataset data = LoadCsv(o.data);
  Require(!data.empty(), "fit: dataset is empty");
  const fs::path dir = OutputDir(g);
  const auto model =
      FitForecaster(o.kind, data, data, o.alpha, o.bins, o.lambda);
  SaveModel(*model, (dir / o.name).string());
  out << fmt::format("fitted {} model on {} rallies -> {}\n", o.kind,
                     data.size(), (dir / o.name).string());
  return kExitOk;
}

int CmdEval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
  CheckTaus(o.taus);
  Require(o.k >= 1, "--k must be >= 1");
  const Dataset data = LoadCsv(o.data);
  const auto model = ResolveModel(o.model, data);
  const fs::path dir = OutputDir(g);

  std::string text = fmt::format("{:>5}{:>12}{:>12}{:>12}{:>9}{:>9}\n", "tau",
                                 "CE", "MSE", "MAE", "rallies", "skipped");
  std::string rows;
  for (const int tau : o.taus) {
    const EvaluationResult r =
        Evaluate(*model, data, tau, o.k, g.seed, g.threads);
    text += fmt::format("{:>5}{:>12.6f}{:>12.6f}{:>12.6f}{:>9}{:>9}\n", tau,
                        r.metrics.ce, r.metrics.mse, r.metrics.mae,
                        r.per_rally.size(), r.skipped);
    rows += json{{"tau", tau},
                 {"ce", r.metrics.ce},
                 {"mse", r.metrics.mse},
                 {"mae", r.metrics.mae},
                 {"n_rallies", r.per_rally.size()},
                 {"skipped", r.skipped}}
                .dump() +
            "\n";
  }
  WriteFile(dir / "metrics.txt", text);
  WriteFile(dir / "metrics.jsonl", rows);
  out << text;
  return kExitOk;
}

int CmdAttribute(const GlobalOptions& g, const AttributeOptions& o,
                 std::ostream& out, std::ostream& err) {
  CheckTaus(o.taus);
  const auto method = ParseMethod(o.method);
  Require(method.has_value(), "--method must be exact, sampled or loo");
  Require(o.samples >= 1, "--samples must be >= 1");
  Require(o.k >= 1, "--k must be >= 1");
  Require(o.max_rallies >= 0, "--max-rallies must be >= 0");
  std::vector<Game> games;
  if (o.game == "both") {
    games = {Game::kPast, Game::kPlayer};
  } else {
    const auto game = ParseGame(o.game);
    Require(game.has_value(), "--game must be past, player or both");
    games = {*game};
  }
  std::optional<Component> only;
  if (o.component != "all") {
    only = ParseComponent(o.component);
    Require(only.has_value(), "--component must be type, area, macro or all");
  }
  Require(o.payoff == "greedy" || o.payoff == "sample",
          "--payoff must be greedy or sample");

  Dataset data = LoadCsv(o.data);
  if (o.max_rallies > 0 && static_cast<int>(data.size()) > o.max_rallies) {
    data.resize(o.max_rallies);
  }
  const auto model = ResolveModel(o.model, data);
  const fs::path dir = OutputDir(g);

  struct Job {
    const Rally* rally;
    int tau;
    Game game;
  };
  std::vector<Job> jobs;
  for (const int tau : o.taus) {
    for (const Game game : games) {
      for (const Rally& r : data) {
        if (r.size() > tau) jobs.push_back({&r, tau, game});
      }
    }
  }

  PayoffOptions payoff;
  payoff.sampled = o.payoff == "sample";
  payoff.k = o.k;
  payoff.seed = g.seed;
  payoff.impute_feedback = o.impute_feedback;

  std::vector<AttributionMatrix> matrices(jobs.size());
  std::atomic<size_t> done{0};
  std::mutex progress_mutex;
  ParallelFor(jobs.size(), g.threads, [&](size_t i) {
    const Job& job = jobs[i];
    MethodOptions m;
    m.method = *method;
    m.samples = o.samples;
    m.seed = DeriveKey(g.seed, HashString(job.rally->id),
                       static_cast<uint64_t>(job.tau));
    matrices[i] =
        Attribute(WithTau(*job.rally, job.tau), *model, job.game, m, payoff);
    const size_t n = ++done;
    if (n % 200 == 0 || n == jobs.size()) {
      std::lock_guard lock(progress_mutex);
      err << fmt::format("attributed {}/{}\n", n, jobs.size());
    }
  });

  std::vector<AttributionRecord> records;
  double worst_gap = 0.0;
  size_t checked = 0;
  for (const AttributionMatrix& m : matrices) {
    const double gap = m.EfficiencyGap();
    if (!std::isnan(gap)) {
      worst_gap = std::max(worst_gap, gap);
      ++checked;
    }
    for (AttributionRecord& r : ToRecords(m)) {
      if (!only || r.component == *only) records.push_back(std::move(r));
    }
  }
  const std::vector<GlobalRow> global =
      GlobalReport(records, o.resamples, g.seed);

  WriteRecords(records, (dir / "attributions.jsonl").string());
  WriteFile(dir / "global.csv", GlobalCsv(global));
  std::string summary = GlobalText(global);
  if (*method == Method::kLoo) {
    summary += "efficiency: not applicable to leave-one-out values\n";
  } else {
    summary += fmt::format(
        "efficiency: max |sum(phi) - (v(N) - v(empty))| = {:.3e} over {} "
        "matrices (tolerance 1e-9): {}\n",
        worst_gap, checked, worst_gap <= 1e-9 ? "ok" : "VIOLATED");
  }
  WriteFile(dir / "global.txt", summary);
  out << summary;
  return kExitOk;
}

int CmdAblate(const GlobalOptions& g, AblateOptions o, std::ostream& out,
              std::ostream& err) {
  CheckTaus(o.taus);
  Require(o.target == "player" || o.target == "past",
          "--target must be player or past");
  const AblationTarget target =
      o.target == "player" ? AblationTarget::kPlayer : AblationTarget::kPast;
  o.fit.seed = g.seed;
  o.fit.threads = g.threads;
  const Dataset train = LoadCsv(o.train);
  const Dataset test = LoadCsv(o.test);
  const fs::path dir = OutputDir(g);

  std::vector<AblationRow> rows;
  for (const int tau : o.taus) {
    rows.push_back(RunAblation(train, test, tau, target, o.fit));
    err << fmt::format("ablation tau={} done\n", tau);
  }

  const std::string without = fmt::format("w/o {}", o.target);
  std::string text = fmt::format("{:<16}", "");
  for (const auto& r : rows) text += fmt::format("| {:^28}", fmt::format("tau={}", r.tau));
  text += fmt::format("\n{:<16}", "Model");
  for (size_t i = 0; i < rows.size(); ++i) {
    text += fmt::format("| {:>9}{:>9}{:>9} ", "CE", "MSE", "MAE");
  }
  text += "\n";
  auto line = [&](std::string_view label, auto pick) {
    text += fmt::format("{:<16}", label);
    for (const auto& r : rows) {
      const Metrics& m = pick(r);
      text += fmt::format("| {:>9.4f}{:>9.4f}{:>9.4f} ", m.ce, m.mse, m.mae);
    }
    text += "\n";
  };
  line(o.fit.kind, [](const AblationRow& r) -> const Metrics& { return r.original; });
  line(without, [](const AblationRow& r) -> const Metrics& { return r.ablated; });
  line("Difference", [](const AblationRow& r) -> const Metrics& { return r.difference; });
  line("noise (95% CI)", [](const AblationRow& r) -> const Metrics& { return r.noise; });

  std::string jsonl;
  for (const auto& r : rows) {
    jsonl += json{{"tau", r.tau},
                  {"target", o.target},
                  {"kind", o.fit.kind},
                  {"original", json::parse(MetricsJson(r.original))},
                  {"ablated", json::parse(MetricsJson(r.ablated))},
                  {"difference", json::parse(MetricsJson(r.difference))},
                  {"noise", json::parse(MetricsJson(r.noise))}}
                 .dump() +
             "\n";
  }
  WriteFile(dir / "ablation.txt", text);
  WriteFile(dir / "ablation.jsonl", jsonl);
  out << text;
  return kExitOk;
}

int CmdReport(const GlobalOptions& g, const ReportOptions& o,
              std::ostream& out) {
  Require(o.mode == "global" || o.mode == "local",
          "--mode must be global or local");
  Require(o.mode == "global" || !o.rally_id.empty(),
          "--rally-id is required for --mode local");
  const auto records = ReadRecords(o.records);
  const fs::path dir = OutputDir(g);
  if (o.mode == "global") {
    const auto rows = GlobalReport(records, o.resamples, g.seed);
    WriteFile(dir / "report_global.csv", GlobalCsv(rows));
    WriteFile(dir / "report_global.txt", GlobalText(rows));
    out << GlobalText(rows);
  } else {
    const auto rows = LocalReport(records, o.rally_id);
    WriteFile(dir / fmt::format("report_local_{}.csv", o.rally_id),
              LocalCsv(rows));
    WriteFile(dir / fmt::format("report_local_{}.txt", o.rally_id),
              LocalText(rows, o.rally_id));
    out << LocalText(rows, o.rally_id);
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

std::shared_ptr<const Forecaster> FitForecaster(
    const std::string& kind, std::span<const Rally> inputs,
    std::span<const Rally> targets, double alpha, int bins, double lambda) {
  if (kind == "style") {
    return std::make_shared<StyleForecaster>(FitStyle(inputs, targets, alpha));
  }
  if (kind == "markov") {
    return std::make_shared<MarkovForecaster>(
        FitMarkov(inputs, targets, alpha, bins));
  }
  if (kind == "blend") {
    return std::make_shared<BlendForecaster>(
        std::make_shared<StyleForecaster>(FitStyle(inputs, targets, alpha)),
        std::make_shared<MarkovForecaster>(
            FitMarkov(inputs, targets, alpha, bins)),
        lambda);
  }
  throw ContractViolation(
      fmt::format("unknown forecaster kind '{}' (style, markov, blend)", kind));
}

AblationRow RunAblation(const Dataset& train, const Dataset& test, int tau,
                        AblationTarget target,
                        const AblationOptions& options) {
  Dataset targets;
  for (const Rally& r : train) {
    if (r.size() > tau) targets.push_back(WithTau(r, tau));
  }
  Require(!targets.empty(),
          fmt::format("ablation: no training rally longer than tau={}", tau));

  auto fit = [&](std::span<const Rally> inputs) {
    return FitForecaster(options.kind, inputs, targets, options.alpha,
                         options.bins, options.lambda);
  };
  auto evaluate = [&](const Forecaster& f) {
    return Evaluate(f, test, tau, options.k, options.seed, options.threads);
  };

  AblationRow row;
  row.tau = tau;
  const EvaluationResult original = evaluate(*fit(targets));
  row.original = original.metrics;

  std::vector<Dataset> variants;
  if (target == AblationTarget::kPast) {
    Dataset inputs;
    for (const Rally& r : targets) inputs.push_back(ImputePast(r, {}));
    variants.push_back(std::move(inputs));
  } else {
    for (const PlayerRole role : {PlayerRole::kA, PlayerRole::kB}) {
      Dataset inputs;
      for (const Rally& r : targets) {
        inputs.push_back(ImputePlayer(r, role, r.size()));
      }
      variants.push_back(std::move(inputs));
    }
  }
  for (const Dataset& inputs : variants) {
    const Metrics m = evaluate(*fit(inputs)).metrics;
    row.ablated.ce += m.ce / static_cast<double>(variants.size());
    row.ablated.mse += m.mse / static_cast<double>(variants.size());
    row.ablated.mae += m.mae / static_cast<double>(variants.size());
  }
  row.difference = {row.original.ce - row.ablated.ce,
                    row.original.mse - row.ablated.mse,
                    row.original.mae - row.ablated.mae};

  auto half_width = [&](auto pick, uint64_t stream) {
    std::vector<double> values;
    for (const Metrics& m : original.per_rally) values.push_back(pick(m));
    if (values.empty()) return 0.0;
    const GlobalAggregate a = AggregateGlobal(
        values, options.resamples, DeriveKey(options.seed, tau, stream));
    return 0.5 * (a.ci_high - a.ci_low);
  };
  row.noise = {half_width([](const Metrics& m) { return m.ce; }, 0),
               half_width([](const Metrics& m) { return m.mse; }, 1),
               half_width([](const Metrics& m) { return m.mae; }, 2)};
  return row;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Turn-based Shapley attribution for rally forecasters",
               "rallyshap"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master random seed")
      ->envname(Env("seed"))
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (output does not depend on it)")
      ->envname(Env("threads"))
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")
      ->envname(Env("out"))
      ->capture_default_str();

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic rally dataset");
  synth_cmd->add_option("--n-rallies", synth.config.n_rallies)->envname(Env("n-rallies"))->check(CLI::NonNegativeNumber)->capture_default_str();
  synth_cmd->add_option("--players", synth.config.n_players)->envname(Env("players"))->check(CLI::Range(2, 100000))->capture_default_str();
  synth_cmd->add_option("--lambda", synth.config.lambda, "Past-stroke dependence in [0, 1]")->envname(Env("lambda"))->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth_cmd->add_option("--termination", synth.config.termination_prob)->envname(Env("termination"))->capture_default_str();
  synth_cmd->add_option("--short-serve", synth.config.short_serve_prob)->envname(Env("short-serve"))->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth_cmd->add_option("--concentration", synth.config.concentration)->envname(Env("concentration"))->capture_default_str();
  synth_cmd->add_option("--split", synth.split, "Train fraction")->envname(Env("split"))->capture_default_str();

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a reference forecaster");
  fit_cmd->add_option("--kind", fit.kind)->required()->envname(Env("kind"))->check(CLI::IsMember({"style", "markov", "blend"}));
  fit_cmd->add_option("--data", fit.data)->required()->envname(Env("data"));
  fit_cmd->add_option("--alpha", fit.alpha)->envname(Env("alpha"))->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--bins", fit.bins)->envname(Env("bins"))->check(CLI::Range(1, 100))->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambda)->envname(Env("lambda"))->check(CLI::Range(0.0, 1.0))->capture_default_str();
  fit_cmd->add_option("--name", fit.name, "Model file name inside --out")->envname(Env("name"))->capture_default_str();

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Benchmark metrics (CE, MSE, MAE)");
  eval_cmd->add_option("--model", eval.model, "Model file, builtin:uniform or builtin:oracle")->required()->envname(Env("model"));
  eval_cmd->add_option("--data", eval.data)->required()->envname(Env("data"));
  eval_cmd->add_option("--tau", eval.taus)->envname(Env("tau"))->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--k", eval.k, "Samples for best-of-K")->envname(Env("k"))->check(CLI::PositiveNumber)->capture_default_str();

  AttributeOptions attr;
  CLI::App* attr_cmd = app.add_subcommand("attribute", "Shapley attributions per rally");
  attr_cmd->add_option("--model", attr.model)->required()->envname(Env("model"));
  attr_cmd->add_option("--data", attr.data)->required()->envname(Env("data"));
  attr_cmd->add_option("--tau", attr.taus)->envname(Env("tau"))->delimiter(',')->capture_default_str();
  attr_cmd->add_option("--game", attr.game)->envname(Env("game"))->check(CLI::IsMember({"past", "player", "both"}))->capture_default_str();
  attr_cmd->add_option("--method", attr.method)->envname(Env("method"))->check(CLI::IsMember({"exact", "sampled", "loo"}))->capture_default_str();
  attr_cmd->add_option("--samples", attr.samples, "Permutations for --method sampled")->envname(Env("samples"))->check(CLI::PositiveNumber)->capture_default_str();
  attr_cmd->add_option("--component", attr.component)->envname(Env("component"))->check(CLI::IsMember({"type", "area", "macro", "all"}))->capture_default_str();
  attr_cmd->add_option("--impute-feedback", attr.impute_feedback)->envname(Env("impute-feedback"))->capture_default_str();
  attr_cmd->add_option("--payoff", attr.payoff, "greedy or sample (mean over K rollouts)")->envname(Env("payoff"))->check(CLI::IsMember({"greedy", "sample"}))->capture_default_str();
  attr_cmd->add_option("--k", attr.k)->envname(Env("k"))->check(CLI::PositiveNumber)->capture_default_str();
  attr_cmd->add_option("--max-rallies", attr.max_rallies, "0 = all")->envname(Env("max-rallies"))->capture_default_str();
  attr_cmd->add_option("--resamples", attr.resamples, "Bootstrap resamples")->envname(Env("resamples"))->check(CLI::NonNegativeNumber)->capture_default_str();

  AblateOptions ablate;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Retrain without players or past strokes");
  ablate_cmd->add_option("--train", ablate.train)->required()->envname(Env("train"));
  ablate_cmd->add_option("--test", ablate.test)->required()->envname(Env("test"));
  ablate_cmd->add_option("--target", ablate.target)->envname(Env("target"))->check(CLI::IsMember({"player", "past"}))->capture_default_str();
  ablate_cmd->add_option("--tau", ablate.taus)->envname(Env("tau"))->delimiter(',')->capture_default_str();
  ablate_cmd->add_option("--kind", ablate.fit.kind)->envname(Env("kind"))->check(CLI::IsMember({"style", "markov", "blend"}))->capture_default_str();
  ablate_cmd->add_option("--alpha", ablate.fit.alpha)->envname(Env("alpha"))->check(CLI::PositiveNumber)->capture_default_str();
  ablate_cmd->add_option("--bins", ablate.fit.bins)->envname(Env("bins"))->check(CLI::Range(1, 100))->capture_default_str();
  ablate_cmd->add_option("--lambda", ablate.fit.lambda)->envname(Env("lambda"))->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ablate_cmd->add_option("--k", ablate.fit.k)->envname(Env("k"))->check(CLI::PositiveNumber)->capture_default_str();
  ablate_cmd->add_option("--resamples", ablate.fit.resamples)->envname(Env("resamples"))->check(CLI::NonNegativeNumber)->capture_default_str();

  ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "Global or per-rally report from attribution records");
  report_cmd->add_option("--records", report.records)->required()->envname(Env("records"));
  report_cmd->add_option("--mode", report.mode)->envname(Env("mode"))->check(CLI::IsMember({"global", "local"}))->capture_default_str();
  report_cmd->add_option("--rally-id", report.rally_id)->envname(Env("rally-id"));
  report_cmd->add_option("--resamples", report.resamples)->envname(Env("resamples"))->check(CLI::NonNegativeNumber)->capture_default_str();

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("rallyshap");
  for (std::string& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth_cmd) return CmdSynth(g, synth, out);
    if (*fit_cmd) return CmdFit(g, fit, out);
    if (*eval_cmd) return CmdEval(g, eval, out);
    if (*attr_cmd) return CmdAttribute(g, attr, out, err);
    if (*ablate_cmd) return CmdAblate(g, ablate, out, err);
    if (*report_cmd) return CmdReport(g, report, out);
  } catch (const ContractViolation& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rallyshap
