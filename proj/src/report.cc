#include "rallyshap/report.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "rallyshap/error.h"
#include "rallyshap/random.h"

namespace rallyshap {

namespace {

using nlohmann::json;

struct Group {
  AttributionMatrix matrix;
  std::array<bool, kNumComponents> present{};
};

std::vector<Group> GroupRecords(const std::vector<AttributionRecord>& records) {
  // Key: (rally, game, tau) -> features / outputs in first-seen order.
  struct Draft {
    std::string rally_id;
    Game game;
    Method method;
    int tau;
    int64_t n_evaluations;
    std::vector<Feature> features;
    std::vector<int> outputs;
    std::vector<const AttributionRecord*> rows;
  };
  std::vector<Draft> drafts;
  std::map<std::tuple<std::string, int, int>, size_t> index;
  for (const AttributionRecord& r : records) {
    const auto key =
        std::make_tuple(r.rally_id, static_cast<int>(r.game), r.tau);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, drafts.size()).first;
      drafts.push_back({r.rally_id, r.game, r.method, r.tau, r.n_evaluations,
                        {}, {}, {}});
    }
    Draft& d = drafts[it->second];
    if (std::find(d.features.begin(), d.features.end(), r.feature) ==
        d.features.end()) {
      d.features.push_back(r.feature);
    }
    if (std::find(d.outputs.begin(), d.outputs.end(), r.output_stroke) ==
        d.outputs.end()) {
      d.outputs.push_back(r.output_stroke);
    }
    d.rows.push_back(&r);
  }

  std::vector<Group> groups;
  groups.reserve(drafts.size());
  for (Draft& d : drafts) {
    std::sort(d.outputs.begin(), d.outputs.end());
    Group g{AttributionMatrix(d.rally_id, d.tau, d.game, d.method, d.features,
                              d.outputs),
            {}};
    g.matrix.set_n_evaluations(d.n_evaluations);
    for (const AttributionRecord* r : d.rows) {
      const size_t f = static_cast<size_t>(
          std::find(d.features.begin(), d.features.end(), r->feature) -
          d.features.begin());
      const size_t o = static_cast<size_t>(
          std::find(d.outputs.begin(), d.outputs.end(), r->output_stroke) -
          d.outputs.begin());
      g.matrix.set_value(f, o, r->component, r->value);
      if (r->stderr_) g.matrix.set_stderr(f, o, r->component, *r->stderr_);
      g.present[static_cast<size_t>(r->component)] = true;
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

template <typename T>
T ParseOrThrow(std::string_view s, std::string_view what) {
  T out{};
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(fmt::format("bad {} '{}'", what, s));
  }
  return out;
}

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t at = line.find(sep, start);
    out.push_back(line.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::string_view line : Split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

Game GameOrThrow(std::string_view s) {
  const auto g = ParseGame(s);
  if (!g) throw ValidationError(fmt::format("unknown game '{}'", s));
  return *g;
}

Component ComponentOrThrow(std::string_view s) {
  const auto c = ParseComponent(s);
  if (!c) throw ValidationError(fmt::format("unknown component '{}'", s));
  return *c;
}

}  // namespace

std::string FormatDouble(double v) { return fmt::format("{}", v); }

std::vector<AttributionRecord> ToRecords(const AttributionMatrix& matrix) {
  std::vector<AttributionRecord> out;
  for (size_t f = 0; f < matrix.features().size(); ++f) {
    for (size_t o = 0; o < matrix.output_strokes().size(); ++o) {
      for (const Component c : kComponents) {
        out.push_back({matrix.rally_id(), matrix.game(), matrix.method(),
                       matrix.tau(), matrix.features()[f],
                       matrix.output_strokes()[o], c, matrix.value(f, o, c),
                       matrix.stderr_at(f, o, c), matrix.n_evaluations()});
      }
    }
  }
  return out;
}

std::string RecordToJson(const AttributionRecord& r) {
  json j;
  j["rally_id"] = r.rally_id;
  j["game"] = GameName(r.game);
  j["method"] = MethodName(r.method);
  j["tau"] = r.tau;
  if (r.feature.kind == Feature::Kind::kPastStroke) {
    j["feature"] = r.feature.stroke_index;
  } else {
    j["feature"] = RoleName(r.feature.role);
  }
  j["output_stroke"] = r.output_stroke;
  j["component"] = ComponentName(r.component);
  j["value"] = r.value;
  j["stderr"] = r.stderr_ ? json(*r.stderr_) : json(nullptr);
  j["n_evaluations"] = r.n_evaluations;
  return j.dump();
}

AttributionRecord RecordFromJson(std::string_view line) {
  try {
    const json j = json::parse(line);
    AttributionRecord r;
    r.rally_id = j.at("rally_id").get<std::string>();
    r.game = GameOrThrow(j.at("game").get<std::string>());
    const auto method = ParseMethod(j.at("method").get<std::string>());
    if (!method) throw ValidationError("unknown method");
    r.method = *method;
    r.tau = j.at("tau").get<int>();
    const json& feature = j.at("feature");
    if (feature.is_number_integer()) {
      r.feature = Feature::PastStroke(feature.get<int>());
    } else {
      const auto role = ParseRole(feature.get<std::string>());
      if (!role) throw ValidationError("unknown feature");
      r.feature = Feature::Player(*role);
    }
    r.output_stroke = j.at("output_stroke").get<int>();
    r.component = ComponentOrThrow(j.at("component").get<std::string>());
    r.value = j.at("value").get<double>();
    if (!j.at("stderr").is_null()) r.stderr_ = j.at("stderr").get<double>();
    r.n_evaluations = j.at("n_evaluations").get<int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("bad attribution record: {}", e.what()));
  } catch (const ContractViolation& e) {
    throw ValidationError(fmt::format("bad attribution record: {}", e.what()));
  }
}

std::string FormatRecords(const std::vector<AttributionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += RecordToJson(r);
    out += '\n';
  }
  return out;
}

std::vector<AttributionRecord> ParseRecords(std::string_view text) {
  std::vector<AttributionRecord> out;
  int line_no = 0;
  for (const std::string_view line : Split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(RecordFromJson(line));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

void WriteRecords(const std::vector<AttributionRecord>& records,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << FormatRecords(records);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::vector<AttributionRecord> ReadRecords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRecords(buffer.str());
}

std::vector<AttributionMatrix> MatricesFromRecords(
    const std::vector<AttributionRecord>& records) {
  std::vector<AttributionMatrix> out;
  for (Group& g : GroupRecords(records)) out.push_back(std::move(g.matrix));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<GlobalRow> GlobalReport(
    const std::vector<AttributionRecord>& records, int resamples,
    uint64_t seed) {
  // (game, tau, component) -> rally scalars in record order.
  std::map<std::tuple<int, int, int>, std::vector<double>> scalars;
  for (const Group& g : GroupRecords(records)) {
    const ComponentValues v = RallyScalar(g.matrix);
    for (const Component c : kComponents) {
      const auto ci = static_cast<size_t>(c);
      if (!g.present[ci]) continue;
      scalars[{static_cast<int>(g.matrix.game()), g.matrix.tau(),
               static_cast<int>(c)}]
          .push_back(v[ci]);
    }
  }
  std::vector<GlobalRow> rows;
  for (const auto& [key, values] : scalars) {
    const auto [game, tau, component] = key;
    GlobalRow row;
    row.game = static_cast<Game>(game);
    row.tau = tau;
    row.component = static_cast<Component>(component);
    row.aggregate = AggregateGlobal(
        values, resamples,
        DeriveKey(seed, static_cast<uint64_t>(game) * 1000 + tau, component));
    rows.push_back(row);
  }
  return rows;
}

std::vector<LocalRow> LocalReport(const std::vector<AttributionRecord>& records,
                                  std::string_view rally_id) {
  std::vector<Group> groups;
  std::vector<std::string> known;
  for (Group& g : GroupRecords(records)) {
    if (g.matrix.rally_id() == rally_id) {
      groups.push_back(std::move(g));
    } else if (std::find(known.begin(), known.end(), g.matrix.rally_id()) ==
               known.end()) {
      known.push_back(g.matrix.rally_id());
    }
  }
  if (groups.empty()) {
    std::sort(known.begin(), known.end());
    std::string list;
    for (const auto& id : known) {
      if (!list.empty()) list += ", ";
      list += id;
    }
    throw ValidationError(fmt::format(
        "no attribution records for rally '{}'; available: {}", rally_id,
        list));
  }
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    return std::make_pair(static_cast<int>(a.matrix.game()), a.matrix.tau()) <
           std::make_pair(static_cast<int>(b.matrix.game()), b.matrix.tau());
  });

  std::vector<LocalRow> rows;
  for (const Group& g : groups) {
    const AttributionMatrix& m = g.matrix;
    const size_t n_features = m.features().size();
    for (size_t o = 0; o < m.output_strokes().size(); ++o) {
      ComponentValues combined{};
      for (const Component c : kComponents) {
        double sum = 0.0;
        for (size_t f = 0; f < n_features; ++f) sum += m.value(f, o, c);
        combined[static_cast<size_t>(c)] =
            sum / static_cast<double>(n_features);
      }
      if (g.present[0] && g.present[1]) {
        combined[2] = 0.5 * (combined[0] + combined[1]);
      }
      for (const Component c : kComponents) {
        const auto ci = static_cast<size_t>(c);
        if (!g.present[ci]) continue;
        LocalRow row{m.game(), m.tau(), m.output_strokes()[o], c, combined[ci],
                     {}};
        for (size_t f = 0; f < n_features; ++f) {
          row.per_feature.emplace_back(m.features()[f].Label(),
                                       m.value(f, o, c));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string GlobalCsv(const std::vector<GlobalRow>& rows) {
  std::string out = "game,tau,component,mean,ci_low,ci_high,n_rallies\n";
  for (const GlobalRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", GameName(r.game), r.tau,
                       ComponentName(r.component),
                       FormatDouble(r.aggregate.mean),
                       FormatDouble(r.aggregate.ci_low),
                       FormatDouble(r.aggregate.ci_high), r.aggregate.n);
  }
  return out;
}

std::vector<GlobalRow> ParseGlobalCsv(std::string_view text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw ValidationError("global CSV: missing header");
  std::vector<GlobalRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto f = Split(lines[i], ',');
    if (f.size() != 7) throw ValidationError("global CSV: expected 7 fields");
    GlobalRow r;
    r.game = GameOrThrow(f[0]);
    r.tau = ParseOrThrow<int>(f[1], "tau");
    r.component = ComponentOrThrow(f[2]);
    r.aggregate.mean = ParseOrThrow<double>(f[3], "mean");
    r.aggregate.ci_low = ParseOrThrow<double>(f[4], "ci_low");
    r.aggregate.ci_high = ParseOrThrow<double>(f[5], "ci_high");
    r.aggregate.n = ParseOrThrow<int>(f[6], "n_rallies");
    rows.push_back(r);
  }
  return rows;
}

std::string GlobalText(const std::vector<GlobalRow>& rows) {
  std::string out = fmt::format("{:<8}{:>5}  {:<7}{:>13}{:>13}{:>13}{:>9}\n",
                                "game", "tau", "comp", "mean", "ci_low",
                                "ci_high", "rallies");
  for (const GlobalRow& r : rows) {
    out += fmt::format("{:<8}{:>5}  {:<7}{:>13.6f}{:>13.6f}{:>13.6f}{:>9}\n",
                       GameName(r.game), r.tau, ComponentName(r.component),
                       r.aggregate.mean, r.aggregate.ci_low,
                       r.aggregate.ci_high, r.aggregate.n);
  }
  return out;
}

std::string LocalCsv(const std::vector<LocalRow>& rows) {
  std::string out = "game,tau,output_stroke,component,value,features\n";
  for (const LocalRow& r : rows) {
    std::string features;
    for (const auto& [label, v] : r.per_feature) {
      if (!features.empty()) features += ';';
      features += label + "=" + FormatDouble(v);
    }
    out += fmt::format("{},{},{},{},{},{}\n", GameName(r.game), r.tau,
                       r.output_stroke, ComponentName(r.component),
                       FormatDouble(r.value), features);
  }
  return out;
}

std::vector<LocalRow> ParseLocalCsv(std::string_view text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw ValidationError("local CSV: missing header");
  std::vector<LocalRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto f = Split(lines[i], ',');
    if (f.size() != 6) throw ValidationError("local CSV: expected 6 fields");
    LocalRow r;
    r.game = GameOrThrow(f[0]);
    r.tau = ParseOrThrow<int>(f[1], "tau");
    r.output_stroke = ParseOrThrow<int>(f[2], "output_stroke");
    r.component = ComponentOrThrow(f[3]);
    r.value = ParseOrThrow<double>(f[4], "value");
    if (!f[5].empty()) {
      for (const std::string_view item : Split(f[5], ';')) {
        const size_t eq = item.find('=');
        if (eq == std::string_view::npos) {
          throw ValidationError("local CSV: bad feature entry");
        }
        r.per_feature.emplace_back(
            std::string(item.substr(0, eq)),
            ParseOrThrow<double>(item.substr(eq + 1), "feature value"));
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string LocalText(const std::vector<LocalRow>& rows,
                      std::string_view rally_id) {
  std::string out = fmt::format("rally {}\n", rally_id);
  out += fmt::format("{:<8}{:>5}{:>8}  {:<7}{:>13}  {}\n", "game", "tau",
                     "stroke", "comp", "value", "per feature");
  for (const LocalRow& r : rows) {
    std::string features;
    for (const auto& [label, v] : r.per_feature) {
      if (!features.empty()) features += ' ';
      features += fmt::format("{}:{:+.4f}", label, v);
    }
    out += fmt::format("{:<8}{:>5}{:>8}  {:<7}{:>13.6f}  {}\n",
                       GameName(r.game), r.tau, r.output_stroke,
                       ComponentName(r.component), r.value, features);
  }
  return out;
}

}  // namespace rallyshap
