#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "rallyshap/error.h"
#include "rallyshap/forecast.h"

namespace rallyshap {

namespace {

using nlohmann::json;

constexpr std::string_view kModelFormat = "rallyshap-model";

json AreaToJson(const AreaDistribution& a) {
  return json::array({a.mu_x, a.mu_y, a.sigma_x, a.sigma_y, a.rho});
}

AreaDistribution AreaFromJson(const json& j) {
  if (!j.is_array() || j.size() != 5) {
    throw ValidationError("model: area must be [mu_x, mu_y, sigma_x, sigma_y, rho]");
  }
  AreaDistribution a{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                     j[3].get<double>(), j[4].get<double>()};
  if (!IsValid(a)) throw ValidationError("model: invalid area Gaussian");
  return a;
}

json ShotToJson(const ShotDistribution& d) { return d.probs; }

ShotDistribution ShotFromJson(const json& j) {
  if (!j.is_array() || j.size() != kNumShotTypes) {
    throw ValidationError("model: shot distribution must have 10 entries");
  }
  ShotDistribution d;
  for (int i = 0; i < kNumShotTypes; ++i) d.probs[i] = j[i].get<double>();
  if (!IsValid(d)) throw ValidationError("model: invalid shot distribution");
  return d;
}

json StyleToJson(const PlayerStyle& s) {
  json areas = json::array();
  for (const auto& a : s.areas) areas.push_back(AreaToJson(a));
  return {{"preference", ShotToJson(s.preference)}, {"areas", areas}};
}

PlayerStyle StyleFromJson(const json& j) {
  PlayerStyle s;
  s.preference = ShotFromJson(j.at("preference"));
  const json& areas = j.at("areas");
  if (!areas.is_array() || areas.size() != kNumShotTypes) {
    throw ValidationError("model: style needs one area Gaussian per shot type");
  }
  for (int i = 0; i < kNumShotTypes; ++i) s.areas[i] = AreaFromJson(areas[i]);
  return s;
}

json PredictionToJson(const StrokePrediction& p) {
  return {{"shot", ShotToJson(p.shot)}, {"area", AreaToJson(p.area)}};
}

StrokePrediction PredictionFromJson(const json& j) {
  return {ShotFromJson(j.at("shot")), AreaFromJson(j.at("area"))};
}

json ModelBody(const Forecaster& f) {
  if (const auto* style = dynamic_cast<const StyleForecaster*>(&f)) {
    json players = json::array();
    for (const auto& [id, s] : style->players()) {
      json entry = StyleToJson(s);
      entry["id"] = id;
      players.push_back(std::move(entry));
    }
    return {{"kind", "style"},
            {"alpha", style->alpha()},
            {"players", players},
            {"fallback", StyleToJson(style->fallback())}};
  }
  if (const auto* markov = dynamic_cast<const MarkovForecaster*>(&f)) {
    json states = json::array();
    const int cells = markov->bins() * markov->bins();
    for (size_t i = 0; i < markov->states().size(); ++i) {
      const auto& st = markov->states()[i];
      if (st.count == 0) continue;
      states.push_back(
          {{"shot", ShotTypeName(ShotFromCode(static_cast<int>(i) / cells))},
           {"cell", static_cast<int>(i) % cells},
           {"count", st.count},
           {"next", PredictionToJson(st.next)}});
    }
    return {{"kind", "markov"},
            {"alpha", markov->alpha()},
            {"bins", markov->bins()},
            {"unseen", PredictionToJson(markov->unseen())},
            {"states", states}};
  }
  if (const auto* blend = dynamic_cast<const BlendForecaster*>(&f)) {
    return {{"kind", "blend"},
            {"lambda", blend->lambda()},
            {"style", ModelBody(blend->style())},
            {"markov", ModelBody(blend->markov())}};
  }
  if (dynamic_cast<const UniformForecaster*>(&f) != nullptr) {
    return {{"kind", "uniform"}};
  }
  throw ContractViolation(
      fmt::format("model kind '{}' cannot be serialized", f.kind()));
}

std::shared_ptr<const StyleForecaster> StyleFromBody(const json& j) {
  StyleRegistry players;
  for (const json& p : j.at("players")) {
    players.emplace(p.at("id").get<std::string>(), StyleFromJson(p));
  }
  return std::make_shared<const StyleForecaster>(
      std::move(players), StyleFromJson(j.at("fallback")),
      j.at("alpha").get<double>());
}

std::shared_ptr<const MarkovForecaster> MarkovFromBody(const json& j) {
  const int bins = j.at("bins").get<int>();
  if (bins < 1) throw ValidationError("model: bins must be >= 1");
  const int cells = bins * bins;
  const StrokePrediction unseen = PredictionFromJson(j.at("unseen"));
  std::vector<MarkovForecaster::State> states(
      static_cast<size_t>(kNumShotTypes) * cells, {0, unseen});
  for (const json& s : j.at("states")) {
    const auto shot = ParseShotType(s.at("shot").get<std::string>());
    const int cell = s.at("cell").get<int>();
    if (!shot || cell < 0 || cell >= cells) {
      throw ValidationError("model: bad Markov state key");
    }
    auto& st = states[static_cast<size_t>(ShotCode(*shot)) * cells + cell];
    st.count = s.at("count").get<int64_t>();
    st.next = PredictionFromJson(s.at("next"));
  }
  return std::make_shared<const MarkovForecaster>(
      bins, j.at("alpha").get<double>(), std::move(states), unseen);
}

std::shared_ptr<const Forecaster> ModelFromBody(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "style") return StyleFromBody(j);
  if (kind == "markov") return MarkovFromBody(j);
  if (kind == "blend") {
    return std::make_shared<const BlendForecaster>(
        StyleFromBody(j.at("style")), MarkovFromBody(j.at("markov")),
        j.at("lambda").get<double>());
  }
  if (kind == "uniform") return std::make_shared<const UniformForecaster>();
  throw ValidationError(fmt::format("model: unknown kind '{}'", kind));
}

}  // namespace

std::string SerializeModel(const Forecaster& forecaster) {
  json doc = {{"format", kModelFormat}, {"version", kModelFormatVersion}};
  doc["model"] = ModelBody(forecaster);
  return doc.dump(1) + "\n";
}

std::shared_ptr<const Forecaster> ParseModel(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw ValidationError("model: not a rallyshap model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ValidationError(
          fmt::format("model: unsupported format version {}", version));
    }
    return ModelFromBody(doc.at("model"));
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("model: {}", e.what()));
  } catch (const ContractViolation& e) {
    throw ValidationError(fmt::format("model: {}", e.what()));
  }
}

void SaveModel(const Forecaster& forecaster, const std::string& path) {
  const std::string text = SerializeModel(forecaster);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write model file '{}'", path));
  out << text;
  if (!out) throw IoError(fmt::format("failed writing model file '{}'", path));
}

std::shared_ptr<const Forecaster> LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read model file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

}  // namespace rallyshap
