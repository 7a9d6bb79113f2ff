#include "rallyshap/report.h"

#include <cmath>
#include <map>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rallyshap/error.h"
#include "rallyshap/random.h"
#include "rallyshap/synthdata.h"

namespace rallyshap {
namespace {

class ReportTest : public ::testing::Test {
 protected:
  void SetUp() override {
    GeneratorConfig config;
    config.n_rallies = 60;
    config.n_players = 4;
    config.lambda = 0.5;
    config.seed = 5;
    data_ = GenerateDataset(config);
    auto style = std::make_shared<StyleForecaster>(FitStyle(data_));
    auto markov = std::make_shared<MarkovForecaster>(FitMarkov(data_));
    model_ = std::make_shared<BlendForecaster>(style, markov, 0.5);
    for (const Rally& r : data_) {
      if (r.size() <= tau_) continue;
      for (const Game game : {Game::kPast, Game::kPlayer}) {
        matrices_.push_back(
            Attribute(WithTau(r, tau_), *model_, game, MethodOptions{}));
        for (auto& rec : ToRecords(matrices_.back())) records_.push_back(rec);
      }
    }
  }

  const int tau_ = 4;
  Dataset data_;
  std::shared_ptr<BlendForecaster> model_;
  std::vector<AttributionMatrix> matrices_;
  std::vector<AttributionRecord> records_;
};

TEST_F(ReportTest, RecordSchema) {
  const auto doc = nlohmann::json::parse(RecordToJson(records_.front()));
  for (const char* key : {"rally_id", "game", "method", "tau", "feature",
                          "output_stroke", "component", "value", "stderr",
                          "n_evaluations"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_TRUE(doc["stderr"].is_null());
  EXPECT_TRUE(doc["feature"].is_number_integer());
  const AttributionRecord player = ToRecords(matrices_[1]).front();
  EXPECT_EQ(nlohmann::json::parse(RecordToJson(player))["feature"], "A");
}

TEST_F(ReportTest, RecordsRoundTrip) {
  EXPECT_EQ(ParseRecords(FormatRecords(records_)), records_);
  AttributionRecord with_stderr = records_.front();
  with_stderr.stderr_ = 0.125;
  with_stderr.method = Method::kSampled;
  EXPECT_EQ(RecordFromJson(RecordToJson(with_stderr)), with_stderr);
  EXPECT_THROW(RecordFromJson("{\"rally_id\": 3}"), ValidationError);
  EXPECT_THROW(RecordFromJson("nope"), ValidationError);
}

TEST_F(ReportTest, MatricesRebuildFromRecords) {
  const auto rebuilt = MatricesFromRecords(records_);
  ASSERT_EQ(rebuilt.size(), matrices_.size());
  for (size_t i = 0; i < rebuilt.size(); ++i) {
    const auto& a = matrices_[i];
    const auto& b = rebuilt[i];
    EXPECT_EQ(a.rally_id(), b.rally_id());
    EXPECT_EQ(a.features(), b.features());
    EXPECT_EQ(a.output_strokes(), b.output_strokes());
    for (size_t f = 0; f < a.features().size(); ++f) {
      for (size_t o = 0; o < a.output_strokes().size(); ++o) {
        for (const Component c : kComponents) {
          EXPECT_EQ(a.value(f, o, c), b.value(f, o, c));
        }
      }
    }
  }
}

TEST_F(ReportTest, GlobalMeansEqualAggregateGlobal) {
  const auto rows = GlobalReport(records_, 200, 11);
  ASSERT_EQ(rows.size(), 6u);
  std::map<std::pair<int, int>, std::vector<double>> scalars;
  for (const AttributionMatrix& m : matrices_) {
    const ComponentValues v = RallyScalar(m);
    for (int c = 0; c < kNumComponents; ++c) {
      scalars[{static_cast<int>(m.game()), c}].push_back(v[c]);
    }
  }
  for (const GlobalRow& row : rows) {
    const int g = static_cast<int>(row.game);
    const int c = static_cast<int>(row.component);
    const GlobalAggregate expected = AggregateGlobal(
        scalars.at({g, c}), 200, DeriveKey(11, g * 1000 + tau_, c));
    EXPECT_EQ(row.aggregate.mean, expected.mean);
    EXPECT_EQ(row.aggregate.ci_low, expected.ci_low);
    EXPECT_EQ(row.aggregate.ci_high, expected.ci_high);
    EXPECT_EQ(row.tau, tau_);
  }
}

TEST_F(ReportTest, GlobalCsvReloads) {
  const auto rows = GlobalReport(records_, 100, 1);
  const auto back = ParseGlobalCsv(GlobalCsv(rows));
  ASSERT_EQ(back.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].game, rows[i].game);
    EXPECT_EQ(back[i].component, rows[i].component);
    EXPECT_EQ(back[i].aggregate.mean, rows[i].aggregate.mean);
    EXPECT_EQ(back[i].aggregate.ci_low, rows[i].aggregate.ci_low);
    EXPECT_EQ(back[i].aggregate.ci_high, rows[i].aggregate.ci_high);
    EXPECT_EQ(back[i].aggregate.n, rows[i].aggregate.n);
  }
}

TEST_F(ReportTest, LocalShapeAndMacro) {
  for (const Rally& r : data_) {
    if (r.size() <= tau_) continue;
    const auto rows = LocalReport(records_, r.id);
    int per_game[2] = {0, 0};
    for (const LocalRow& row : rows) ++per_game[static_cast<int>(row.game)];
    EXPECT_EQ(per_game[0], (r.size() - tau_) * 3);
    EXPECT_EQ(per_game[1], (r.size() - tau_) * 3);
    for (size_t i = 0; i + 2 < rows.size(); i += 3) {
      ASSERT_EQ(rows[i].component, Component::kType);
      ASSERT_EQ(rows[i + 2].component, Component::kMacro);
      EXPECT_EQ(rows[i + 2].value, (rows[i].value + rows[i + 1].value) / 2);
    }
    const auto back = ParseLocalCsv(LocalCsv(rows));
    ASSERT_EQ(back.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(back[i].value, rows[i].value);
      EXPECT_EQ(back[i].per_feature, rows[i].per_feature);
      EXPECT_EQ(back[i].output_stroke, rows[i].output_stroke);
    }
  }
}

TEST_F(ReportTest, LocalPlayerValueIsMeanOfBoth) {
  const AttributionMatrix& m = matrices_[1];
  const auto rows = LocalReport(records_, m.rally_id());
  for (const LocalRow& row : rows) {
    if (row.game != Game::kPlayer || row.component != Component::kArea) continue;
    ASSERT_EQ(row.per_feature.size(), 2u);
    EXPECT_EQ(row.value, (row.per_feature[0].second + row.per_feature[1].second) / 2);
  }
}

TEST_F(ReportTest, UnknownRallyListsAvailableIds) {
  try {
    LocalReport(records_, "missing");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(matrices_.front().rally_id()),
              std::string::npos);
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (const double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678, 0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
}

}  // namespace
}  // namespace rallyshap
