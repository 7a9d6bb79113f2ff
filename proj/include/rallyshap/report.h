#ifndef RALLYSHAP_REPORT_H_
#define RALLYSHAP_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rallyshap/attribution.h"

namespace rallyshap {

// One attribution value, flattened for line-delimited JSON output.
struct AttributionRecord {
  std::string rally_id;
  Game game = Game::kPast;
  Method method = Method::kExact;
  int tau = 0;
  Feature feature;
  int output_stroke = 0;
  Component component = Component::kType;
  double value = 0.0;
  std::optional<double> stderr_;
  int64_t n_evaluations = 0;

  friend bool operator==(const AttributionRecord&,
                         const AttributionRecord&) = default;
};

// Records in (feature, output stroke, component) order.
std::vector<AttributionRecord> ToRecords(const AttributionMatrix& matrix);

std::string RecordToJson(const AttributionRecord& record);
AttributionRecord RecordFromJson(std::string_view line);

std::string FormatRecords(const std::vector<AttributionRecord>& records);
std::vector<AttributionRecord> ParseRecords(std::string_view text);
void WriteRecords(const std::vector<AttributionRecord>& records,
                  const std::string& path);
std::vector<AttributionRecord> ReadRecords(const std::string& path);

// Rebuilds one matrix per (rally, game, tau) in first-seen order. Boundary
// payoffs are not part of the records and stay empty.
std::vector<AttributionMatrix> MatricesFromRecords(
    const std::vector<AttributionRecord>& records);

struct GlobalRow {
  Game game = Game::kPast;
  Component component = Component::kType;
  int tau = 0;
  GlobalAggregate aggregate;
};

// Mean and bootstrap CI of the rally scalars per (game, component, tau).
std::vector<GlobalRow> GlobalReport(
    const std::vector<AttributionRecord>& records,
    int resamples = kDefaultBootstrapResamples, uint64_t seed = 0);

struct LocalRow {
  Game game = Game::kPast;
  int tau = 0;
  int output_stroke = 0;
  Component component = Component::kType;
  // Mean over past-stroke features, or the mean of both players. The macro
  // row is (type + area) / 2 of the two rows above it.
  double value = 0.0;
  std::vector<std::pair<std::string, double>> per_feature;
};

// Per-output-stroke attributions for one rally, for every game present.
// Throws ValidationError listing the known ids when `rally_id` is absent.
std::vector<LocalRow> LocalReport(const std::vector<AttributionRecord>& records,
                                  std::string_view rally_id);

std::string GlobalCsv(const std::vector<GlobalRow>& rows);
std::vector<GlobalRow> ParseGlobalCsv(std::string_view text);
std::string GlobalText(const std::vector<GlobalRow>& rows);

std::string LocalCsv(const std::vector<LocalRow>& rows);
std::vector<LocalRow> ParseLocalCsv(std::string_view text);
std::string LocalText(const std::vector<LocalRow>& rows,
                      std::string_view rally_id);

// Doubles for CSV output: shortest text that reads back to the same value.
std::string FormatDouble(double v);

}  // namespace rallyshap

#endif  // RALLYSHAP_REPORT_H_
