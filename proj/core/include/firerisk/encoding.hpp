#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "firerisk/cube.hpp"
#include "firerisk/date.hpp"
#include "firerisk/feature_table.hpp"
#include "firerisk/ingest.hpp"

namespace firerisk {

struct CategoryStats {
  double sum = 0.0;
  double count = 0.0;
};

/// Smoothed target statistics per category: (sum + a * prior) / (count + a).
struct EncoderModel {
  std::string feature;
  double smoothing = 1.0;
  double prior = 0.0;
  std::map<std::string, CategoryStats> stats;

  /// Unseen categories encode to the prior.
  double encode(const std::string& category) const;
};

struct OrderedEncoding {
  std::vector<double> values;
  /// Statistics accumulated over every training row.
  EncoderModel model;
};

/// Mean of targets over training rows; 0 when there are none.
double training_mean(std::span<const double> targets, const std::vector<bool>& is_training);

/// Ordered target statistics. Rows are visited in date order (stable on
/// input order); each row is encoded from training rows with a strictly
/// earlier date, so rows sharing a day never see each other. Non-training
/// rows never contribute. `smoothing` must be > 0.
OrderedEncoding ordered_target_encode(std::span<const Date> dates, std::span<const std::string> categories,
                                      std::span<const double> targets, const std::vector<bool>& is_training,
                                      double smoothing, double prior, std::string feature = {});

/// Calendar categories: day of week, month, week of year, public holiday, weekend.
const std::vector<std::string>& calendar_encoder_names();
std::string calendar_category(const std::string& encoder, Date d);

struct EncodingAggregates {
  double mean = 0.0;
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Throws ValidationError on empty input.
EncodingAggregates aggregate_encodings(std::span<const double> values);

struct EncodedColumns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<EncoderModel> models;
};

/// `cal_<encoder>` per calendar encoder, keyed by (department, calendar
/// value), then `cal_mean`, `cal_sum`, `cal_min`, `cal_max` across them.
EncodedColumns calendar_features(std::span<const std::string> departments, std::span<const Date> dates,
                                 std::span<const double> targets, const std::vector<bool>& is_training,
                                 double smoothing, double prior);

/// A subset of department cells; `cells` is indexed by flat cell index.
struct Zone {
  std::string name;
  std::vector<bool> cells;
};

/// Per-day min/max/mean of every cube feature over each zone. With no zones
/// the whole department is one zone and columns are `<feature>_min|max|mean`;
/// otherwise `<feature>_<zone>_min|max|mean`. columns[c][t].
/// Throws ValidationError on an empty zone and ShapeError on a size mismatch.
EncodedColumns aggregate_spatial(const DataCube& cube, const std::vector<Zone>& zones = {});

/// Ordered target encoding of a categorical raster by fire counts per pixel.
/// Day t of the output encodes each cell's category with statistics of
/// training days before t: (fires on cells of that category + a * prior) /
/// (cell-days of that category + a). Returns [day][cell].
std::vector<float> encode_categorical_raster(std::span<const double> categories, const DailyRasters& fires,
                                             const std::vector<bool>& is_training_day, double smoothing,
                                             double prior);

/// Mean fire count per training cell-day.
double training_cell_day_mean(const DailyRasters& fires, const std::vector<bool>& is_training_day);

/// Maps land-cover codes to coarser groups.
class LandcoverMapping {
 public:
  /// Corine level-3 codes (44 classes) to ten groups numbered 1..10: urban,
  /// transport, forest, natural vegetation, agriculture, grassland, natural
  /// non-vegetated, littoral, water, wetland.
  static LandcoverMapping corine_default();
  /// `code,group,group_name` rows.
  static LandcoverMapping read_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

  /// Throws ValidationError for an unmapped code.
  int group(int code) const;
  const std::map<int, int>& codes() const noexcept { return code_to_group_; }
  const std::map<int, std::string>& group_names() const noexcept { return group_names_; }

 private:
  std::map<int, int> code_to_group_;
  std::map<int, std::string> group_names_;
};

struct Scaler {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> sd;
  /// Columns left untouched (past-risk features and zero-variance columns).
  std::vector<bool> passthrough;

  void apply(FeatureTable& table) const;
};

/// True for columns exempt from scaling: `past_risk*` and `past_ba*`.
bool is_standardization_exempt(const std::string& name);

/// Fits z = (x - mean) / sd on training rows (population sd) and applies it
/// to every row. Zero-variance columns pass through with a warning.
Scaler standardize(FeatureTable& table, const std::vector<bool>& is_training);

void write_scaler_json(const Scaler& scaler, const std::filesystem::path& path);

}  // namespace firerisk
