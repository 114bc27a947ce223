#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/elm.hpp"
#include "ceemdes/energy_slice.hpp"
#include "ceemdes/features.hpp"
#include "ceemdes/io.hpp"
#include "ceemdes/signal.hpp"
#include "ceemdes/simulator.hpp"

namespace ceemdes {

inline constexpr const char* kReportFormatTag = "report-v1";

enum class FeatureSource { full_signal, limb_reconstruction, both };

struct PipelineConfig {
  DatasetRequest dataset;
  std::string dataset_dir;  // load signals from here instead of simulating
  CeemdConfig ceemd;
  EsConfig es;
  StftConfig stft;
  FeatureConfig features;
  ElmConfig elm;
  FeatureGroups feature_groups;
  bool ablation = true;           // also report time+frequency and entropy-only groups
  bool compare_fixed_radars = true;
  FeatureSource features_source = FeatureSource::full_signal;
  std::size_t trials = 1000;
  bool reshuffle_split = false;   // re-draw the train/test split per trial
  std::size_t jobs = 0;           // 0: OpenMP default

  void validate() const;
};

json to_json(const PipelineConfig& cfg);

// Builds a config from a JSON document; keys absent from the document keep
// their defaults.
PipelineConfig pipeline_config_from_json(const json& doc);

// Applies "a.b.c=value" to a JSON document; the value is parsed as JSON when
// possible and kept as a string otherwise.
void apply_override(json& doc, const std::string& assignment);

struct AccuracySummary {
  std::string radar;     // "selected", "0deg", "90deg"
  std::string source;    // "full_signal" or "limb_reconstruction"
  std::string features;  // "all", "time_frequency", "entropy", or "custom"
  double mean_accuracy_pct = 0.0;
  double std_accuracy_pct = 0.0;
  double min_accuracy_pct = 0.0;
  double max_accuracy_pct = 0.0;
  std::vector<double> mean_recall;
  std::vector<std::vector<std::size_t>> confusion;  // summed over trials
};

struct PipelineReport {
  std::size_t n_scenes = 0;
  std::size_t n_used = 0;
  std::vector<std::pair<std::size_t, std::string>> excluded;
  std::map<std::string, std::size_t> selection_counts;
  std::map<std::string, double> mean_ratio;
  std::string majority_radar;
  std::vector<std::string> label_map;
  std::vector<AccuracySummary> results;
  json document;  // the serialized report ("report-v1")

  const AccuracySummary* find(const std::string& radar, const std::string& source,
                              const std::string& features) const;
  double selection_fraction(const std::string& radar_id) const;
};

PipelineReport run_pipeline(const PipelineConfig& cfg);

}  // namespace ceemdes
