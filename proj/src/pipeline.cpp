#include "ceemdes/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include <omp.h>

#include "ceemdes/error.hpp"
#include "ceemdes/rng.hpp"

namespace ceemdes {

namespace {

const char* source_name(FeatureSource s) {
  switch (s) {
    case FeatureSource::full_signal:
      return "full_signal";
    case FeatureSource::limb_reconstruction:
      return "limb_reconstruction";
    case FeatureSource::both:
      return "both";
  }
  return "full_signal";
}

FeatureSource source_from_string(const std::string& s) {
  if (s == "full_signal") return FeatureSource::full_signal;
  if (s == "limb_reconstruction") return FeatureSource::limb_reconstruction;
  if (s == "both") return FeatureSource::both;
  throw Error("unknown features_source: " + s);
}

template <typename T>
void read_field(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

json scene_to_json(const MotionScene& s) {
  return {{"swing_rate_hz", s.swing_rate_hz},
          {"limb_peak_speed_mps", s.limb_peak_speed_mps},
          {"trunk_sway_speed_mps", s.trunk_sway_speed_mps},
          {"part_area_fractions",
           {{"trunk_head", s.part_area_fractions.trunk_head},
            {"arms_each", s.part_area_fractions.arms_each},
            {"legs_each", s.part_area_fractions.legs_each}}},
          {"calibrate_limb_share", s.calibrate_limb_share},
          {"limb_share", s.limb_share}};
}

void scene_from_json(const json& j, MotionScene& s) {
  read_field(j, "swing_rate_hz", s.swing_rate_hz);
  read_field(j, "limb_peak_speed_mps", s.limb_peak_speed_mps);
  read_field(j, "trunk_sway_speed_mps", s.trunk_sway_speed_mps);
  if (j.contains("part_area_fractions")) {
    const auto& f = j.at("part_area_fractions");
    read_field(f, "trunk_head", s.part_area_fractions.trunk_head);
    read_field(f, "arms_each", s.part_area_fractions.arms_each);
    read_field(f, "legs_each", s.part_area_fractions.legs_each);
  }
  read_field(j, "calibrate_limb_share", s.calibrate_limb_share);
  read_field(j, "limb_share", s.limb_share);
}

struct SceneInput {
  std::size_t index = 0;
  std::string label;
  bool is_train = true;
  std::vector<RadarChannel> channels;
};

struct SceneRecord {
  std::size_t index = 0;
  std::string label;
  bool is_train = true;
  bool valid = false;
  std::string reason;
  SelectionReport selection;
  std::map<std::string, FeatureVector> full;  // by radar id
  std::map<std::string, FeatureVector> limb;
};

SceneRecord process_scene(const PipelineConfig& cfg, SceneInput in) {
  SceneRecord rec;
  rec.index = in.index;
  rec.label = in.label;
  rec.is_train = in.is_train;

  const bool want_full = cfg.features_source != FeatureSource::limb_reconstruction;
  const bool want_limb = cfg.features_source != FeatureSource::full_signal;

  CeemdConfig ceemd_cfg = cfg.ceemd;
  ceemd_cfg.rng_seed = derive_seed(cfg.ceemd.rng_seed, in.index);

  rec.selection.target_ratio = cfg.es.target_ratio;
  std::map<std::string, ComplexSignal> limbs;
  for (const auto& ch : in.channels) {
    RadarRatio r;
    r.radar_id = ch.radar_id;
    try {
      auto la = analyze_limb(ch.signal, ceemd_cfg, cfg.es, cfg.stft);
      r.ratio = la.ratio;
      r.distance = std::abs(la.ratio - cfg.es.target_ratio);
      r.valid = true;
      if (want_limb) limbs.emplace(ch.radar_id, std::move(la.limb));
    } catch (const Error& e) {
      r.error = e.what();
    }
    rec.selection.per_radar.push_back(std::move(r));
  }
  try {
    rec.selection.selected = pick_radar(rec.selection.per_radar);
  } catch (const Error& e) {
    rec.reason = e.what();
    return rec;
  }

  const std::string sid = "scene_" + std::to_string(in.index);
  for (const auto& ch : in.channels) {
    const bool needed = cfg.compare_fixed_radars || ch.radar_id == rec.selection.selected;
    if (!needed) continue;
    if (want_full) {
      auto fv = build_feature_vector(ch.signal, cfg.features, sid + "_" + ch.radar_id);
      if (!fv.valid) {
        rec.reason = ch.radar_id + " " + fv.error;
        return rec;
      }
      rec.full.emplace(ch.radar_id, std::move(fv));
    }
    if (want_limb) {
      const auto it = limbs.find(ch.radar_id);
      if (it == limbs.end()) {
        rec.reason = ch.radar_id + " limb reconstruction unavailable";
        return rec;
      }
      auto fv = build_feature_vector(it->second, cfg.features, sid + "_" + ch.radar_id + "_limb");
      if (!fv.valid) {
        rec.reason = ch.radar_id + " limb " + fv.error;
        return rec;
      }
      rec.limb.emplace(ch.radar_id, std::move(fv));
    }
  }
  rec.valid = true;
  return rec;
}

std::vector<SceneInput> load_scene_dir(const PipelineConfig& cfg) {
  const std::filesystem::path dir(cfg.dataset_dir);
  const Manifest m = read_manifest(dir / "manifest.json");
  std::map<std::size_t, SceneInput> by_index;
  for (const auto& e : m.entries) {
    auto& s = by_index[e.index];
    s.index = e.index;
    s.label = e.motion_class;
    s.is_train = e.split == "train";
    s.channels.push_back({e.radar_id, read_signal(dir / e.file).signal});
  }
  std::vector<SceneInput> out;
  for (auto& [idx, s] : by_index) {
    std::sort(s.channels.begin(), s.channels.end(),
              [](const RadarChannel& a, const RadarChannel& b) { return a.radar_id < b.radar_id; });
    out.push_back(std::move(s));
  }
  return out;
}

struct Variant {
  std::string radar;
  std::string source;
  std::string features;
  std::vector<std::size_t> columns;
};

struct TrialResult {
  std::vector<Metrics> per_variant;
};

}  // namespace

void PipelineConfig::validate() const {
  if (!feature_groups.time_domain && !feature_groups.frequency_domain && !feature_groups.entropy) {
    throw Error("at least one feature group must be enabled");
  }
  if (trials < 1) throw Error("trials must be >= 1");
  if (dataset.n_train < 1 || dataset.n_test < 1) throw Error("n_train and n_test must be >= 1");
  ceemd.validate();
  es.validate();
  stft.validate();
  features.embedding.validate();
  features.mse.validate();
  elm.validate();
  if (dataset_dir.empty()) {
    dataset.sim.validate();
    dataset.body.validate();
    dataset.base_scene.validate();
  }
}

json to_json(const PipelineConfig& c) {
  const auto& d = c.dataset;
  return {
      {"dataset",
       {{"n_train", d.n_train},
        {"n_test", d.n_test},
        {"master_seed", d.master_seed},
        {"radar_range_m", d.radar_range_m},
        {"carrier_0deg_hz", d.carrier_0deg_hz},
        {"carrier_90deg_hz", d.carrier_90deg_hz},
        {"sim", to_json(d.sim)},
        {"body", {{"a", d.body.a}, {"b", d.body.b}, {"c", d.body.c}}},
        {"scene", scene_to_json(d.base_scene)}}},
      {"dataset_dir", c.dataset_dir},
      {"ceemd", to_json(c.ceemd)},
      {"es", to_json(c.es)},
      {"stft", to_json(c.stft)},
      {"embedding", to_json(c.features.embedding)},
      {"mse", to_json(c.features.mse)},
      {"elm", to_json(c.elm)},
      {"feature_groups",
       {{"time_domain", c.feature_groups.time_domain},
        {"frequency_domain", c.feature_groups.frequency_domain},
        {"entropy", c.feature_groups.entropy}}},
      {"ablation", c.ablation},
      {"compare_fixed_radars", c.compare_fixed_radars},
      {"features_source", source_name(c.features_source)},
      {"trials", c.trials},
      {"reshuffle_split", c.reshuffle_split},
      {"jobs", c.jobs}};
}

PipelineConfig pipeline_config_from_json(const json& doc) {
  PipelineConfig c;
  try {
    if (doc.contains("dataset")) {
      const auto& d = doc.at("dataset");
      read_field(d, "n_train", c.dataset.n_train);
      read_field(d, "n_test", c.dataset.n_test);
      read_field(d, "master_seed", c.dataset.master_seed);
      read_field(d, "radar_range_m", c.dataset.radar_range_m);
      read_field(d, "carrier_0deg_hz", c.dataset.carrier_0deg_hz);
      read_field(d, "carrier_90deg_hz", c.dataset.carrier_90deg_hz);
      if (d.contains("sim")) from_json(d.at("sim"), c.dataset.sim);
      if (d.contains("body")) {
        read_field(d.at("body"), "a", c.dataset.body.a);
        read_field(d.at("body"), "b", c.dataset.body.b);
        read_field(d.at("body"), "c", c.dataset.body.c);
      }
      if (d.contains("scene")) scene_from_json(d.at("scene"), c.dataset.base_scene);
    }
    read_field(doc, "dataset_dir", c.dataset_dir);
    if (doc.contains("ceemd")) from_json(doc.at("ceemd"), c.ceemd);
    if (doc.contains("es")) from_json(doc.at("es"), c.es);
    if (doc.contains("stft")) from_json(doc.at("stft"), c.stft);
    if (doc.contains("embedding")) from_json(doc.at("embedding"), c.features.embedding);
    if (doc.contains("mse")) from_json(doc.at("mse"), c.features.mse);
    if (doc.contains("elm")) from_json(doc.at("elm"), c.elm);
    if (doc.contains("feature_groups")) {
      const auto& g = doc.at("feature_groups");
      read_field(g, "time_domain", c.feature_groups.time_domain);
      read_field(g, "frequency_domain", c.feature_groups.frequency_domain);
      read_field(g, "entropy", c.feature_groups.entropy);
    }
    read_field(doc, "ablation", c.ablation);
    read_field(doc, "compare_fixed_radars", c.compare_fixed_radars);
    if (doc.contains("features_source")) {
      c.features_source = source_from_string(doc.at("features_source").get<std::string>());
    }
    read_field(doc, "trials", c.trials);
    read_field(doc, "reshuffle_split", c.reshuffle_split);
    read_field(doc, "jobs", c.jobs);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("override must look like key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw Error("invalid override path: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

const AccuracySummary* PipelineReport::find(const std::string& radar, const std::string& source,
                                            const std::string& features) const {
  for (const auto& r : results) {
    if (r.radar == radar && r.source == source && r.features == features) return &r;
  }
  return nullptr;
}

double PipelineReport::selection_fraction(const std::string& radar_id) const {
  const auto it = selection_counts.find(radar_id);
  if (it == selection_counts.end() || n_used == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(n_used);
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const int threads = cfg.jobs > 0 ? static_cast<int>(cfg.jobs) : omp_get_max_threads();

  // 1. Scenes: simulate (or load), select a radar, extract features.
  std::vector<SceneInput> loaded;
  if (!cfg.dataset_dir.empty()) loaded = load_scene_dir(cfg);
  const std::size_t n_scenes = cfg.dataset_dir.empty() ? cfg.dataset.n_scenes() : loaded.size();

  std::vector<SceneRecord> records(n_scenes);
  std::vector<std::exception_ptr> errors(n_scenes);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < n_scenes; ++i) {
    try {
      SceneInput in;
      if (cfg.dataset_dir.empty()) {
        auto s = simulate_scene(cfg.dataset, i);
        in.index = s.index;
        in.label = to_string(s.motion_class);
        in.is_train = s.is_train;
        in.channels = std::move(s.channels);
      } else {
        in = std::move(loaded[i]);
      }
      records[i] = process_scene(cfg, std::move(in));
    } catch (const Error& e) {
      records[i].index = i;
      records[i].reason = e.what();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  PipelineReport report;
  report.n_scenes = n_scenes;
  std::vector<const SceneRecord*> used;
  std::vector<std::string> radar_ids;
  std::map<std::string, double> ratio_sum;
  std::map<std::string, std::size_t> ratio_count;
  for (const auto& r : records) {
    if (!r.valid) {
      report.excluded.emplace_back(r.index, r.reason);
      continue;
    }
    used.push_back(&r);
    ++report.selection_counts[r.selection.selected];
    for (const auto& pr : r.selection.per_radar) {
      if (std::find(radar_ids.begin(), radar_ids.end(), pr.radar_id) == radar_ids.end()) {
        radar_ids.push_back(pr.radar_id);
      }
      if (!pr.valid) continue;
      ratio_sum[pr.radar_id] += pr.ratio;
      ++ratio_count[pr.radar_id];
    }
  }
  report.n_used = used.size();
  if (used.empty()) throw Error("no valid scenes");
  std::sort(radar_ids.begin(), radar_ids.end());
  for (const auto& [id, s] : ratio_sum) report.mean_ratio[id] = s / static_cast<double>(ratio_count[id]);
  {
    std::size_t best = 0;
    for (const auto& [id, n] : report.selection_counts) {
      if (n > best) {
        best = n;
        report.majority_radar = id;
      }
    }
  }

  // 2. Variants: radar x source x feature group.
  std::vector<Variant> variants;
  {
    std::vector<std::string> radars = {"selected"};
    if (cfg.compare_fixed_radars) radars.insert(radars.end(), radar_ids.begin(), radar_ids.end());
    std::vector<std::string> sources;
    if (cfg.features_source != FeatureSource::limb_reconstruction) sources.push_back("full_signal");
    if (cfg.features_source != FeatureSource::full_signal) sources.push_back("limb_reconstruction");

    std::vector<std::pair<std::string, FeatureGroups>> groups;
    const auto& g = cfg.feature_groups;
    const bool all = g.time_domain && g.frequency_domain && g.entropy;
    groups.emplace_back(all ? "all" : "custom", g);
    if (cfg.ablation) {
      if (!all) groups.emplace_back("all", FeatureGroups{true, true, true});
      groups.emplace_back("time_frequency", FeatureGroups{true, true, false});
      groups.emplace_back("entropy", FeatureGroups{false, false, true});
    }
    for (const auto& radar : radars) {
      for (const auto& src : sources) {
        for (const auto& [name, fg] : groups) {
          variants.push_back({radar, src, name, feature_columns(cfg.features, fg)});
        }
      }
    }
  }

  auto row_of = [&](const SceneRecord& r, const Variant& v) -> const FeatureVector& {
    const auto& table = v.source == "full_signal" ? r.full : r.limb;
    const std::string& id = v.radar == "selected" ? r.selection.selected : v.radar;
    return table.at(id);
  };

  std::vector<std::string> labels(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) labels[i] = used[i]->label;
  report.label_map = labels;
  std::sort(report.label_map.begin(), report.label_map.end());
  report.label_map.erase(std::unique(report.label_map.begin(), report.label_map.end()),
                         report.label_map.end());

  std::vector<Eigen::MatrixXd> matrices;
  for (const auto& v : variants) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(used.size()), static_cast<Eigen::Index>(v.columns.size()));
    for (std::size_t i = 0; i < used.size(); ++i) {
      const auto& fv = row_of(*used[i], v);
      for (std::size_t c = 0; c < v.columns.size(); ++c) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = fv.values[v.columns[c]];
      }
    }
    matrices.push_back(std::move(x));
  }

  // 3. Trials: only the ELM seed changes unless the split is reshuffled.
  std::vector<std::size_t> base_train, base_test;
  for (std::size_t i = 0; i < used.size(); ++i) (used[i]->is_train ? base_train : base_test).push_back(i);
  if (base_train.empty() || base_test.empty()) throw Error("empty train or test split");

  auto split_for_trial = [&](std::size_t t, std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
    if (!cfg.reshuffle_split) {
      train = base_train;
      test = base_test;
      return;
    }
    train.clear();
    test.clear();
    std::mt19937_64 gen(derive_seed(cfg.dataset.master_seed ^ 0x5851f42d4c957f2dULL, t));
    for (const auto& cls : report.label_map) {
      std::vector<std::size_t> members;
      std::size_t n_train = 0;
      for (std::size_t i = 0; i < used.size(); ++i) {
        if (labels[i] != cls) continue;
        members.push_back(i);
        if (used[i]->is_train) ++n_train;
      }
      std::shuffle(members.begin(), members.end(), gen);
      train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
      test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
  };

  auto gather = [](const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
  };
  auto gather_labels = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t i : rows) out.push_back(labels[i]);
    return out;
  };

  std::vector<TrialResult> trials(cfg.trials);
  std::vector<std::exception_ptr> trial_errors(cfg.trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    try {
      std::vector<std::size_t> train, test;
      split_for_trial(t, train, test);
      const auto y_train = gather_labels(train);
      const auto y_test = gather_labels(test);
      ElmConfig elm_cfg = cfg.elm;
      elm_cfg.rng_seed = derive_seed(cfg.elm.rng_seed, t);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const auto model = elm_train(gather(matrices[v], train), y_train, elm_cfg);
        auto m = evaluate(model, gather(matrices[v], test), y_test);
        trials[t].per_variant.push_back(std::move(m));
      }
    } catch (...) {
      trial_errors[t] = std::current_exception();
    }
  }
  for (const auto& e : trial_errors) {
    if (e) std::rethrow_exception(e);
  }

  // 4. Aggregate in trial order.
  const std::size_t k = report.label_map.size();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    AccuracySummary s;
    s.radar = variants[v].radar;
    s.source = variants[v].source;
    s.features = variants[v].features;
    s.mean_recall.assign(k, 0.0);
    s.confusion.assign(k, std::vector<std::size_t>(k, 0));
    s.min_accuracy_pct = 100.0;
    s.max_accuracy_pct = 0.0;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& tr : trials) {
      const auto& m = tr.per_variant[v];
      sum += m.accuracy_pct;
      sum2 += m.accuracy_pct * m.accuracy_pct;
      s.min_accuracy_pct = std::min(s.min_accuracy_pct, m.accuracy_pct);
      s.max_accuracy_pct = std::max(s.max_accuracy_pct, m.accuracy_pct);
      for (std::size_t c = 0; c < k; ++c) {
        s.mean_recall[c] += m.recall[c];
        for (std::size_t p = 0; p < k; ++p) s.confusion[c][p] += m.confusion[c][p];
      }
    }
    const double n = static_cast<double>(trials.size());
    s.mean_accuracy_pct = sum / n;
    s.std_accuracy_pct = std::sqrt(std::max(0.0, sum2 / n - s.mean_accuracy_pct * s.mean_accuracy_pct));
    for (auto& r : s.mean_recall) r /= n;
    report.results.push_back(std::move(s));
  }

  // 5. Serialize.
  json results = json::array();
  for (const auto& s : report.results) {
    results.push_back({{"radar", s.radar},
                       {"source", s.source},
                       {"features", s.features},
                       {"mean_accuracy_pct", s.mean_accuracy_pct},
                       {"std_accuracy_pct", s.std_accuracy_pct},
                       {"min_accuracy_pct", s.min_accuracy_pct},
                       {"max_accuracy_pct", s.max_accuracy_pct},
                       {"mean_recall", s.mean_recall},
                       {"confusion", s.confusion}});
  }
  json excluded = json::array();
  for (const auto& [idx, why] : report.excluded) excluded.push_back({{"index", idx}, {"reason", why}});
  json fractions = json::object();
  for (const auto& id : radar_ids) fractions[id] = report.selection_fraction(id);
  json counts = json::object();
  for (const auto& id : radar_ids) {
    const auto it = report.selection_counts.find(id);
    counts[id] = it == report.selection_counts.end() ? 0 : it->second;
  }

  const AccuracySummary* headline = nullptr;
  for (const auto& s : report.results) {
    if (s.radar == "selected") {
      headline = &s;
      break;
    }
  }

  // thread count does not affect results, so it stays out of the report
  json config_doc = to_json(cfg);
  config_doc.erase("jobs");
  report.document = {
      {"format", kReportFormatTag},
      {"config", config_doc},
      {"n_scenes", report.n_scenes},
      {"n_used", report.n_used},
      {"excluded", excluded},
      {"label_map", report.label_map},
      {"selection",
       {{"target_ratio", cfg.es.target_ratio},
        {"counts", counts},
        {"fractions", fractions},
        {"mean_ratio", report.mean_ratio},
        {"majority", report.majority_radar}}},
      {"accuracy_pct", headline ? headline->mean_accuracy_pct : 0.0},
      {"results", results}};
  return report;
}

}  // namespace ceemdes
