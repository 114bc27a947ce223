// ceemdes: command-line front end for the decomposition / selection /
// classification pipeline. Every subcommand exits 0 only when its output was
// written; failures print {"error": ..., "command": ...} on stderr.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/elm.hpp"
#include "ceemdes/energy_slice.hpp"
#include "ceemdes/error.hpp"
#include "ceemdes/features.hpp"
#include "ceemdes/io.hpp"
#include "ceemdes/otsu.hpp"
#include "ceemdes/pipeline.hpp"
#include "ceemdes/rng.hpp"
#include "ceemdes/signal.hpp"
#include "ceemdes/simulator.hpp"

namespace fs = std::filesystem;
using namespace ceemdes;

namespace {

// Config document shared by all subcommands: --config file, then --set
// overrides, then subcommand flags.
struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

PipelineConfig load_config(const Common& c) {
  json doc = json::object();
  if (!c.config_path.empty()) doc = read_json(c.config_path);
  for (const auto& o : c.overrides) apply_override(doc, o);
  return pipeline_config_from_json(doc);
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config document");
  app->add_option("--set", c.overrides, "override a config path, e.g. ceemd.ensemble_pairs=10");
}

struct SceneFiles {
  std::size_t index = 0;
  std::string label;
  std::string split;
  std::vector<std::pair<std::string, fs::path>> channels;  // radar id, file
};

// Groups a dataset directory by scene. Without a manifest every signal file in
// the directory is one channel of a single scene.
std::vector<SceneFiles> scan_dir(const fs::path& dir) {
  std::vector<SceneFiles> out;
  if (fs::exists(dir / "manifest.json")) {
    const Manifest m = read_manifest(dir / "manifest.json");
    std::map<std::size_t, SceneFiles> by_index;
    for (const auto& e : m.entries) {
      auto& s = by_index[e.index];
      s.index = e.index;
      s.label = e.motion_class;
      s.split = e.split;
      s.channels.emplace_back(e.radar_id, dir / e.file);
    }
    for (auto& [i, s] : by_index) out.push_back(std::move(s));
  } else {
    SceneFiles s;
    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(dir)) {
      const auto ext = ent.path().extension();
      if (ext == ".iq" || ext == ".csv") files.push_back(ent.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto meta = read_signal(f).meta;
      s.label = meta.motion_class;
      s.channels.emplace_back(meta.radar_id.empty() ? f.stem().string() : meta.radar_id, f);
    }
    if (s.channels.empty()) throw Error("no signal files in " + dir.string());
    out.push_back(std::move(s));
  }
  for (auto& s : out) {
    std::sort(s.channels.begin(), s.channels.end());
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

struct FeatureTable {
  std::vector<std::string> schema;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  Eigen::MatrixXd x;
};

FeatureTable read_features_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty feature file " + path.string());
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "source_id" || header[1] != "label") {
    throw Error("feature file must start with source_id,label: " + path.string());
  }
  FeatureTable t;
  t.schema.assign(header.begin() + 2, header.end());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw Error("ragged row in " + path.string());
    t.ids.push_back(cells[0]);
    t.labels.push_back(cells[1]);
    std::vector<double> r;
    for (std::size_t i = 2; i < cells.size(); ++i) r.push_back(std::stod(cells[i]));
    rows.push_back(std::move(r));
  }
  t.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.schema.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      t.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CEEMD energy-slice micro-Doppler toolkit"};
  app.require_subcommand(1);

  // simulate
  Common sim_c;
  std::string sim_out, sim_format = "iq";
  std::uint64_t sim_seed = 1;
  std::size_t sim_train = 0, sim_test = 0;
  auto* sim = app.add_subcommand("simulate", "write a synthetic labelled dataset");
  add_common(sim, sim_c);
  sim->add_option("--out", sim_out, "output directory")->required();
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--n-train", sim_train, "training scenes per class");
  sim->add_option("--n-test", sim_test, "test scenes per class");
  sim->add_option("--format", sim_format, "iq or csv")->check(CLI::IsMember({"iq", "csv"}));

  // decompose
  Common dec_c;
  std::string dec_in, dec_out;
  auto* dec = app.add_subcommand("decompose", "CEEMD of one signal file (I and Q channels)");
  add_common(dec, dec_c);
  dec->add_option("--in", dec_in, "signal file")->required();
  dec->add_option("--out", dec_out, "IMF CSV")->required();

  // select
  Common sel_c;
  std::string sel_in, sel_out;
  auto* sel = app.add_subcommand("select", "pick the radar whose limb ratio is nearest the target");
  add_common(sel, sel_c);
  sel->add_option("--in", sel_in, "dataset directory or directory of one scene's channels")->required();
  sel->add_option("--out", sel_out, "selection JSON")->required();

  // features
  Common feat_c;
  std::string feat_in, feat_out, feat_radar = "selected", feat_split = "all", feat_source = "full_signal";
  auto* feat = app.add_subcommand("features", "feature matrix CSV for a dataset directory");
  add_common(feat, feat_c);
  feat->add_option("--in", feat_in, "dataset directory")->required();
  feat->add_option("--out", feat_out, "feature CSV")->required();
  feat->add_option("--radar", feat_radar, "radar id, or 'selected'");
  feat->add_option("--split", feat_split, "train, test or all")->check(CLI::IsMember({"train", "test", "all"}));
  feat->add_option("--source", feat_source, "full_signal or limb_reconstruction")
      ->check(CLI::IsMember({"full_signal", "limb_reconstruction"}));

  // train
  Common train_c;
  std::string train_in, train_out;
  auto* train = app.add_subcommand("train", "fit an ELM on a feature CSV");
  add_common(train, train_c);
  train->add_option("--features", train_in, "feature CSV")->required();
  train->add_option("--out", train_out, "model JSON")->required();

  // eval
  std::string eval_model, eval_in, eval_out;
  auto* ev = app.add_subcommand("eval", "evaluate a model on a feature CSV");
  ev->add_option("--model", eval_model, "model JSON")->required();
  ev->add_option("--features", eval_in, "feature CSV")->required();
  ev->add_option("--out", eval_out, "metrics JSON")->required();

  // pipeline
  Common pipe_c;
  std::string pipe_out;
  std::size_t pipe_jobs = 0, pipe_trials = 0;
  auto* pipe = app.add_subcommand("pipeline", "simulate or load, select, extract, classify, report");
  add_common(pipe, pipe_c);
  pipe->add_option("--out", pipe_out, "report JSON")->required();
  pipe->add_option("--jobs", pipe_jobs, "worker threads (0: OpenMP default)");
  pipe->add_option("--trials", pipe_trials, "ELM trials");

  // spectrogram
  Common spec_c;
  std::string spec_in, spec_out, spec_csv, spec_mask;
  bool spec_limb = false;
  std::size_t otsu_bins = 256;
  auto* spec = app.add_subcommand("spectrogram", "STFT image of one signal file");
  add_common(spec, spec_c);
  spec->add_option("--in", spec_in, "signal file")->required();
  spec->add_option("--out", spec_out, "PGM image")->required();
  spec->add_option("--csv", spec_csv, "also write the magnitude matrix as CSV");
  spec->add_option("--mask", spec_mask, "also write the Otsu mask as PGM");
  spec->add_option("--otsu-bins", otsu_bins, "histogram levels for the mask");
  spec->add_flag("--limb", spec_limb, "use the limb reconstruction instead of the raw signal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json err = {{"error", e.what()}, {"command", "parse"}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "simulate") {
      auto cfg = load_config(sim_c);
      auto req = cfg.dataset;
      if (*sim_seed_opt) req.master_seed = sim_seed;
      if (sim_train) req.n_train = sim_train;
      if (sim_test) req.n_test = sim_test;
      req.format = sim_format == "csv" ? SignalFormat::csv : SignalFormat::iq;
      const auto m = generate_dataset(req, sim_out);
      std::cout << m.entries.size() << " signals written to " << sim_out << "\n";

    } else if (command == "decompose") {
      auto cfg = load_config(dec_c);
      const auto sig = read_signal(dec_in);
      const auto imfs = ceemd_complex(sig.signal, cfg.ceemd);
      write_imfs_csv(dec_out, imfs);
      write_json(dec_out + ".json", {{"source", dec_in},
                                      {"n_imfs_i", imfs.in_phase.size()},
                                      {"n_imfs_q", imfs.quadrature.size()},
                                      {"ceemd", to_json(cfg.ceemd)}});

    } else if (command == "select") {
      auto cfg = load_config(sel_c);
      const auto scenes = scan_dir(sel_in);
      json out_scenes = json::array();
      std::map<std::string, std::size_t> counts;
      for (const auto& s : scenes) {
        std::vector<RadarChannel> chans;
        for (const auto& [id, file] : s.channels) chans.push_back({id, read_signal(file).signal});
        CeemdConfig c = cfg.ceemd;
        c.rng_seed = derive_seed(cfg.ceemd.rng_seed, s.index);
        json entry = {{"index", s.index}, {"class", s.label}};
        try {
          const auto rep = select_radar(chans, c, cfg.es, cfg.stft);
          entry["report"] = to_json(rep);
          ++counts[rep.selected];
        } catch (const Error& e) {
          entry["error"] = e.what();
        }
        out_scenes.push_back(std::move(entry));
      }
      json doc = {{"format", "selection-v1"}, {"target_ratio", cfg.es.target_ratio},
                  {"counts", counts}, {"scenes", out_scenes}};
      if (scenes.size() == 1 && out_scenes[0].contains("report")) doc["selected"] = out_scenes[0]["report"]["selected"];
      write_json(sel_out, doc);

    } else if (command == "features") {
      auto cfg = load_config(feat_c);
      const auto scenes = scan_dir(feat_in);
      std::vector<FeatureVector> rows(scenes.size());
      std::vector<std::string> labels(scenes.size());
      std::vector<char> keep(scenes.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::size_t i = 0; i < scenes.size(); ++i) {
        const auto& s = scenes[i];
        if (feat_split != "all" && s.split != feat_split) continue;
        std::vector<RadarChannel> chans;
        for (const auto& [id, file] : s.channels) chans.push_back({id, read_signal(file).signal});
        CeemdConfig c = cfg.ceemd;
        c.rng_seed = derive_seed(cfg.ceemd.rng_seed, s.index);
        std::string radar = feat_radar;
        FeatureVector fv;
        try {
          if (radar == "selected") radar = select_radar(chans, c, cfg.es, cfg.stft).selected;
          auto it = std::find_if(chans.begin(), chans.end(),
                                 [&](const RadarChannel& ch) { return ch.radar_id == radar; });
          if (it == chans.end()) throw Error("radar " + radar + " not present");
          ComplexSignal x = it->signal;
          if (feat_source == "limb_reconstruction") x = analyze_limb(x, c, cfg.es, cfg.stft).limb;
          fv = build_feature_vector(x, cfg.features, "scene_" + std::to_string(s.index) + "_" + radar);
        } catch (const Error& e) {
          fv.valid = false;
          fv.error = e.what();
        }
        if (fv.valid) {
          rows[i] = std::move(fv);
          labels[i] = s.label;
          keep[i] = 1;
        } else {
#pragma omp critical
          std::cerr << "scene " << s.index << " excluded: " << fv.error << "\n";
        }
      }
      std::vector<FeatureVector> kept_rows;
      std::vector<std::string> kept_labels;
      for (std::size_t i = 0; i < scenes.size(); ++i) {
        if (!keep[i]) continue;
        kept_rows.push_back(std::move(rows[i]));
        kept_labels.push_back(labels[i]);
      }
      if (kept_rows.empty()) throw Error("no valid feature rows");
      write_features_csv(feat_out, kept_rows, kept_labels);

    } else if (command == "train") {
      auto cfg = load_config(train_c);
      const auto t = read_features_csv(train_in);
      auto model = elm_train(t.x, t.labels, cfg.elm);
      auto doc = to_json(model);
      doc["schema"] = t.schema;
      write_json(train_out, doc);

    } else if (command == "eval") {
      const auto doc = read_json(eval_model);
      const auto model = model_from_json(doc);
      const auto t = read_features_csv(eval_in);
      if (doc.contains("schema") && doc.at("schema").get<std::vector<std::string>>() != t.schema) {
        throw Error("feature schema differs from the model's");
      }
      write_json(eval_out, to_json(evaluate(model, t.x, t.labels)));

    } else if (command == "pipeline") {
      auto cfg = load_config(pipe_c);
      if (pipe_jobs) cfg.jobs = pipe_jobs;
      if (pipe_trials) cfg.trials = pipe_trials;
      const auto report = run_pipeline(cfg);
      write_json(pipe_out, report.document);

    } else if (command == "spectrogram") {
      auto cfg = load_config(spec_c);
      ComplexSignal x = read_signal(spec_in).signal;
      if (spec_limb) x = analyze_limb(x, cfg.ceemd, cfg.es, cfg.stft).limb;
      const auto s = stft(x, cfg.stft);
      write_spectrogram_pgm(spec_out, s);
      if (!spec_csv.empty()) write_spectrogram_csv(spec_csv, s);
      if (!spec_mask.empty()) write_mask_pgm(spec_mask, s, otsu_filter(s, otsu_bins));
    }
  } catch (const std::exception& e) {
    json err = {{"error", e.what()}, {"command", command}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
