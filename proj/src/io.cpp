#include "ceemdes/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ceemdes/error.hpp"

namespace ceemdes {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

void put_f64le(std::string& buf, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double get_f64le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

template <typename T>
void read_field(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* window_name(WindowKind k) { return k == WindowKind::hann ? "hann" : "rect"; }
const char* mode_name(MagnitudeMode m) { return m == MagnitudeMode::power ? "power" : "magnitude"; }

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto flat = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) throw Error("matrix size mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return flat;
}

std::vector<double> vec_to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void write_json(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_signal(const fs::path& path, const ComplexSignal& signal, const SignalMeta& meta,
                  SignalFormat format) {
  if (format == SignalFormat::iq) {
    std::string buf;
    buf.reserve(signal.size() * 16);
    for (const auto& z : signal.samples()) {
      put_f64le(buf, z.real());
      put_f64le(buf, z.imag());
    }
    auto out = open_out(path, true);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("cannot write " + path.string());
  } else {
    auto out = open_out(path);
    out << "t,I,Q\n";
    for (std::size_t i = 0; i < signal.size(); ++i) {
      const double t = signal.t0_s() + static_cast<double>(i) / signal.sample_rate_hz();
      out << csv_number(t) << ',' << csv_number(signal.samples()[i].real()) << ','
          << csv_number(signal.samples()[i].imag()) << '\n';
    }
    if (!out) throw Error("cannot write " + path.string());
  }

  json side = {{"sample_rate_hz", signal.sample_rate_hz()},
               {"duration_s", signal.duration_s()},
               {"class", meta.motion_class},
               {"radar_id", meta.radar_id},
               {"seed", meta.seed},
               {"format", format == SignalFormat::iq ? kSignalFormatTag : "csv-t-i-q-v1"}};
  write_json(fs::path(path.string() + ".json"), side);
}

LoadedSignal read_signal(const fs::path& path) {
  const json side = read_json(fs::path(path.string() + ".json"));
  LoadedSignal out;
  out.meta.motion_class = side.value("class", "");
  out.meta.radar_id = side.value("radar_id", "");
  out.meta.seed = side.value("seed", std::uint64_t{0});
  const double fs = side.at("sample_rate_hz").get<double>();

  std::vector<cplx> z;
  if (path.extension() == ".csv") {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string t, i, q;
      if (!std::getline(ss, t, ',') || !std::getline(ss, i, ',') || !std::getline(ss, q, ',')) {
        throw Error("malformed CSV row in " + path.string());
      }
      z.emplace_back(std::stod(i), std::stod(q));
    }
  } else {
    auto in = open_in(path, true);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() % 16 != 0) throw Error("truncated IQ file " + path.string());
    z.resize(bytes.size() / 16);
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] = {get_f64le(&bytes[16 * k]), get_f64le(&bytes[16 * k + 8])};
    }
  }
  out.signal = ComplexSignal(std::move(z), fs);
  return out;
}

void write_manifest(const fs::path& path, const Manifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"file", e.file},
                       {"class", e.motion_class},
                       {"radar_id", e.radar_id},
                       {"split", e.split},
                       {"seed", e.seed},
                       {"index", e.index}});
  }
  write_json(path, {{"format", "manifest-v1"},
                    {"master_seed", m.master_seed},
                    {"sample_rate_hz", m.sample_rate_hz},
                    {"duration_s", m.duration_s},
                    {"entries", entries}});
}

Manifest read_manifest(const fs::path& path) {
  const json j = read_json(path);
  Manifest m;
  m.master_seed = j.value("master_seed", std::uint64_t{0});
  m.sample_rate_hz = j.value("sample_rate_hz", 0.0);
  m.duration_s = j.value("duration_s", 0.0);
  for (const auto& e : j.at("entries")) {
    m.entries.push_back({e.at("file").get<std::string>(), e.at("class").get<std::string>(),
                         e.at("radar_id").get<std::string>(), e.at("split").get<std::string>(),
                         e.value("seed", std::uint64_t{0}), e.value("index", std::size_t{0})});
  }
  return m;
}

namespace {
void write_imf_columns(std::ostream& out, const std::vector<const ImfSet*>& sets,
                       const std::vector<std::string>& prefixes) {
  std::vector<const std::vector<double>*> cols;
  std::string header;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t k = 0; k < sets[s]->imfs.size(); ++k) {
      header += (header.empty() ? "" : ",") + prefixes[s] + "imf" + std::to_string(k + 1);
      cols.push_back(&sets[s]->imfs[k]);
    }
    header += (header.empty() ? "" : ",") + prefixes[s] + "residual";
    cols.push_back(&sets[s]->residual);
  }
  out << header << '\n';
  const std::size_t n = sets.front()->source_len;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out << (c ? "," : "") << csv_number((*cols[c])[i]);
    }
    out << '\n';
  }
}
}  // namespace

void write_imfs_csv(const fs::path& path, const ComplexImfSet& imfs) {
  auto out = open_out(path);
  write_imf_columns(out, {&imfs.in_phase, &imfs.quadrature}, {"i_", "q_"});
  if (!out) throw Error("cannot write " + path.string());
}

void write_imfs_csv(const fs::path& path, const ImfSet& imfs) {
  auto out = open_out(path);
  write_imf_columns(out, {&imfs}, {""});
  if (!out) throw Error("cannot write " + path.string());
}

void write_spectrogram_csv(const fs::path& path, const Spectrogram& spec) {
  auto out = open_out(path);
  out << "frame_times_s";
  for (double t : spec.frame_times_s) out << ',' << csv_number(t);
  out << "\nbin_freqs_hz";
  for (double f : spec.bin_freqs_hz) out << ',' << csv_number(f);
  out << '\n';
  for (std::size_t f = 0; f < spec.n_frames; ++f) {
    for (std::size_t k = 0; k < spec.n_bins; ++k) out << (k ? "," : "") << csv_number(spec.at(f, k));
    out << '\n';
  }
  if (!out) throw Error("cannot write " + path.string());
}

namespace {
void write_pgm(const fs::path& path, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels) {
  auto out = open_out(path, true);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw Error("cannot write " + path.string());
}
}  // namespace

void write_spectrogram_pgm(const fs::path& path, const Spectrogram& spec) {
  const double mx = spec.max_value();
  std::vector<std::uint8_t> px(spec.n_frames * spec.n_bins, 0);
  for (std::size_t row = 0; row < spec.n_bins; ++row) {
    const std::size_t bin = spec.n_bins - 1 - row;
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
      const double v = mx > 0.0 ? std::round(255.0 * spec.at(f, bin) / mx) : 0.0;
      px[row * spec.n_frames + f] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  write_pgm(path, spec.n_frames, spec.n_bins, px);
}

void write_mask_pgm(const fs::path& path, const Spectrogram& spec, const OtsuResult& otsu) {
  std::vector<std::uint8_t> px(spec.n_frames * spec.n_bins, 0);
  for (std::size_t row = 0; row < spec.n_bins; ++row) {
    const std::size_t bin = spec.n_bins - 1 - row;
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
      px[row * spec.n_frames + f] = otsu.mask[f * spec.n_bins + bin] ? 255 : 0;
    }
  }
  write_pgm(path, spec.n_frames, spec.n_bins, px);
}

Pgm read_pgm(const fs::path& path) {
  auto in = open_in(path, true);
  std::string magic;
  std::size_t maxval = 0;
  Pgm p;
  in >> magic >> p.width >> p.height >> maxval;
  if (magic != "P5" || maxval != 255) throw Error("unsupported PGM " + path.string());
  in.get();
  p.pixels.resize(p.width * p.height);
  in.read(reinterpret_cast<char*>(p.pixels.data()), static_cast<std::streamsize>(p.pixels.size()));
  if (!in) throw Error("truncated PGM " + path.string());
  return p;
}

void write_features_csv(const fs::path& path, const std::vector<FeatureVector>& rows,
                        const std::vector<std::string>& labels) {
  auto out = open_out(path);
  out << "source_id,label";
  if (!rows.empty()) {
    for (const auto& name : rows.front().schema) out << ',' << name;
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r].source_id << ',' << (r < labels.size() ? labels[r] : "");
    for (double v : rows[r].values) out << ',' << csv_number(v);
    out << '\n';
  }
  if (!out) throw Error("cannot write " + path.string());
}

// ---------------------------------------------------------------------------

json to_json(const CeemdConfig& c) {
  return {{"noise_amplitude_rel", c.noise_amplitude_rel}, {"ensemble_pairs", c.ensemble_pairs},
          {"max_imfs", c.max_imfs},                       {"max_sift_iters", c.max_sift_iters},
          {"envelope_tol", c.envelope_tol},               {"extrema_zero_slack", c.extrema_zero_slack},
          {"rng_seed", c.rng_seed}};
}

void from_json(const json& j, CeemdConfig& c) {
  read_field(j, "noise_amplitude_rel", c.noise_amplitude_rel);
  read_field(j, "ensemble_pairs", c.ensemble_pairs);
  read_field(j, "max_imfs", c.max_imfs);
  read_field(j, "max_sift_iters", c.max_sift_iters);
  read_field(j, "envelope_tol", c.envelope_tol);
  read_field(j, "extrema_zero_slack", c.extrema_zero_slack);
  read_field(j, "rng_seed", c.rng_seed);
}

json to_json(const StftConfig& c) {
  return {{"window_len", c.window_len},
          {"hop", c.hop},
          {"fft_len", c.fft_len},
          {"window_kind", window_name(c.window_kind)}};
}

void from_json(const json& j, StftConfig& c) {
  read_field(j, "window_len", c.window_len);
  read_field(j, "hop", c.hop);
  read_field(j, "fft_len", c.fft_len);
  if (j.contains("window_kind")) {
    const auto k = j.at("window_kind").get<std::string>();
    if (k == "hann") c.window_kind = WindowKind::hann;
    else if (k == "rect") c.window_kind = WindowKind::rect;
    else throw Error("unknown window_kind: " + k);
  }
}

json to_json(const EsConfig& c) {
  return {{"limb_imf_count", c.limb_imf_count},
          {"target_ratio", c.target_ratio},
          {"magnitude_mode", mode_name(c.magnitude_mode)}};
}

void from_json(const json& j, EsConfig& c) {
  read_field(j, "limb_imf_count", c.limb_imf_count);
  read_field(j, "target_ratio", c.target_ratio);
  if (j.contains("magnitude_mode")) {
    const auto m = j.at("magnitude_mode").get<std::string>();
    if (m == "power") c.magnitude_mode = MagnitudeMode::power;
    else if (m == "magnitude") c.magnitude_mode = MagnitudeMode::magnitude;
    else throw Error("unknown magnitude_mode: " + m);
  }
}

json to_json(const EmbeddingConfig& c) {
  return {{"m", c.m}, {"r_rel", c.r_rel}, {"delay", c.delay}};
}

void from_json(const json& j, EmbeddingConfig& c) {
  read_field(j, "m", c.m);
  read_field(j, "r_rel", c.r_rel);
  read_field(j, "delay", c.delay);
}

json to_json(const MseConfig& c) { return {{"max_scale", c.max_scale}, {"base", to_json(c.base)}}; }

void from_json(const json& j, MseConfig& c) {
  read_field(j, "max_scale", c.max_scale);
  if (j.contains("base")) from_json(j.at("base"), c.base);
}

json to_json(const ElmConfig& c) {
  return {{"hidden_units", c.hidden_units},
          {"ridge_lambda", c.ridge_lambda},
          {"weight_scale", c.weight_scale},
          {"rng_seed", c.rng_seed}};
}

void from_json(const json& j, ElmConfig& c) {
  read_field(j, "hidden_units", c.hidden_units);
  read_field(j, "ridge_lambda", c.ridge_lambda);
  read_field(j, "weight_scale", c.weight_scale);
  read_field(j, "rng_seed", c.rng_seed);
}

json to_json(const SimConfig& c) {
  return {{"sample_rate_hz", c.sample_rate_hz}, {"duration_s", c.duration_s},
          {"snr_db", c.snr_db},                 {"wavelength_scale", c.wavelength_scale},
          {"add_noise", c.add_noise},           {"rng_seed", c.rng_seed}};
}

void from_json(const json& j, SimConfig& c) {
  read_field(j, "sample_rate_hz", c.sample_rate_hz);
  read_field(j, "duration_s", c.duration_s);
  read_field(j, "snr_db", c.snr_db);
  read_field(j, "wavelength_scale", c.wavelength_scale);
  read_field(j, "add_noise", c.add_noise);
  read_field(j, "rng_seed", c.rng_seed);
}

json to_json(const SelectionReport& r) {
  json per = json::array();
  for (const auto& p : r.per_radar) {
    json e = {{"radar_id", p.radar_id}, {"ratio", p.ratio}, {"distance", p.distance}, {"valid", p.valid}};
    if (!p.valid) e["error"] = p.error;
    per.push_back(std::move(e));
  }
  return {{"target_ratio", r.target_ratio}, {"per_radar", per}, {"selected", r.selected}};
}

SelectionReport selection_from_json(const json& j) {
  SelectionReport r;
  r.target_ratio = j.at("target_ratio").get<double>();
  for (const auto& e : j.at("per_radar")) {
    RadarRatio p;
    p.radar_id = e.at("radar_id").get<std::string>();
    p.ratio = e.at("ratio").get<double>();
    p.distance = e.at("distance").get<double>();
    p.valid = e.at("valid").get<bool>();
    p.error = e.value("error", "");
    r.per_radar.push_back(std::move(p));
  }
  r.selected = j.at("selected").get<std::string>();
  return r;
}

json to_json(const ElmModel& m) {
  return {{"format", kModelFormatTag},
          {"hidden_units", m.input_weights.rows()},
          {"n_features", m.input_weights.cols()},
          {"n_classes", m.output_weights.cols()},
          {"input_weights", matrix_to_json(m.input_weights)},
          {"biases", vec_to_std(m.biases)},
          {"output_weights", matrix_to_json(m.output_weights)},
          {"label_map", m.label_map},
          {"norm_params", {{"mean", vec_to_std(m.norm_mean)}, {"std", vec_to_std(m.norm_std)}}},
          {"config", to_json(m.config)},
          {"seed", m.config.rng_seed}};
}

ElmModel model_from_json(const json& j) {
  if (j.value("format", "") != kModelFormatTag) throw Error("unsupported model format");
  ElmModel m;
  const auto l = j.at("hidden_units").get<Eigen::Index>();
  const auto d = j.at("n_features").get<Eigen::Index>();
  const auto c = j.at("n_classes").get<Eigen::Index>();
  m.input_weights = matrix_from_json(j.at("input_weights"), l, d);
  m.biases = vec_from_json(j.at("biases"));
  m.output_weights = matrix_from_json(j.at("output_weights"), l, c);
  m.label_map = j.at("label_map").get<std::vector<std::string>>();
  m.norm_mean = vec_from_json(j.at("norm_params").at("mean"));
  m.norm_std = vec_from_json(j.at("norm_params").at("std"));
  from_json(j.at("config"), m.config);
  if (m.biases.size() != l || m.norm_mean.size() != d || m.norm_std.size() != d ||
      static_cast<Eigen::Index>(m.label_map.size()) != c) {
    throw Error("inconsistent model dimensions");
  }
  return m;
}

json to_json(const Metrics& m) {
  return {{"accuracy_pct", m.accuracy_pct},
          {"recall", m.recall},
          {"confusion", m.confusion},
          {"label_map", m.label_map}};
}

}  // namespace ceemdes
