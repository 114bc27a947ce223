#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/elm.hpp"
#include "ceemdes/energy_slice.hpp"
#include "ceemdes/features.hpp"
#include "ceemdes/otsu.hpp"
#include "ceemdes/signal.hpp"
#include "ceemdes/simulator.hpp"

namespace ceemdes {

using json = nlohmann::json;

inline constexpr const char* kSignalFormatTag = "iq-f64le-v1";
inline constexpr const char* kModelFormatTag = "elm-v1";

struct SignalMeta {
  std::string motion_class;
  std::string radar_id;
  std::uint64_t seed = 0;
};

// Signal files: raw little-endian float64 (I, Q) pairs with a JSON sidecar
// at "<path>.json", or CSV rows "t,I,Q" (header line) with the same sidecar.
void write_signal(const std::filesystem::path& path, const ComplexSignal& signal,
                  const SignalMeta& meta, SignalFormat format = SignalFormat::iq);

struct LoadedSignal {
  ComplexSignal signal;
  SignalMeta meta;
};

// Format chosen by extension (".csv" -> CSV, anything else -> binary IQ).
LoadedSignal read_signal(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

// One column per IMF then the residual; complex sets write I columns then Q.
void write_imfs_csv(const std::filesystem::path& path, const ComplexImfSet& imfs);
void write_imfs_csv(const std::filesystem::path& path, const ImfSet& imfs);

// Two header lines ("frame_times_s,..." and "bin_freqs_hz,...") then one row
// per frame.
void write_spectrogram_csv(const std::filesystem::path& path, const Spectrogram& spec);

// 8-bit binary PGM: width = frames, height = bins, highest frequency on top,
// value = round(255 * mag / max_mag).
void write_spectrogram_pgm(const std::filesystem::path& path, const Spectrogram& spec);
void write_mask_pgm(const std::filesystem::path& path, const Spectrogram& spec,
                    const OtsuResult& otsu);

struct Pgm {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};
Pgm read_pgm(const std::filesystem::path& path);

void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& rows,
                        const std::vector<std::string>& labels);

void write_json(const std::filesystem::path& path, const json& doc);
json read_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// JSON mappings

json to_json(const CeemdConfig& c);
json to_json(const StftConfig& c);
json to_json(const EsConfig& c);
json to_json(const EmbeddingConfig& c);
json to_json(const MseConfig& c);
json to_json(const ElmConfig& c);
json to_json(const SimConfig& c);
json to_json(const SelectionReport& r);
json to_json(const ElmModel& m);
json to_json(const Metrics& m);

void from_json(const json& j, CeemdConfig& c);
void from_json(const json& j, StftConfig& c);
void from_json(const json& j, EsConfig& c);
void from_json(const json& j, EmbeddingConfig& c);
void from_json(const json& j, MseConfig& c);
void from_json(const json& j, ElmConfig& c);
void from_json(const json& j, SimConfig& c);

SelectionReport selection_from_json(const json& j);
ElmModel model_from_json(const json& j);

}  // namespace ceemdes
