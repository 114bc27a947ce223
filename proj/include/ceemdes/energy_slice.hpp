#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/signal.hpp"

namespace ceemdes {

struct EsConfig {
  std::size_t limb_imf_count = 3;
  double target_ratio = 0.64;  // limb share of the frontal body area
  MagnitudeMode magnitude_mode = MagnitudeMode::power;

  void validate() const;
};

// Elementwise sum of the first min(limb_imf_count, size) IMFs. The residual
// is never included.
std::vector<double> reconstruct_limb(const ImfSet& imfs, const EsConfig& cfg);
ComplexSignal reconstruct_limb(const ComplexImfSet& imfs, const EsConfig& cfg,
                               double sample_rate_hz, double t0_s = 0.0);

struct LimbAnalysis {
  double ratio = 0.0;      // clamped to [0, 1]
  double raw_ratio = 0.0;  // before clamping
  ComplexSignal limb;
};

// Decomposes the signal, rebuilds the limb component and compares the
// spectrogram energies of limb and full signal.
LimbAnalysis analyze_limb(const ComplexSignal& signal, const CeemdConfig& ceemd_cfg,
                          const EsConfig& es_cfg, const StftConfig& stft_cfg);

double limb_energy_ratio(const ComplexSignal& signal, const CeemdConfig& ceemd_cfg,
                         const EsConfig& es_cfg, const StftConfig& stft_cfg);

struct RadarChannel {
  std::string radar_id;
  ComplexSignal signal;
};

struct RadarRatio {
  std::string radar_id;
  double ratio = 0.0;
  double distance = 0.0;
  bool valid = false;
  std::string error;  // reason when !valid
};

struct SelectionReport {
  double target_ratio = 0.64;
  std::vector<RadarRatio> per_radar;
  std::string selected;
};

// Distances closer than this are treated as ties and resolved by radar id.
inline constexpr double kSelectionTieTolerance = 1e-12;

// Picks the radar whose limb ratio is closest to the target from precomputed
// per-radar ratios (invalid entries ignored). Throws "no valid channels".
std::string pick_radar(const std::vector<RadarRatio>& per_radar);

SelectionReport select_radar(const std::vector<RadarChannel>& channels,
                             const CeemdConfig& ceemd_cfg, const EsConfig& es_cfg,
                             const StftConfig& stft_cfg);

}  // namespace ceemdes
