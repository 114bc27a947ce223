#include "ceemdes/energy_slice.hpp"

#include <algorithm>
#include <cmath>

#include "ceemdes/error.hpp"

namespace ceemdes {

void EsConfig::validate() const {
  if (limb_imf_count < 1) throw Error("limb_imf_count must be >= 1");
  if (!(target_ratio > 0.0 && target_ratio < 1.0)) throw Error("target_ratio must be in (0, 1)");
}

std::vector<double> reconstruct_limb(const ImfSet& imfs, const EsConfig& cfg) {
  cfg.validate();
  if (imfs.imfs.empty()) throw Error("no IMFs");
  const std::size_t use = std::min(cfg.limb_imf_count, imfs.imfs.size());
  std::vector<double> limb(imfs.imfs.front());
  for (std::size_t k = 1; k < use; ++k) {
    const auto& imf = imfs.imfs[k];
    for (std::size_t i = 0; i < limb.size(); ++i) limb[i] += imf[i];
  }
  return limb;
}

ComplexSignal reconstruct_limb(const ComplexImfSet& imfs, const EsConfig& cfg,
                               double sample_rate_hz, double t0_s) {
  const bool has_i = !imfs.in_phase.imfs.empty();
  const bool has_q = !imfs.quadrature.imfs.empty();
  if (!has_i && !has_q) throw Error("no IMFs");
  const std::size_t n = imfs.in_phase.source_len;
  const auto re = has_i ? reconstruct_limb(imfs.in_phase, cfg) : std::vector<double>(n, 0.0);
  const auto im = has_q ? reconstruct_limb(imfs.quadrature, cfg) : std::vector<double>(n, 0.0);
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {re[i], im[i]};
  return ComplexSignal(std::move(z), sample_rate_hz, t0_s);
}

LimbAnalysis analyze_limb(const ComplexSignal& signal, const CeemdConfig& ceemd_cfg,
                          const EsConfig& es_cfg, const StftConfig& stft_cfg) {
  es_cfg.validate();
  const double total =
      spectrogram_energy(stft(signal, stft_cfg), std::nullopt, es_cfg.magnitude_mode);
  if (!(total > 0.0)) throw Error("zero-energy signal");

  const auto imfs = ceemd_complex(signal, ceemd_cfg);
  LimbAnalysis out;
  if (imfs.in_phase.imfs.empty() && imfs.quadrature.imfs.empty()) {
    // nothing oscillates (e.g. pure DC): everything is residual, i.e. trunk
    out.limb = ComplexSignal(std::vector<cplx>(signal.size()), signal.sample_rate_hz(), signal.t0_s());
  } else {
    out.limb = reconstruct_limb(imfs, es_cfg, signal.sample_rate_hz(), signal.t0_s());
  }
  const double limb =
      spectrogram_energy(stft(out.limb, stft_cfg), std::nullopt, es_cfg.magnitude_mode);
  out.raw_ratio = limb / total;
  out.ratio = std::clamp(out.raw_ratio, 0.0, 1.0);
  return out;
}

double limb_energy_ratio(const ComplexSignal& signal, const CeemdConfig& ceemd_cfg,
                         const EsConfig& es_cfg, const StftConfig& stft_cfg) {
  return analyze_limb(signal, ceemd_cfg, es_cfg, stft_cfg).ratio;
}

std::string pick_radar(const std::vector<RadarRatio>& per_radar) {
  const RadarRatio* best = nullptr;
  for (const auto& r : per_radar) {
    if (!r.valid) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const double diff = r.distance - best->distance;
    if (diff < -kSelectionTieTolerance ||
        (std::abs(diff) <= kSelectionTieTolerance && r.radar_id < best->radar_id)) {
      best = &r;
    }
  }
  if (best == nullptr) throw Error("no valid channels");
  return best->radar_id;
}

SelectionReport select_radar(const std::vector<RadarChannel>& channels,
                             const CeemdConfig& ceemd_cfg, const EsConfig& es_cfg,
                             const StftConfig& stft_cfg) {
  es_cfg.validate();
  if (channels.empty()) throw Error("no valid channels");
  SelectionReport report;
  report.target_ratio = es_cfg.target_ratio;
  for (const auto& ch : channels) {
    RadarRatio r;
    r.radar_id = ch.radar_id;
    try {
      r.ratio = limb_energy_ratio(ch.signal, ceemd_cfg, es_cfg, stft_cfg);
      r.distance = std::abs(r.ratio - es_cfg.target_ratio);
      r.valid = true;
    } catch (const Error& e) {
      r.error = e.what();
    }
    report.per_radar.push_back(std::move(r));
  }
  report.selected = pick_radar(report.per_radar);
  return report;
}

}  // namespace ceemdes
