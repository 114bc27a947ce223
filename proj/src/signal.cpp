#include "ceemdes/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "ceemdes/error.hpp"

namespace ceemdes {

ComplexSignal::ComplexSignal(std::vector<cplx> samples, double sample_rate_hz, double t0_s)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), t0_s_(t0_s) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error("invalid sample rate");
  }
}

ComplexSignal ComplexSignal::from_real(std::span<const double> samples, double sample_rate_hz,
                                       double t0_s) {
  std::vector<cplx> z(samples.begin(), samples.end());
  return ComplexSignal(std::move(z), sample_rate_hz, t0_s);
}

std::vector<double> ComplexSignal::real_part() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

std::vector<double> ComplexSignal::imag_part() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](cplx z) { return z.imag(); });
  return out;
}

std::vector<double> ComplexSignal::magnitude() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](cplx z) { return std::abs(z); });
  return out;
}

ComplexSignal ComplexSignal::scaled(double k) const {
  std::vector<cplx> z(samples_);
  for (auto& v : z) v *= k;
  return ComplexSignal(std::move(z), sample_rate_hz_, t0_s_);
}

void StftConfig::validate() const {
  if (hop == 0) throw Error("invalid hop");
  if (window_len == 0) throw Error("invalid window length");
  if (hop > window_len) throw Error("invalid hop");
  if (fft_len < window_len) throw Error("fft_len must be >= window_len");
}

double Spectrogram::max_value() const {
  if (mag.empty()) return 0.0;
  return *std::max_element(mag.begin(), mag.end());
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hann) {
    // periodic Hann
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

Spectrogram stft(const ComplexSignal& signal, const StftConfig& cfg) {
  cfg.validate();
  const auto& x = signal.samples();
  if (x.size() < cfg.window_len) throw Error("signal too short");

  const std::size_t n_frames = (x.size() - cfg.window_len) / cfg.hop + 1;
  const std::size_t nfft = cfg.fft_len;
  const std::size_t half = nfft / 2;
  const double fs = signal.sample_rate_hz();
  const double scale = 1.0 / std::sqrt(static_cast<double>(nfft));
  const auto window = make_window(cfg.window_kind, cfg.window_len);

  Spectrogram spec;
  spec.n_frames = n_frames;
  spec.n_bins = nfft;
  spec.mag.assign(n_frames * nfft, 0.0);
  spec.frame_times_s.resize(n_frames);
  spec.bin_freqs_hz.resize(nfft);
  for (std::size_t k = 0; k < nfft; ++k) {
    spec.bin_freqs_hz[k] =
        (static_cast<double>(k) - static_cast<double>(half)) * fs / static_cast<double>(nfft);
  }

  Eigen::FFT<double> fft;
  std::vector<cplx> frame(nfft);
  std::vector<cplx> bins(nfft);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t off = f * cfg.hop;
    std::fill(frame.begin(), frame.end(), cplx{});
    for (std::size_t n = 0; n < cfg.window_len; ++n) frame[n] = x[off + n] * window[n];
    fft.fwd(bins, frame);
    double* row = spec.mag.data() + f * nfft;
    for (std::size_t k = 0; k < nfft; ++k) {
      row[k] = std::abs(bins[(k + nfft - half) % nfft]) * scale;
    }
    spec.frame_times_s[f] =
        signal.t0_s() + (static_cast<double>(off) + 0.5 * static_cast<double>(cfg.window_len)) / fs;
  }
  return spec;
}

double spectrogram_energy(const Spectrogram& spec, std::optional<std::pair<double, double>> band,
                          MagnitudeMode mode) {
  std::vector<std::size_t> cols;
  if (band) {
    const auto [lo, hi] = *band;
    if (!(lo < hi)) throw Error("empty band");
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
      const double f = spec.bin_freqs_hz[k];
      if (f >= lo && f <= hi) cols.push_back(k);
    }
    if (cols.empty()) throw Error("empty band");
  } else {
    cols.resize(spec.n_bins);
    for (std::size_t k = 0; k < spec.n_bins; ++k) cols[k] = k;
  }

  double total = 0.0;
  for (std::size_t f = 0; f < spec.n_frames; ++f) {
    const double* row = spec.mag.data() + f * spec.n_bins;
    for (std::size_t k : cols) {
      total += mode == MagnitudeMode::power ? row[k] * row[k] : row[k];
    }
  }
  return total;
}

}  // namespace ceemdes
