#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ceemdes {

using cplx = std::complex<double>;

// Uniformly sampled complex baseband series.
class ComplexSignal {
 public:
  ComplexSignal() = default;
  ComplexSignal(std::vector<cplx> samples, double sample_rate_hz, double t0_s = 0.0);

  static ComplexSignal from_real(std::span<const double> samples, double sample_rate_hz,
                                 double t0_s = 0.0);

  const std::vector<cplx>& samples() const { return samples_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  double t0_s() const { return t0_s_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;
  std::vector<double> magnitude() const;

  ComplexSignal scaled(double k) const;

 private:
  std::vector<cplx> samples_;
  double sample_rate_hz_ = 1.0;
  double t0_s_ = 0.0;
};

enum class WindowKind { hann, rect };

struct StftConfig {
  std::size_t window_len = 256;
  std::size_t hop = 64;
  std::size_t fft_len = 256;
  WindowKind window_kind = WindowKind::hann;

  void validate() const;
};

// How spectrogram cells are accumulated into an energy figure.
enum class MagnitudeMode { power, magnitude };

// Row-major [n_frames x n_bins] magnitude matrix with axis metadata.
// Bins are centered: the first column is the most negative Doppler bin.
struct Spectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
  std::vector<double> mag;
  std::vector<double> frame_times_s;
  std::vector<double> bin_freqs_hz;

  double at(std::size_t frame, std::size_t bin) const { return mag[frame * n_bins + bin]; }
  double max_value() const;
};

std::vector<double> make_window(WindowKind kind, std::size_t n);

// Short-time Fourier transform with non-centered framing; the trailing
// partial frame is dropped. The DFT is scaled by 1/sqrt(fft_len) so that the
// per-frame bin energy equals the windowed frame energy (Parseval).
Spectrogram stft(const ComplexSignal& signal, const StftConfig& cfg);

// Sum of mag^2 (power) or mag (magnitude) over all frames and the bins whose
// centre frequency lies within [band.first, band.second].
double spectrogram_energy(const Spectrogram& spec,
                          std::optional<std::pair<double, double>> band = std::nullopt,
                          MagnitudeMode mode = MagnitudeMode::power);

}  // namespace ceemdes
