#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ceemdes/error.hpp"
#include "ceemdes/signal.hpp"
#include "oracles.hpp"

using namespace ceemdes;

namespace {
ComplexSignal tone(double f, double fs, std::size_t n, double amp = 1.0) {
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::polar(amp, 2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
  }
  return ComplexSignal(std::move(z), fs);
}
}  // namespace

TEST_SUITE("signal") {
  TEST_CASE("signal duration and real helpers") {
    ComplexSignal s({{1, 2}, {3, -4}}, 4.0);
    CHECK(s.duration_s() == doctest::Approx(0.5));
    CHECK(s.real_part() == std::vector<double>{1, 3});
    CHECK(s.imag_part() == std::vector<double>{2, -4});
    CHECK(s.magnitude()[1] == doctest::Approx(5.0));
    CHECK_THROWS(ComplexSignal({{1, 0}}, 0.0));
  }

  TEST_CASE("stft frame count and axes") {
    StftConfig cfg;
    auto s = stft(tone(100, 2000, 1000), cfg);
    CHECK(s.n_frames == (1000 - 256) / 64 + 1);
    CHECK(s.n_bins == 256);
    CHECK(s.mag.size() == s.n_frames * s.n_bins);
    CHECK(s.frame_times_s.size() == s.n_frames);
    CHECK(s.bin_freqs_hz.front() == doctest::Approx(-1000.0));
    CHECK(s.bin_freqs_hz[128] == doctest::Approx(0.0));
    for (double m : s.mag) CHECK(m >= 0.0);
  }

  TEST_CASE("stft of zero signal is zero") {
    ComplexSignal z(std::vector<cplx>(600), 2000);
    auto s = stft(z, {});
    for (double m : s.mag) CHECK(m == 0.0);
    CHECK(spectrogram_energy(s) == 0.0);
  }

  TEST_CASE("pure tone peaks at its frequency") {
    StftConfig cfg{256, 64, 256, WindowKind::rect};
    auto s = stft(tone(200, 2000, 4000), cfg);
    const double bin_w = 2000.0 / 256.0;
    for (std::size_t f = 0; f < s.n_frames; ++f) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < s.n_bins; ++k) {
        if (s.at(f, k) > s.at(f, best)) best = k;
      }
      CHECK(std::abs(s.bin_freqs_hz[best] - 200.0) <= bin_w);
    }
  }

  TEST_CASE("negative Doppler lands in negative bins") {
    auto s = stft(tone(-300, 2000, 1024), StftConfig{256, 64, 256, WindowKind::rect});
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.n_bins; ++k) {
      if (s.at(0, k) > s.at(0, best)) best = k;
    }
    CHECK(s.bin_freqs_hz[best] == doctest::Approx(-300.0).epsilon(0.03));
  }

  TEST_CASE("Parseval against windowed time-domain energy") {
    auto re = oracle::white(3000, 11);
    auto im = oracle::white(3000, 12);
    std::vector<cplx> z(3000);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = {re[i], im[i]};
    for (std::size_t fft_len : {256u, 512u}) {
      StftConfig cfg{256, 64, fft_len, WindowKind::hann};
      const double e = spectrogram_energy(stft(ComplexSignal(z, 2000), cfg));
      const double ref = oracle::windowed_energy(z, make_window(WindowKind::hann, 256), 64);
      CHECK(std::abs(e - ref) / ref < 1e-9);
    }
  }

  TEST_CASE("stft errors") {
    CHECK_THROWS_WITH(stft(tone(1, 100, 100), {}), "signal too short");
    StftConfig bad;
    bad.hop = 0;
    CHECK_THROWS_WITH(stft(tone(1, 100, 1000), bad), "invalid hop");
    bad = {};
    bad.fft_len = 128;
    CHECK_THROWS(stft(tone(1, 100, 1000), bad));
  }

  TEST_CASE("stft is deterministic") {
    auto x = ComplexSignal::from_real(oracle::white(2000, 3), 2000);
    CHECK(stft(x, {}).mag == stft(x, {}).mag);
  }

  TEST_CASE("time reversal flips frame order") {
    const std::size_t n = 256 + 64 * 20;
    auto x = oracle::white(n, 5);
    std::vector<double> r(x.rbegin(), x.rend());
    StftConfig cfg{256, 64, 256, WindowKind::rect};
    auto a = stft(ComplexSignal::from_real(x, 1000), cfg);
    auto b = stft(ComplexSignal::from_real(r, 1000), cfg);
    REQUIRE(a.n_frames == b.n_frames);
    // A reversed real frame has the same |DFT| up to a bin mirror, which for
    // real input is the identity on magnitudes.
    for (std::size_t f = 0; f < a.n_frames; ++f) {
      for (std::size_t k = 0; k < a.n_bins; ++k) {
        CHECK(std::abs(a.at(f, k) - b.at(a.n_frames - 1 - f, k)) < 1e-9);
      }
    }
  }

  TEST_CASE("spectrogram_energy basics") {
    Spectrogram one;
    one.n_frames = one.n_bins = 1;
    one.mag = {3.0};
    one.frame_times_s = {0.0};
    one.bin_freqs_hz = {0.0};
    CHECK(spectrogram_energy(one) == 9.0);
    CHECK(spectrogram_energy(one, std::nullopt, MagnitudeMode::magnitude) == 3.0);
    CHECK_THROWS_WITH(spectrogram_energy(one, std::make_pair(10.0, 20.0)), "empty band");
  }

  TEST_CASE("band energy of a two-tone signal") {
    const double fs = 2000;
    const std::size_t n = 8192;
    auto a = tone(300, fs, n, 0.8);
    auto b = tone(-250, fs, n, 0.6);
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = a.samples()[i] + b.samples()[i];
    auto s = stft(ComplexSignal(z, fs), {});
    const double ratio = spectrogram_energy(s, std::make_pair(100.0, 500.0)) / spectrogram_energy(s);
    CHECK(std::abs(ratio - 0.64) / 0.64 < 0.02);
  }
}
