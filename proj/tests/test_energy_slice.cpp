#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ceemdes/energy_slice.hpp"
#include "ceemdes/error.hpp"
#include "ceemdes/otsu.hpp"
#include "oracles.hpp"

using namespace ceemdes;

namespace {
ComplexSignal tone_plus_dc(double amp, double f, double dc, double fs, std::size_t n) {
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::polar(amp, 2.0 * std::numbers::pi * f * static_cast<double>(i) / fs) + dc;
  }
  return ComplexSignal(std::move(z), fs);
}

CeemdConfig quick() {
  CeemdConfig c;
  c.ensemble_pairs = 4;
  return c;
}
}  // namespace

TEST_SUITE("energy_slice") {
  TEST_CASE("reconstruct_limb clamps the count and never adds the residual") {
    ImfSet s;
    s.source_len = 3;
    s.imfs = {{1, 2, 3}};
    s.residual = {10, 10, 10};
    EsConfig c;
    CHECK(reconstruct_limb(s, c) == std::vector<double>{1, 2, 3});
    s.imfs.push_back({1, 1, 1});
    c.limb_imf_count = 2;
    auto limb = reconstruct_limb(s, c);
    for (std::size_t i = 0; i < 3; ++i) limb[i] += s.residual[i];
    CHECK(limb == s.reconstruct());
    ImfSet empty;
    CHECK_THROWS_WITH(reconstruct_limb(empty, c), "no IMFs");
  }

  TEST_CASE("two-tone reconstruction follows the fast tone") {
    const double fs = 2000;
    std::vector<double> fast(4000), x(4000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = static_cast<double>(i) / fs;
      fast[i] = std::sin(2 * std::numbers::pi * 200 * t);
      x[i] = fast[i] + std::sin(2 * std::numbers::pi * 5 * t);
    }
    auto imfs = ceemd(x, quick());
    EsConfig c;
    c.limb_imf_count = 1;
    CHECK(oracle::pearson(reconstruct_limb(imfs, c), fast) >= 0.9);
  }

  TEST_CASE("ratio of a lone tone is near one") {
    auto s = tone_plus_dc(1.0, 150, 0.0, 2000, 4000);
    CHECK(limb_energy_ratio(s, quick(), {}, {}) >= 0.99);
  }

  TEST_CASE("tone plus DC gives the amplitude-squared share") {
    auto s = tone_plus_dc(0.8, 200, 0.6, 2000, 9000);
    const double r = limb_energy_ratio(s, quick(), {}, {});
    CHECK(std::abs(r - 0.64) <= 0.05);
  }

  TEST_CASE("pure DC puts the energy in the residual") {
    auto s = tone_plus_dc(0.0, 0.0, 1.0, 2000, 4000);
    CHECK(limb_energy_ratio(s, quick(), {}, {}) <= 0.05);
  }

  TEST_CASE("zero signal is an error") {
    ComplexSignal z(std::vector<cplx>(2000), 2000);
    CHECK_THROWS_WITH(limb_energy_ratio(z, quick(), {}, {}), "zero-energy signal");
  }

  TEST_CASE("ratio is monotone in the limb IMF count before clamping") {
    std::vector<cplx> z(3000);
    auto re = oracle::white(3000, 3), im = oracle::white(3000, 4);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = {re[i] + 0.5, im[i]};
    ComplexSignal s(z, 2000);
    double prev = -1.0;
    for (std::size_t k = 1; k <= 4; ++k) {
      EsConfig c;
      c.limb_imf_count = k;
      auto a = analyze_limb(s, quick(), c, {});
      CHECK(a.ratio >= 0.0);
      CHECK(a.ratio <= 1.0);
      CHECK(a.raw_ratio >= prev - 1e-9);
      prev = a.raw_ratio;
    }
  }

  TEST_CASE("pick_radar rules") {
    auto rr = [](std::string id, double r) {
      RadarRatio x;
      x.radar_id = std::move(id);
      x.ratio = r;
      x.distance = std::abs(r - 0.64);
      x.valid = true;
      return x;
    };
    CHECK(pick_radar({rr("r0", 0.61), rr("r1", 0.35)}) == "r0");
    CHECK(pick_radar({rr("r1", 0.74), rr("r0", 0.54)}) == "r0");
    auto bad = rr("a", 0.64);
    bad.valid = false;
    CHECK(pick_radar({bad, rr("b", 0.1)}) == "b");
    CHECK_THROWS_WITH(pick_radar({bad}), "no valid channels");
  }

  TEST_CASE("select_radar picks the channel nearest the target and is scale free") {
    std::vector<RadarChannel> ch{{"near", tone_plus_dc(0.8, 200, 0.6, 2000, 4000)},
                                 {"far", tone_plus_dc(0.3, 200, 1.0, 2000, 4000)}};
    auto rep = select_radar(ch, quick(), {}, {});
    CHECK(rep.selected == "near");
    CHECK(rep.per_radar.size() == 2);
    for (auto& c : ch) c.signal = c.signal.scaled(7.5);
    CHECK(select_radar(ch, quick(), {}, {}).selected == "near");
    std::swap(ch[0], ch[1]);
    CHECK(select_radar(ch, quick(), {}, {}).selected == "near");
  }

  TEST_CASE("select_radar marks failing channels invalid") {
    std::vector<RadarChannel> ch{{"dead", ComplexSignal(std::vector<cplx>(4000), 2000)},
                                 {"live", tone_plus_dc(0.8, 200, 0.6, 2000, 4000)}};
    auto rep = select_radar(ch, quick(), {}, {});
    CHECK(rep.selected == "live");
    CHECK_FALSE(rep.per_radar[0].valid);
    CHECK(rep.per_radar[0].error == "zero-energy signal");
    ch.pop_back();
    CHECK_THROWS_WITH(select_radar(ch, quick(), {}, {}), "no valid channels");
  }
}

TEST_SUITE("otsu") {
  TEST_CASE("bimodal values separate cleanly") {
    std::vector<double> v;
    for (int i = 0; i < 40; ++i) v.push_back(i % 3 ? 1.0 : 9.0);
    auto r = otsu_threshold(v);
    CHECK(r.threshold > 1.0);
    CHECK(r.threshold <= 9.0);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(r.mask[i] == (v[i] == 9.0 ? 1 : 0));
  }

  TEST_CASE("checkerboard foreground is exactly half") {
    std::vector<double> v;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) v.push_back((i + j) % 2 ? 255.0 : 0.0);
    }
    auto r = otsu_threshold(v);
    std::size_t fg = 0;
    for (auto m : r.mask) fg += m;
    CHECK(fg == 128);
  }

  TEST_CASE("degenerate histogram") {
    std::vector<double> v(10, 2.0);
    CHECK_THROWS_WITH(otsu_threshold(v), "degenerate histogram");
  }

  TEST_CASE("matches exhaustive search on random matrices") {
    std::mt19937_64 g(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
      std::vector<double> v(256);
      for (auto& x : v) x = u(g) * u(g);
      for (std::size_t levels : {2u, 16u, 256u}) {
        auto r = otsu_threshold(v, levels);
        auto o = oracle::otsu_exhaustive(v, levels);
        CHECK(r.split == o.split);
        CHECK(r.threshold == o.threshold);
      }
    }
  }

  TEST_CASE("threshold follows affine rescaling") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> v(200), w(200);
      for (auto& x : v) x = u(g);
      const double a = 3.0, b = 2.0;
      for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
      auto rv = otsu_threshold(v), rw = otsu_threshold(w);
      // same split unless a value sits within rounding of a bin edge
      if (rv.split == rw.split) {
        CHECK(rw.threshold == doctest::Approx(a * rv.threshold + b).epsilon(1e-9));
        CHECK(rv.mask == rw.mask);
      } else {
        CHECK(std::abs(static_cast<long>(rv.split) - static_cast<long>(rw.split)) <= 1);
      }
    }
  }

  TEST_CASE("otsu_filter on a spectrogram") {
    Spectrogram s;
    s.n_frames = 2;
    s.n_bins = 2;
    s.mag = {0.1, 5.0, 0.2, 6.0};
    s.frame_times_s = {0, 1};
    s.bin_freqs_hz = {-1, 0};
    auto r = otsu_filter(s);
    CHECK(r.mask == std::vector<std::uint8_t>{0, 1, 0, 1});
  }
}
