#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "ceemdes/energy_slice.hpp"
#include "ceemdes/error.hpp"
#include "ceemdes/io.hpp"
#include "ceemdes/rcs.hpp"
#include "ceemdes/simulator.hpp"

using namespace ceemdes;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ceemdes_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_SUITE("rcs") {
  TEST_CASE("aspect angles") {
    auto a = aspect_angles({0, 2, 0});
    CHECK(a.theta == doctest::Approx(kPi / 2));
    CHECK(a.phi == doctest::Approx(kPi / 2));
    CHECK(aspect_angles({0, 0, 3}).theta == doctest::Approx(0.0));
    auto s = aspect_angles({2, 0, 0});
    CHECK(s.theta == doctest::Approx(kPi / 2));
    CHECK(s.phi == doctest::Approx(0.0));
    CHECK(aspect_angles({0, -1, 0}).phi == doctest::Approx(-kPi / 2));
    CHECK(aspect_angles({-1, 0, 0}).phi == doctest::Approx(kPi));
    CHECK(aspect_angles({0, 0, -1}).theta == doctest::Approx(kPi));
    CHECK_THROWS(aspect_angles({0, 0, 0}));
  }

  TEST_CASE("ellipsoid values") {
    BodyEllipsoid b;
    CHECK(ellipsoid_rcs(b, 0.0, 0.0) == doctest::Approx(kPi * 0.25 * 0.25 * 0.15 * 0.15 / (0.9 * 0.9)));
    CHECK(ellipsoid_rcs(b, 0.0, 0.0) == doctest::Approx(0.005454).epsilon(1e-3));
    CHECK(ellipsoid_rcs(b, kPi / 2, kPi / 2) == doctest::Approx(7.0686).epsilon(1e-4));
    CHECK(frontal_rcs(b) == doctest::Approx(2.6587).epsilon(1e-4));
    BodyEllipsoid wide = b;
    wide.a *= 2;
    CHECK(frontal_rcs(wide) == doctest::Approx(2 * frontal_rcs(b)));
  }

  TEST_CASE("sphere, frontal identity and frontal dominance on random bodies") {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0.05, 2.0), ang(0.0, kPi);
    for (int t = 0; t < 100; ++t) {
      const double r = u(g);
      BodyEllipsoid s{r, r, r};
      CHECK(std::abs(ellipsoid_rcs(s, ang(g), 2 * ang(g)) - kPi * r * r) <= 1e-12 * std::max(1.0, kPi * r * r));

      BodyEllipsoid b{u(g), u(g), u(g)};
      CHECK(std::abs(frontal_rcs(b) - std::sqrt(ellipsoid_rcs(b, kPi / 2, kPi / 2))) <= 1e-12 * frontal_rcs(b));
      if (b.a > b.b) CHECK(ellipsoid_rcs(b, kPi / 2, kPi / 2) >= ellipsoid_rcs(b, kPi / 2, 0.0));
    }
  }

  TEST_CASE("aspect factor") {
    BodyEllipsoid b;
    CHECK(aspect_rcs_factor(b, {0, 1, 0}) == doctest::Approx(1.0));
    CHECK(aspect_rcs_factor(b, {1, 0, 0}) == doctest::Approx(std::pow(0.15 / 0.25, 4)));
  }
}

TEST_SUITE("sim") {
  TEST_CASE("default echo length and Doppler guard") {
    MotionScene sc;
    RadarPose rp;
    SimConfig cfg;
    auto e = synth_echo(sc, rp, {}, cfg);
    CHECK(e.size() == 9000);
    CHECK(e.sample_rate_hz() == 2000.0);
    sc.limb_peak_speed_mps = 10.0;
    CHECK_THROWS_WITH(synth_echo(sc, rp, {}, cfg), "undersampled Doppler");
  }

  TEST_CASE("pose and scene validation") {
    RadarPose rp;
    rp.carrier_hz = 24e9;
    CHECK_THROWS(rp.validate());
    rp.validate_carrier = false;
    CHECK_NOTHROW(rp.validate());
    rp.position = {0, 0, 0};
    CHECK_THROWS(rp.validate());
    MotionScene sc;
    sc.part_area_fractions.trunk_head = 0.9;
    CHECK_THROWS(sc.validate());
  }

  TEST_CASE("constant-velocity limb shows its Doppler") {
    MotionScene sc;
    sc.motion_class = MotionClass::single_arm_swing;
    sc.trunk_sway_speed_mps = 0.0;
    sc.velocity_profile = VelocityProfile::constant;
    sc.limb_peak_speed_mps = 1.5;
    sc.calibrate_limb_share = true;
    sc.limb_share = 0.9;
    RadarPose rp;
    SimConfig cfg;
    cfg.add_noise = false;
    const double fd = 2.0 * 1.5 / effective_wavelength(rp, cfg);
    auto s = stft(synth_echo(sc, rp, {}, cfg), {});
    std::size_t best = 0;
    for (std::size_t k = 0; k < s.n_bins; ++k) {
      if (s.at(3, k) > s.at(3, best)) best = k;
    }
    CHECK(std::abs(s.bin_freqs_hz[best] - fd) <= 2000.0 / 256.0);
  }

  TEST_CASE("noise-free part energy matches the construction") {
    for (auto cls : kMotionClasses) {
      MotionScene sc;
      sc.motion_class = cls;
      RadarPose rp;
      SimConfig cfg;
      cfg.add_noise = false;
      auto parts = synth_parts(sc, rp, {}, cfg);
      auto pw = part_powers(sc, rp, {});
      double limb = 0, total = 0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        double e = 0;
        for (auto v : parts[p].samples()) e += std::norm(v);
        total += e;
        if (p > 0) limb += e;
      }
      CHECK(limb / total == doctest::Approx(pw.limb_share()).epsilon(0.02));
    }
  }

  TEST_CASE("calibration sets the limb share") {
    MotionScene sc;
    sc.calibrate_limb_share = true;
    for (auto cls : kMotionClasses) {
      sc.motion_class = cls;
      CHECK(part_powers(sc, RadarPose{}, {}).limb_share() == doctest::Approx(0.64));
    }
  }

  TEST_CASE("legs carry more limb energy than arms") {
    MotionScene legs, arms;
    legs.motion_class = MotionClass::alternating_legs;
    arms.motion_class = MotionClass::alternating_arms;
    SimConfig cfg;
    cfg.rng_seed = 3;
    CeemdConfig c;
    c.ensemble_pairs = 4;
    const double rl = limb_energy_ratio(synth_echo(legs, {}, {}, cfg), c, {}, {});
    const double ra = limb_energy_ratio(synth_echo(arms, {}, {}, cfg), c, {}, {});
    CHECK(rl > ra);
  }

  TEST_CASE("scene simulation is deterministic and radars share motion") {
    DatasetRequest req;
    req.n_train = 2;
    req.n_test = 1;
    auto a = simulate_scene(req, 4);
    auto b = simulate_scene(req, 4);
    CHECK(a.motion_class == MotionClass::alternating_arms);
    CHECK(a.is_train);
    CHECK_FALSE(simulate_scene(req, 5).is_train);
    REQUIRE(a.channels.size() == 2);
    CHECK(a.channels[0].radar_id == "0deg");
    CHECK(a.channels[1].radar_id == "90deg");
    CHECK(a.channels[0].signal.samples() == b.channels[0].signal.samples());
    CHECK(a.channels[0].signal.samples() != a.channels[1].signal.samples());
    CHECK_THROWS(simulate_scene(req, 9));
  }

  TEST_CASE("dataset files, manifest and byte-identical regeneration") {
    DatasetRequest req;
    req.n_train = 1;
    req.n_test = 1;
    req.sim.duration_s = 0.5;
    auto d1 = scratch("ds1"), d2 = scratch("ds2");
    auto m = generate_dataset(req, d1);
    generate_dataset(req, d2);
    CHECK(m.entries.size() == 12);
    std::size_t iq = 0;
    for (const auto& e : fs::directory_iterator(d1)) iq += e.path().extension() == ".iq";
    CHECK(iq == 12);
    CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));
    for (const auto& e : m.entries) CHECK(slurp(d1 / e.file) == slurp(d2 / e.file));
    auto back = read_manifest(d1 / "manifest.json");
    CHECK(back.entries.size() == 12);
    CHECK(back.entries[0].split == "train");
    CHECK(back.entries[2].split == "test");
    auto sig = read_signal(d1 / m.entries[0].file);
    CHECK(sig.signal.size() == 1000);
    CHECK(sig.meta.radar_id == "0deg");
    fs::remove_all(d1);
    fs::remove_all(d2);
  }
}
