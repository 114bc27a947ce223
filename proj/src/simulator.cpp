#include "ceemdes/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ceemdes/error.hpp"
#include "ceemdes/io.hpp"
#include "ceemdes/rng.hpp"

namespace ceemdes {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t part(BodyPart p) { return static_cast<std::size_t>(p); }

// Moving limbs and their swing phase offsets for each class.
struct ActiveLimb {
  BodyPart part;
  double phase;
};

std::vector<ActiveLimb> active_limbs(MotionClass c) {
  switch (c) {
    case MotionClass::single_arm_swing:
      return {{BodyPart::right_arm, 0.0}};
    case MotionClass::alternating_arms:
      return {{BodyPart::left_arm, 0.0}, {BodyPart::right_arm, std::numbers::pi}};
    case MotionClass::alternating_legs:
      return {{BodyPart::left_leg, 0.0}, {BodyPart::right_leg, std::numbers::pi}};
  }
  return {};
}
}  // namespace

const char* to_string(MotionClass c) {
  switch (c) {
    case MotionClass::single_arm_swing:
      return "single_arm_swing";
    case MotionClass::alternating_arms:
      return "alternating_arms";
    case MotionClass::alternating_legs:
      return "alternating_legs";
  }
  return "unknown";
}

MotionClass motion_class_from_string(const std::string& s) {
  for (MotionClass c : kMotionClasses) {
    if (s == to_string(c)) return c;
  }
  throw Error("unknown motion class: " + s);
}

void MotionScene::validate() const {
  if (!(swing_rate_hz > 0.0)) throw Error("swing_rate_hz must be > 0");
  if (!(limb_peak_speed_mps > 0.0)) throw Error("limb_peak_speed_mps must be > 0");
  if (!(trunk_sway_speed_mps >= 0.0)) throw Error("trunk_sway_speed_mps must be >= 0");
  const auto& f = part_area_fractions;
  if (!(f.trunk_head > 0.0 && f.arms_each > 0.0 && f.legs_each > 0.0)) {
    throw Error("area fractions must be positive");
  }
  const double total = f.trunk_head + f.arms() + f.legs();
  if (total > 1.0 + 1e-9) throw Error("area fractions exceed 1");
  for (double g : part_gain) {
    if (!(g > 0.0)) throw Error("part gains must be positive");
  }
  if (calibrate_limb_share && !(limb_share > 0.0 && limb_share < 1.0)) {
    throw Error("limb_share must be in (0, 1)");
  }
}

void RadarPose::validate() const {
  if (position.x == 0.0 && position.y == 0.0 && position.z == 0.0) throw Error("radar at origin");
  if (!(carrier_hz > 0.0)) throw Error("carrier must be positive");
  if (validate_carrier && (carrier_hz < 76e9 || carrier_hz > 81e9)) {
    throw Error("carrier outside 76-81 GHz");
  }
}

void SimConfig::validate() const {
  if (!(sample_rate_hz > 0.0)) throw Error("invalid sample rate");
  if (!(duration_s > 0.0)) throw Error("duration must be > 0");
  if (!(wavelength_scale > 0.0)) throw Error("wavelength_scale must be > 0");
  if (n_samples() < 1) throw Error("duration shorter than one sample");
}

std::size_t SimConfig::n_samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

double effective_wavelength(const RadarPose& radar, const SimConfig& cfg) {
  return cfg.wavelength_scale * kSpeedOfLight / radar.carrier_hz;
}

double max_doppler_hz(const MotionScene& scene, const RadarPose& radar, const SimConfig& cfg) {
  return 2.0 * (scene.limb_peak_speed_mps + scene.trunk_sway_speed_mps) /
         effective_wavelength(radar, cfg);
}

double PartPowers::limb_share() const {
  double limb = 0.0, total = 0.0;
  for (std::size_t p = 0; p < kBodyParts; ++p) {
    total += power[p];
    if (moving[p]) limb += power[p];
  }
  return total > 0.0 ? limb / total : 0.0;
}

PartPowers part_powers(const MotionScene& scene, const RadarPose& radar,
                       const BodyEllipsoid& body) {
  scene.validate();
  const auto& f = scene.part_area_fractions;
  const double remainder = std::max(0.0, 1.0 - f.trunk_head - f.arms() - f.legs());

  std::array<double, kBodyParts> area{};
  area[part(BodyPart::trunk_head)] = f.trunk_head + remainder;
  area[part(BodyPart::left_arm)] = f.arms_each;
  area[part(BodyPart::right_arm)] = f.arms_each;
  area[part(BodyPart::left_leg)] = f.legs_each;
  area[part(BodyPart::right_leg)] = f.legs_each;
  for (std::size_t p = 0; p < kBodyParts; ++p) area[p] *= scene.part_gain[p];

  PartPowers out;
  for (const auto& limb : active_limbs(scene.motion_class)) out.moving[part(limb.part)] = true;

  if (scene.calibrate_limb_share) {
    double moving = 0.0, still = 0.0;
    for (std::size_t p = 0; p < kBodyParts; ++p) (out.moving[p] ? moving : still) += area[p];
    for (std::size_t p = 0; p < kBodyParts; ++p) {
      area[p] *= out.moving[p] ? scene.limb_share / moving : (1.0 - scene.limb_share) / still;
    }
  }

  // Limbs lose visibility away from the frontal aspect; idle limbs move with
  // the trunk and are merged into its scatterer.
  const double g = aspect_rcs_factor(body, radar.position);
  for (std::size_t p = 0; p < kBodyParts; ++p) {
    const bool is_limb = p != part(BodyPart::trunk_head);
    const double pw = is_limb ? area[p] * g : area[p];
    if (out.moving[p]) {
      out.power[p] = pw;
    } else {
      out.power[part(BodyPart::trunk_head)] += pw;
    }
  }
  return out;
}

std::vector<ComplexSignal> synth_parts(const MotionScene& scene, const RadarPose& radar,
                                       const BodyEllipsoid& body, const SimConfig& cfg) {
  scene.validate();
  radar.validate();
  body.validate();
  cfg.validate();
  const double fdmax = max_doppler_hz(scene, radar, cfg);
  if (cfg.sample_rate_hz < 4.0 * fdmax) throw Error("undersampled Doppler");

  const auto powers = part_powers(scene, radar, body);
  const double lambda = effective_wavelength(radar, cfg);
  const double k = 4.0 * std::numbers::pi / lambda;
  const double w = kTwoPi * scene.swing_rate_hz;
  const std::size_t n = cfg.n_samples();
  const double fs = cfg.sample_rate_hz;

  // Displacement towards the radar; positive velocity gives positive Doppler.
  auto trunk_disp = [&](double t) {
    return -(scene.trunk_sway_speed_mps / w) * std::cos(w * t + scene.swing_phase_rad);
  };

  auto make = [&](std::size_t p, auto&& disp) {
    const double amp = std::sqrt(powers.power[p]);
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      z[i] = std::polar(amp, k * disp(t) + scene.carrier_phase_rad[p]);
    }
    return ComplexSignal(std::move(z), fs);
  };

  std::vector<ComplexSignal> parts;
  parts.push_back(make(part(BodyPart::trunk_head), trunk_disp));
  for (const auto& limb : active_limbs(scene.motion_class)) {
    const double v = scene.limb_peak_speed_mps;
    const double psi = scene.swing_phase_rad + limb.phase;
    if (scene.velocity_profile == VelocityProfile::constant) {
      parts.push_back(make(part(limb.part), [&](double t) { return trunk_disp(t) + v * t; }));
    } else {
      parts.push_back(make(part(limb.part), [&](double t) {
        return trunk_disp(t) - (v / w) * std::cos(w * t + psi);
      }));
    }
  }
  return parts;
}

ComplexSignal synth_echo(const MotionScene& scene, const RadarPose& radar,
                         const BodyEllipsoid& body, const SimConfig& cfg) {
  const auto parts = synth_parts(scene, radar, body, cfg);
  const std::size_t n = cfg.n_samples();
  std::vector<cplx> z(n);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < n; ++i) z[i] += p.samples()[i];
  }

  if (cfg.add_noise) {
    double power = 0.0;
    for (const auto& v : z) power += std::norm(v);
    power /= static_cast<double>(n);
    const double sigma = std::sqrt(0.5 * power / std::pow(10.0, cfg.snr_db / 10.0));
    std::mt19937_64 gen(cfg.rng_seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (auto& v : z) {
      const double re = dist(gen);
      const double im = dist(gen);
      v += cplx(re, im);
    }
  }
  return ComplexSignal(std::move(z), cfg.sample_rate_hz);
}

std::vector<RadarPose> default_radar_poses(const DatasetRequest& req) {
  RadarPose front;
  front.position = {0.0, req.radar_range_m, 0.0};
  front.carrier_hz = req.carrier_0deg_hz;
  front.radar_id = "0deg";
  RadarPose side;
  side.position = {req.radar_range_m, 0.0, 0.0};
  side.carrier_hz = req.carrier_90deg_hz;
  side.radar_id = "90deg";
  return {front, side};
}

SceneSample simulate_scene(const DatasetRequest& req, std::size_t index) {
  if (index >= req.n_scenes()) throw Error("scene index out of range");
  SceneSample s;
  s.index = index;
  s.motion_class = kMotionClasses[index / req.per_class()];
  s.is_train = index % req.per_class() < req.n_train;
  s.seed = derive_seed(req.master_seed, index);

  std::mt19937_64 gen(s.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * uni(gen); };

  MotionScene scene = req.base_scene;
  scene.motion_class = s.motion_class;
  scene.swing_rate_hz = req.base_scene.swing_rate_hz * between(0.8, 1.2);
  scene.limb_peak_speed_mps = req.base_scene.limb_peak_speed_mps * between(0.85, 1.15);
  scene.trunk_sway_speed_mps = req.base_scene.trunk_sway_speed_mps * between(0.5, 1.5);
  scene.swing_phase_rad = between(0.0, kTwoPi);
  for (auto& ph : scene.carrier_phase_rad) ph = between(0.0, kTwoPi);
  for (auto& g : scene.part_gain) g = std::exp(0.15 * gauss(gen));
  s.scene = scene;

  const auto poses = default_radar_poses(req);
  for (std::size_t r = 0; r < poses.size(); ++r) {
    SimConfig sim = req.sim;
    sim.rng_seed = derive_seed(s.seed, r + 1);
    s.channels.push_back({poses[r].radar_id, synth_echo(scene, poses[r], req.body, sim)});
  }
  return s;
}

Manifest generate_dataset(const DatasetRequest& req, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create directory " + out_dir.string() + ": " + ec.message());

  Manifest manifest;
  manifest.master_seed = req.master_seed;
  manifest.sample_rate_hz = req.sim.sample_rate_hz;
  manifest.duration_s = req.sim.duration_s;

  const char* ext = req.format == SignalFormat::iq ? ".iq" : ".csv";
  for (std::size_t i = 0; i < req.n_scenes(); ++i) {
    const auto s = simulate_scene(req, i);
    for (const auto& ch : s.channels) {
      char name[64];
      std::snprintf(name, sizeof name, "sig_%05zu_%s%s", i, ch.radar_id.c_str(), ext);
      SignalMeta meta;
      meta.motion_class = to_string(s.motion_class);
      meta.radar_id = ch.radar_id;
      meta.seed = s.seed;
      write_signal(out_dir / name, ch.signal, meta, req.format);
      manifest.entries.push_back({name, meta.motion_class, ch.radar_id,
                                  s.is_train ? "train" : "test", s.seed, i});
    }
  }
  write_manifest(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace ceemdes
