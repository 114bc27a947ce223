#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ceemdes/energy_slice.hpp"
#include "ceemdes/rcs.hpp"
#include "ceemdes/signal.hpp"

namespace ceemdes {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class MotionClass { single_arm_swing, alternating_arms, alternating_legs };

inline constexpr std::array<MotionClass, 3> kMotionClasses = {
    MotionClass::single_arm_swing, MotionClass::alternating_arms, MotionClass::alternating_legs};

const char* to_string(MotionClass c);
MotionClass motion_class_from_string(const std::string& s);

// Limb radial velocity law. `constant` holds the peak speed for the whole
// dwell (a single-tone Doppler reference); `sinusoidal` is the swing model.
enum class VelocityProfile { sinusoidal, constant };

// Fractions of total skin area.
struct AreaFractions {
  double trunk_head = 0.36;
  double arms_each = 0.09;
  double legs_each = 0.17;

  double arms() const { return 2.0 * arms_each; }
  double legs() const { return 2.0 * legs_each; }
};

enum class BodyPart : std::size_t { trunk_head = 0, left_arm, right_arm, left_leg, right_leg };
inline constexpr std::size_t kBodyParts = 5;

struct MotionScene {
  MotionClass motion_class = MotionClass::alternating_arms;
  double swing_rate_hz = 1.0;
  double limb_peak_speed_mps = 2.0;
  double trunk_sway_speed_mps = 0.1;
  AreaFractions part_area_fractions;
  VelocityProfile velocity_profile = VelocityProfile::sinusoidal;
  double swing_phase_rad = 0.0;
  std::array<double, kBodyParts> carrier_phase_rad{};  // static phase per part
  std::array<double, kBodyParts> part_gain{1.0, 1.0, 1.0, 1.0, 1.0};  // power multipliers
  // Rescale part powers so moving limbs hold `limb_share` of the frontal
  // echo power and everything else the remainder.
  bool calibrate_limb_share = false;
  double limb_share = 0.64;

  void validate() const;
};

struct RadarPose {
  Vec3 position{0.0, 1.0, 0.0};
  double carrier_hz = 77e9;
  std::string radar_id = "0deg";
  bool validate_carrier = true;  // require carrier in [76, 81] GHz

  void validate() const;
};

struct SimConfig {
  double sample_rate_hz = 2000.0;
  double duration_s = 4.5;
  double snr_db = 20.0;
  // Effective wavelength = wavelength_scale * c / carrier; scales Doppler down
  // to the desk-scale baseband rate.
  double wavelength_scale = 3.0;
  bool add_noise = true;
  std::uint64_t rng_seed = 0;

  void validate() const;
  std::size_t n_samples() const;
};

double effective_wavelength(const RadarPose& radar, const SimConfig& cfg);

// Largest |Doppler| the scene can produce at this radar.
double max_doppler_hz(const MotionScene& scene, const RadarPose& radar, const SimConfig& cfg);

struct PartPowers {
  std::array<double, kBodyParts> power{};    // mean |A_p|^2 per part
  std::array<bool, kBodyParts> moving{};     // true for swinging limbs
  double limb_share() const;
};

// Echo power per part at this radar: area fraction times gain, with limbs
// attenuated by the aspect RCS factor; idle limbs ride with the trunk.
PartPowers part_powers(const MotionScene& scene, const RadarPose& radar,
                       const BodyEllipsoid& body);

// Baseband echo: sum over parts of A_p exp(j (4 pi / lambda) R_p(t) + phase_p)
// plus complex white noise at cfg.snr_db. Throws "undersampled Doppler" when
// sample_rate_hz < 4 * max Doppler.
ComplexSignal synth_echo(const MotionScene& scene, const RadarPose& radar,
                         const BodyEllipsoid& body, const SimConfig& cfg);

// Per-part noiseless components, summing to synth_echo without noise.
std::vector<ComplexSignal> synth_parts(const MotionScene& scene, const RadarPose& radar,
                                       const BodyEllipsoid& body, const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Datasets

enum class SignalFormat { iq, csv };

struct DatasetRequest {
  std::size_t n_train = 120;  // per class
  std::size_t n_test = 48;    // per class
  std::uint64_t master_seed = 1;
  SimConfig sim;
  BodyEllipsoid body;
  MotionScene base_scene;
  double radar_range_m = 1.0;
  double carrier_0deg_hz = 77e9;
  double carrier_90deg_hz = 79e9;
  SignalFormat format = SignalFormat::iq;

  std::size_t per_class() const { return n_train + n_test; }
  std::size_t n_scenes() const { return 3 * per_class(); }
};

// 0 deg radar at (0, d, 0), 90 deg radar at (d, 0, 0).
std::vector<RadarPose> default_radar_poses(const DatasetRequest& req);

struct SceneSample {
  std::size_t index = 0;
  MotionClass motion_class = MotionClass::single_arm_swing;
  bool is_train = true;
  std::uint64_t seed = 0;
  MotionScene scene;
  std::vector<RadarChannel> channels;  // one per radar pose, sharing motion phases
};

// Scene `index` of the dataset: class-major ordering, first n_train entries of
// each class are the training split. Motion parameters are drawn from a seed
// derived from (master_seed, index); each radar gets its own noise seed.
SceneSample simulate_scene(const DatasetRequest& req, std::size_t index);

struct ManifestEntry {
  std::string file;
  std::string motion_class;
  std::string radar_id;
  std::string split;
  std::uint64_t seed = 0;
  std::size_t index = 0;
};

struct Manifest {
  std::uint64_t master_seed = 0;
  double sample_rate_hz = 0.0;
  double duration_s = 0.0;
  std::vector<ManifestEntry> entries;
};

// Writes every scene/radar pair plus manifest.json into out_dir.
Manifest generate_dataset(const DatasetRequest& req, const std::filesystem::path& out_dir);

}  // namespace ceemdes
