#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ceemdes/entropy.hpp"
#include "ceemdes/signal.hpp"

namespace ceemdes {

inline constexpr std::size_t kTimeDomainCount = 14;
inline constexpr std::size_t kSpectralCount = 13;

const std::array<const char*, kTimeDomainCount>& time_domain_names();
const std::array<const char*, kSpectralCount>& spectral_names();

// Order matches time_domain_names().
struct TimeDomainFeatures {
  std::array<double, kTimeDomainCount> values{};
};

namespace stats {
double mean(std::span<const double> x);
double rms(std::span<const double> x);
double abs_mean(std::span<const double> x);
double square_root_amplitude(std::span<const double> x);
double variance(std::span<const double> x);  // population
double peak(std::span<const double> x);      // max |x|
double peak_to_peak(std::span<const double> x);
}  // namespace stats

// Throws Error("zero dispersion") for constant series, where the standardized
// moments are undefined.
TimeDomainFeatures time_domain_features(std::span<const double> series);

struct SpectralFeatures {
  std::array<double, kSpectralCount> values{};

  double centroid_hz() const { return values[1]; }
  double freq_std_hz() const { return values[3]; }
  double median_hz() const { return values[7]; }
  double peak_hz() const { return values[8]; }
  double entropy() const { return values[10]; }
};

// Statistics of the one-sided periodogram P_k = |X_k|^2 / N, f_k = k fs / N.
SpectralFeatures spectral_features(std::span<const double> series, double fs);

// Number of one-sided periodogram bins for a series of length n.
inline std::size_t one_sided_bins(std::size_t n) { return n / 2 + 1; }

struct FeatureGroups {
  bool time_domain = true;
  bool frequency_domain = true;
  bool entropy = true;
};

struct FeatureConfig {
  EmbeddingConfig embedding;
  MseConfig mse;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> schema;
  std::string source_id;
  bool valid = true;
  std::string error;  // "<feature>: <reason>" when invalid
};

std::vector<std::string> feature_schema(const FeatureConfig& cfg);

// Column indices of the schema that belong to the enabled groups.
std::vector<std::size_t> feature_columns(const FeatureConfig& cfg, const FeatureGroups& groups);

// All extractors applied to |signal|, concatenated in schema order:
// 14 time-domain, 13 spectral, ApEn, PE, then max_scale MSE values.
FeatureVector build_feature_vector(const ComplexSignal& signal, const FeatureConfig& cfg,
                                   std::string source_id = {});

}  // namespace ceemdes
