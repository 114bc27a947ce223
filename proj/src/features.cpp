#include "ceemdes/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/FFT>

#include "ceemdes/error.hpp"

namespace ceemdes {

const std::array<const char*, kTimeDomainCount>& time_domain_names() {
  static const std::array<const char*, kTimeDomainCount> names = {
      "mean",       "rms",           "square_root_amplitude", "abs_mean",
      "skewness",   "kurtosis",      "variance",              "peak_to_peak",
      "volatility_index", "peak",    "impulse_indicator",     "margin_index",
      "skewness_index",   "kurtosis_index"};
  return names;
}

const std::array<const char*, kSpectralCount>& spectral_names() {
  static const std::array<const char*, kSpectralCount> names = {
      "mean_spectral_power", "freq_centroid",     "rms_freq",        "freq_std",
      "spectral_skewness",   "spectral_kurtosis", "spectral_variance", "median_freq",
      "peak_freq",           "power_bandwidth",   "spectral_entropy",  "band_power_ratio",
      "total_power"};
  return names;
}

namespace stats {

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

double abs_mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s / static_cast<double>(x.size());
}

double square_root_amplitude(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::sqrt(std::abs(v));
  s /= static_cast<double>(x.size());
  return s * s;
}

double variance(std::span<const double> x) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size());
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

double peak_to_peak(std::span<const double> x) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return *mx - *mn;
}

}  // namespace stats

TimeDomainFeatures time_domain_features(std::span<const double> x) {
  if (x.size() < 2) throw Error("series too short");
  const double n = static_cast<double>(x.size());
  const double mu = stats::mean(x);
  const double var = stats::variance(x);
  const double sd = std::sqrt(var);
  const double pk = stats::peak(x);
  if (sd <= 1e-12 * std::max(1.0, pk)) throw Error("zero dispersion");

  double m3 = 0.0, m4 = 0.0, raw3 = 0.0, raw4 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m3 += d * d * d;
    m4 += d * d * d * d;
    raw3 += v * v * v;
    raw4 += v * v * v * v;
  }
  m3 /= n;
  m4 /= n;
  raw3 /= n;
  raw4 /= n;

  const double r = stats::rms(x);
  const double am = stats::abs_mean(x);
  const double sra = stats::square_root_amplitude(x);

  TimeDomainFeatures f;
  f.values = {mu,
              r,
              sra,
              am,
              m3 / (sd * sd * sd),
              m4 / (var * var),
              var,
              stats::peak_to_peak(x),
              r / am,
              pk,
              pk / am,
              pk / sra,
              raw3 / (r * r * r),
              raw4 / (r * r * r * r)};
  return f;
}

SpectralFeatures spectral_features(std::span<const double> x, double fs) {
  if (x.size() < 4) throw Error("series too short");
  if (!(fs > 0.0)) throw Error("invalid sample rate");
  const std::size_t n = x.size();

  Eigen::FFT<double> fft;
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);

  const std::size_t nb = one_sided_bins(n);
  std::vector<double> p(nb), f(nb);
  double total = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    p[k] = std::norm(spec[k]) / static_cast<double>(n);
    f[k] = static_cast<double>(k) * fs / static_cast<double>(n);
    total += p[k];
  }
  if (!(total > 0.0)) throw Error("zero-energy signal");

  double centroid = 0.0, second = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    centroid += f[k] * p[k];
    second += f[k] * f[k] * p[k];
  }
  centroid /= total;
  second /= total;

  double var = 0.0, m3 = 0.0, m4 = 0.0, entropy = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double d = f[k] - centroid;
    const double w = p[k] / total;
    var += d * d * w;
    m3 += d * d * d * w;
    m4 += d * d * d * d * w;
    if (w > 0.0) entropy -= w * std::log(w);
  }
  const double sd = std::sqrt(var);
  const double skew = sd > 0.0 ? m3 / (sd * sd * sd) : 0.0;
  const double kurt = sd > 0.0 ? m4 / (var * var) : 0.0;

  double median = f.back();
  double cum = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    cum += p[k];
    if (cum >= 0.5 * total) {
      median = f[k];
      break;
    }
  }
  const std::size_t peak_k =
      static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());

  double above = 0.0, below = 0.0;
  for (std::size_t k = 0; k < nb; ++k) (f[k] > centroid ? above : below) += p[k];

  SpectralFeatures out;
  out.values = {total / static_cast<double>(nb),
                centroid,
                std::sqrt(second),
                sd,
                skew,
                kurt,
                var,
                median,
                f[peak_k],
                2.0 * sd,
                entropy,
                below > 0.0 ? above / below : 0.0,
                total};
  return out;
}

std::vector<std::string> feature_schema(const FeatureConfig& cfg) {
  std::vector<std::string> schema;
  for (const char* n : time_domain_names()) schema.emplace_back(n);
  for (const char* n : spectral_names()) schema.emplace_back(n);
  schema.emplace_back("apen");
  schema.emplace_back("pe");
  for (std::size_t s = 1; s <= cfg.mse.max_scale; ++s) schema.push_back("mse_" + std::to_string(s));
  return schema;
}

std::vector<std::size_t> feature_columns(const FeatureConfig& cfg, const FeatureGroups& groups) {
  std::vector<std::size_t> cols;
  std::size_t at = 0;
  auto take = [&](bool on, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i, ++at) {
      if (on) cols.push_back(at);
    }
  };
  take(groups.time_domain, kTimeDomainCount);
  take(groups.frequency_domain, kSpectralCount);
  take(groups.entropy, 2 + cfg.mse.max_scale);
  return cols;
}

FeatureVector build_feature_vector(const ComplexSignal& signal, const FeatureConfig& cfg,
                                   std::string source_id) {
  FeatureVector fv;
  fv.schema = feature_schema(cfg);
  fv.source_id = std::move(source_id);
  const auto mag = signal.magnitude();

  auto fail = [&](const char* what, const Error& e) {
    fv.valid = false;
    fv.error = std::string(what) + ": " + e.what();
  };

  try {
    const auto td = time_domain_features(mag);
    fv.values.insert(fv.values.end(), td.values.begin(), td.values.end());
  } catch (const Error& e) {
    fail("time_domain", e);
    return fv;
  }
  try {
    const auto fd = spectral_features(mag, signal.sample_rate_hz());
    fv.values.insert(fv.values.end(), fd.values.begin(), fd.values.end());
  } catch (const Error& e) {
    fail("frequency_domain", e);
    return fv;
  }
  try {
    fv.values.push_back(approximate_entropy(mag, cfg.embedding));
  } catch (const Error& e) {
    fail("apen", e);
    return fv;
  }
  try {
    fv.values.push_back(permutation_entropy(mag, cfg.embedding));
  } catch (const Error& e) {
    fail("pe", e);
    return fv;
  }
  try {
    const auto mse = multiscale_entropy(mag, cfg.mse);
    fv.values.insert(fv.values.end(), mse.begin(), mse.end());
  } catch (const Error& e) {
    fail("mse", e);
    return fv;
  }

  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    if (!std::isfinite(fv.values[i])) {
      fv.valid = false;
      fv.error = fv.schema[i] + ": non-finite value";
      break;
    }
  }
  return fv;
}

}  // namespace ceemdes
