#include "ceemdes/ceemd.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include <omp.h>

#include "ceemdes/emd.hpp"
#include "ceemdes/error.hpp"
#include "ceemdes/rng.hpp"

namespace ceemdes {

void CeemdConfig::validate() const {
  if (ensemble_pairs < 1) throw Error("ensemble_pairs must be >= 1");
  if (max_sift_iters < 1) throw Error("max_sift_iters must be >= 1");
  if (max_imfs < 1) throw Error("max_imfs must be >= 1");
  if (!(envelope_tol > 0.0)) throw Error("envelope_tol must be > 0");
  if (!(noise_amplitude_rel >= 0.0) || !std::isfinite(noise_amplitude_rel)) {
    throw Error("noise_amplitude_rel must be >= 0");
  }
}

std::vector<double> ImfSet::reconstruct() const {
  std::vector<double> out(residual);
  for (const auto& imf : imfs) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += imf[i];
  }
  return out;
}

std::vector<double> ensemble_noise(std::size_t n, double sigma, std::uint64_t seed,
                                   std::size_t pair) {
  std::vector<double> noise(n, 0.0);
  if (sigma == 0.0) return noise;
  std::mt19937_64 gen(derive_seed(seed, pair));
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& v : noise) v = dist(gen);
  return noise;
}

namespace {

double checked_std(std::span<const double> x) {
  if (x.size() < 16) throw Error("signal too short");
  double mean = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error("non-finite input");
    mean += v;
  }
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

// Branch b belongs to pair b / 2; even branches add the noise, odd subtract.
EmdResult run_branch(std::span<const double> x, double sigma, const CeemdConfig& cfg,
                     std::size_t branch) {
  auto noisy = ensemble_noise(x.size(), sigma, cfg.rng_seed, branch / 2);
  const double sign = branch % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) noisy[i] = x[i] + sign * noisy[i];
  return emd(noisy, cfg);
}

struct Accumulator {
  std::vector<std::vector<double>> imf_sum;
  std::vector<double> residual_sum;

  explicit Accumulator(std::size_t n) : residual_sum(n, 0.0) {}

  void add(const EmdResult& r) {
    const std::size_t n = residual_sum.size();
    while (imf_sum.size() < r.imfs.size()) imf_sum.emplace_back(n, 0.0);
    for (std::size_t k = 0; k < r.imfs.size(); ++k) {
      auto& dst = imf_sum[k];
      const auto& src = r.imfs[k];
      for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
    }
    for (std::size_t i = 0; i < n; ++i) residual_sum[i] += r.residual[i];
  }

  ImfSet finish(std::size_t branches) && {
    const double inv = 1.0 / static_cast<double>(branches);
    ImfSet out;
    out.source_len = residual_sum.size();
    for (auto& imf : imf_sum) {
      for (auto& v : imf) v *= inv;
    }
    for (auto& v : residual_sum) v *= inv;
    out.imfs = std::move(imf_sum);
    out.residual = std::move(residual_sum);
    return out;
  }
};

}  // namespace

ImfSet ceemd_serial(std::span<const double> signal, const CeemdConfig& cfg) {
  cfg.validate();
  const double sigma = cfg.noise_amplitude_rel * checked_std(signal);
  const std::size_t branches = 2 * cfg.ensemble_pairs;

  Accumulator acc(signal.size());
  for (std::size_t b = 0; b < branches; ++b) acc.add(run_branch(signal, sigma, cfg, b));
  return std::move(acc).finish(branches);
}

ImfSet ceemd(std::span<const double> signal, const CeemdConfig& cfg) {
  cfg.validate();
  const double sigma = cfg.noise_amplitude_rel * checked_std(signal);
  const std::size_t branches = 2 * cfg.ensemble_pairs;

  // Branches are decomposed in blocks and reduced in branch order, which keeps
  // the floating-point summation order identical to the serial path.
  const std::size_t block = std::max<std::size_t>(2, 4 * static_cast<std::size_t>(omp_get_max_threads()));
  Accumulator acc(signal.size());
  std::vector<EmdResult> results(std::min(block, branches));

  for (std::size_t start = 0; start < branches; start += block) {
    const std::size_t count = std::min(block, branches - start);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t j = 0; j < count; ++j) {
      try {
        results[j] = run_branch(signal, sigma, cfg, start + j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t j = 0; j < count; ++j) acc.add(results[j]);
  }
  return std::move(acc).finish(branches);
}

ComplexImfSet ceemd_complex(const ComplexSignal& signal, const CeemdConfig& cfg) {
  const auto re = signal.real_part();
  const auto im = signal.imag_part();
  return {ceemd(re, cfg), ceemd(im, cfg)};
}

}  // namespace ceemdes
