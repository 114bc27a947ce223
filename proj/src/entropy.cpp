#include "ceemdes/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ceemdes/error.hpp"

namespace ceemdes {

void EmbeddingConfig::validate() const {
  if (m < 1) throw Error("embedding dimension must be >= 1");
  if (!(r_rel > 0.0)) throw Error("r_rel must be > 0");
  if (delay < 1) throw Error("delay must be >= 1");
}

void MseConfig::validate() const {
  if (max_scale < 1) throw Error("max_scale must be >= 1");
  base.validate();
}

namespace {

double population_std(std::span<const double> x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

double phi_from_counts(const std::vector<std::size_t>& counts) {
  const double n = static_cast<double>(counts.size());
  double sum = 0.0;
  for (std::size_t c : counts) sum += std::log(static_cast<double>(c) / n);
  return sum / n;
}

std::size_t factorial(std::size_t m) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

double approximate_entropy_abs(std::span<const double> x, std::size_t m, double r) {
  if (m < 1) throw Error("embedding dimension must be >= 1");
  if (!(r > 0.0)) throw Error("tolerance must be > 0");
  const std::size_t n = x.size();
  if (n < m + 2) throw Error("series too short");

  const std::size_t nm = n - m + 1;   // number of m-vectors
  const std::size_t nm1 = n - m;      // number of (m+1)-vectors

  // Candidates are pre-filtered on the first coordinate through a sorted
  // index; every candidate is then tested with the exact Chebyshev rule, so
  // counts equal those of the all-pairs definition.
  std::vector<std::size_t> order(nm);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && a < b);
  });
  std::vector<double> sorted(nm);
  for (std::size_t k = 0; k < nm; ++k) sorted[k] = x[order[k]];

  std::vector<std::size_t> count_m(nm, 0);
  std::vector<std::size_t> count_m1(nm1, 0);
  for (std::size_t i = 0; i < nm; ++i) {
    const double margin = 1e-9 * (std::abs(x[i]) + r);
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x[i] - r - margin);
    const auto hi = std::upper_bound(lo, sorted.end(), x[i] + r + margin);
    for (auto it = lo; it != hi; ++it) {
      const std::size_t j = order[static_cast<std::size_t>(it - sorted.begin())];
      bool match = true;
      for (std::size_t k = 0; k < m && match; ++k) match = std::abs(x[i + k] - x[j + k]) <= r;
      if (!match) continue;
      ++count_m[i];
      if (i < nm1 && j < nm1 && std::abs(x[i + m] - x[j + m]) <= r) ++count_m1[i];
    }
  }
  return phi_from_counts(count_m) - phi_from_counts(count_m1);
}

double approximate_entropy(std::span<const double> series, const EmbeddingConfig& cfg) {
  cfg.validate();
  if (series.size() < cfg.m + 2) throw Error("series too short");
  const double sd = population_std(series);
  double scale = 1.0;
  for (double v : series) scale = std::max(scale, std::abs(v));
  if (sd <= kRegularSeriesRelStd * scale) return 0.0;
  return approximate_entropy_abs(series, cfg.m, cfg.r_rel * sd);
}

std::size_t ordinal_pattern_index(std::span<const double> x, std::size_t start, std::size_t m,
                                  std::size_t delay) {
  std::size_t perm[16];
  for (std::size_t k = 0; k < m; ++k) perm[k] = k;
  std::stable_sort(perm, perm + m, [&](std::size_t a, std::size_t b) {
    return x[start + a * delay] < x[start + b * delay];
  });
  // Lehmer code -> lexicographic rank
  std::size_t rank = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank = rank * (m - i) + smaller;
  }
  return rank;
}

double permutation_entropy(std::span<const double> series, const EmbeddingConfig& cfg) {
  cfg.validate();
  if (cfg.m > 10) throw Error("embedding dimension must be <= 10");
  const std::size_t span_len = (cfg.m - 1) * cfg.delay;
  if (series.size() < span_len + 2) throw Error("series too short");

  const std::size_t n_tuples = series.size() - span_len;
  std::vector<std::size_t> counts(factorial(cfg.m), 0);
  for (std::size_t t = 0; t < n_tuples; ++t) {
    ++counts[ordinal_pattern_index(series, t, cfg.m, cfg.delay)];
  }
  double pe = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n_tuples);
    pe -= p * std::log(p);
  }
  return pe;
}

std::vector<double> coarse_grain(std::span<const double> series, std::size_t scale) {
  if (scale < 1 || scale > series.size()) throw Error("invalid scale");
  const std::size_t blocks = series.size() / scale;
  std::vector<double> out(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    double sum = 0.0;
    for (std::size_t i = j * scale; i < (j + 1) * scale; ++i) sum += series[i];
    out[j] = sum / static_cast<double>(scale);
  }
  return out;
}

std::vector<double> multiscale_entropy(std::span<const double> series, const MseConfig& cfg) {
  cfg.validate();
  if (series.size() / cfg.max_scale < cfg.base.m + 2) throw Error("series too short");
  std::vector<double> out;
  out.reserve(cfg.max_scale);
  for (std::size_t s = 1; s <= cfg.max_scale; ++s) {
    out.push_back(approximate_entropy(coarse_grain(series, s), cfg.base));
  }
  return out;
}

}  // namespace ceemdes
