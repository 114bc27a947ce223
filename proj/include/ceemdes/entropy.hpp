#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ceemdes {

struct EmbeddingConfig {
  std::size_t m = 2;     // embedding dimension
  double r_rel = 0.2;    // tolerance as a fraction of the series std
  std::size_t delay = 1; // permutation entropy only

  void validate() const;
};

struct MseConfig {
  std::size_t max_scale = 5;
  EmbeddingConfig base;

  void validate() const;
};

// Series whose population std falls below this fraction of max(1, max|x|)
// are treated as perfectly regular (ApEn = 0).
inline constexpr double kRegularSeriesRelStd = 1e-12;

// Approximate entropy with an absolute Chebyshev tolerance r:
// Phi^m(r) - Phi^{m+1}(r), self-matches included.
double approximate_entropy_abs(std::span<const double> series, std::size_t m, double r);

// Approximate entropy with r = r_rel * std(series).
double approximate_entropy(std::span<const double> series, const EmbeddingConfig& cfg);

// Shannon entropy (nats) of the observed ordinal patterns of m-tuples spaced
// `delay` apart. Ties rank the earlier sample lower.
double permutation_entropy(std::span<const double> series, const EmbeddingConfig& cfg);

// Lexicographic rank of the ordinal pattern of (x[0], x[delay], ...).
std::size_t ordinal_pattern_index(std::span<const double> series, std::size_t start,
                                  std::size_t m, std::size_t delay);

// Non-overlapping block means of length `scale`; the partial tail is dropped.
std::vector<double> coarse_grain(std::span<const double> series, std::size_t scale);

// ApEn of coarse_grain(series, s) for s = 1..max_scale, with r recomputed
// from each coarse-grained series.
std::vector<double> multiscale_entropy(std::span<const double> series, const MseConfig& cfg);

}  // namespace ceemdes
