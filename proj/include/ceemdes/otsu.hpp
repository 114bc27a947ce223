#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ceemdes/signal.hpp"

namespace ceemdes {

// n_bins equal-width histogram over [min, max] of a value set. Bin k holds
// values v with edge(k) <= v < edge(k + 1); the maximum lands in the last bin.
struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> edges;  // interior edges, edges[k - 1] = lower edge of bin k
  std::vector<std::int64_t> counts;

  std::size_t level_of(double v) const;
  double lower_edge(std::size_t k) const { return k == 0 ? lo : edges[k - 1]; }
};

Histogram make_histogram(std::span<const double> values, std::size_t n_bins);

// Between-class variance of the split "level < k | level >= k", scaled by
// N^2: (N * S0 - n0 * S)^2 / (n0 * n1) with integer level sums. Zero when a
// class is empty.
double otsu_between_class_score(std::int64_t n0, std::int64_t s0, std::int64_t n,
                                std::int64_t s);

struct OtsuResult {
  double threshold = 0.0;   // lower edge of the first foreground bin
  std::size_t split = 0;    // first foreground histogram level
  std::vector<std::uint8_t> mask;  // same layout as the input values
};

OtsuResult otsu_threshold(std::span<const double> values, std::size_t n_bins = 256);

// Binarizes spectrogram magnitudes; mask is row-major [n_frames x n_bins].
OtsuResult otsu_filter(const Spectrogram& spec, std::size_t n_bins = 256);

}  // namespace ceemdes
