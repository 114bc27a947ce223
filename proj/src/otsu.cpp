#include "ceemdes/otsu.hpp"

#include <algorithm>

#include "ceemdes/error.hpp"

namespace ceemdes {

std::size_t Histogram::level_of(double v) const {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                  edges.begin());
}

Histogram make_histogram(std::span<const double> values, std::size_t n_bins) {
  if (n_bins < 2) throw Error("n_bins must be >= 2");
  if (values.empty()) throw Error("empty input");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  Histogram h;
  h.lo = *mn;
  h.hi = *mx;
  if (!(h.hi > h.lo)) throw Error("degenerate histogram");

  const double width = (h.hi - h.lo) / static_cast<double>(n_bins);
  h.edges.resize(n_bins - 1);
  for (std::size_t k = 1; k < n_bins; ++k) h.edges[k - 1] = h.lo + static_cast<double>(k) * width;
  h.counts.assign(n_bins, 0);
  for (double v : values) ++h.counts[h.level_of(v)];
  return h;
}

double otsu_between_class_score(std::int64_t n0, std::int64_t s0, std::int64_t n,
                                std::int64_t s) {
  const std::int64_t n1 = n - n0;
  if (n0 == 0 || n1 == 0) return 0.0;
  const double num = static_cast<double>(n * s0 - n0 * s);
  return num * num / (static_cast<double>(n0) * static_cast<double>(n1));
}

OtsuResult otsu_threshold(std::span<const double> values, std::size_t n_bins) {
  const Histogram h = make_histogram(values, n_bins);

  std::int64_t n = 0;
  std::int64_t s = 0;
  for (std::size_t k = 0; k < n_bins; ++k) {
    n += h.counts[k];
    s += h.counts[k] * static_cast<std::int64_t>(k);
  }

  double best = -1.0;
  std::size_t best_k = 1;
  std::int64_t n0 = 0;
  std::int64_t s0 = 0;
  for (std::size_t k = 1; k < n_bins; ++k) {
    n0 += h.counts[k - 1];
    s0 += h.counts[k - 1] * static_cast<std::int64_t>(k - 1);
    const double score = otsu_between_class_score(n0, s0, n, s);
    if (score > best) {
      best = score;
      best_k = k;
    }
  }

  OtsuResult out;
  out.split = best_k;
  out.threshold = h.lower_edge(best_k);
  out.mask.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.mask[i] = values[i] >= out.threshold ? 1 : 0;
  return out;
}

OtsuResult otsu_filter(const Spectrogram& spec, std::size_t n_bins) {
  if (spec.mag.empty()) throw Error("empty spectrogram");
  return otsu_threshold(spec.mag, n_bins);
}

}  // namespace ceemdes
