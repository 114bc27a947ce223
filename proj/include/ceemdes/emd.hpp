#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ceemdes {

struct CeemdConfig;

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

// Strict interior local extrema. A flat run bounded on both sides by lower
// (higher) samples counts once, at floor((first + last) / 2).
Extrema find_extrema(std::span<const double> series);

std::size_t count_zero_crossings(std::span<const double> series);

struct Envelopes {
  std::vector<double> upper;
  std::vector<double> lower;
};

// Natural cubic spline envelopes through the maxima and minima, with two
// extrema mirrored past each end. Throws Error("monotone remainder") when
// there are not enough extrema to support both envelopes.
Envelopes envelope_pair(std::span<const double> series);

// IMF acceptance: extrema/zero-crossing counts differ by at most `slack`
// and the mean absolute envelope mean is within tol * std(series).
bool is_imf(std::span<const double> series, const Envelopes& env, double envelope_tol,
            std::size_t slack);

struct SiftResult {
  std::vector<double> imf;
  std::vector<double> remainder;
  std::size_t iterations = 0;
};

SiftResult sift_imf(std::span<const double> series, const CeemdConfig& cfg);

// Plain EMD of one series: at most max_imfs IMFs, stopping early once the
// remainder is monotone. Returns IMFs highest-frequency first; the last
// element of the pair is the residual.
struct EmdResult {
  std::vector<std::vector<double>> imfs;
  std::vector<double> residual;
};

EmdResult emd(std::span<const double> series, const CeemdConfig& cfg);

}  // namespace ceemdes
