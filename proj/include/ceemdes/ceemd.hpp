#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ceemdes/signal.hpp"

namespace ceemdes {

struct CeemdConfig {
  double noise_amplitude_rel = 0.2;  // noise std as a fraction of the input std
  std::size_t ensemble_pairs = 50;
  std::size_t max_imfs = 8;
  std::size_t max_sift_iters = 10;
  double envelope_tol = 0.05;
  std::size_t extrema_zero_slack = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// IMFs ordered highest-frequency first, plus the residual.
struct ImfSet {
  std::vector<std::vector<double>> imfs;
  std::vector<double> residual;
  std::size_t source_len = 0;

  std::size_t size() const { return imfs.size(); }
  std::vector<double> reconstruct() const;
};

// Independent decompositions of the I and Q channels of a complex signal.
struct ComplexImfSet {
  ImfSet in_phase;
  ImfSet quadrature;
};

// Complementary ensemble EMD. Each ensemble pair adds and subtracts the same
// Gaussian noise realization; the resulting 2 * ensemble_pairs branches are
// decomposed independently (in parallel with OpenMP) and averaged level by
// level. Results are bit-identical to ceemd_serial().
ImfSet ceemd(std::span<const double> signal, const CeemdConfig& cfg);

// Single-threaded reference implementation of ceemd().
ImfSet ceemd_serial(std::span<const double> signal, const CeemdConfig& cfg);

// I and Q decomposed with the same noise seeds.
ComplexImfSet ceemd_complex(const ComplexSignal& signal, const CeemdConfig& cfg);

// The noise realization used by ensemble pair `pair` (before the +/- sign).
std::vector<double> ensemble_noise(std::size_t n, double sigma, std::uint64_t seed,
                                   std::size_t pair);

}  // namespace ceemdes
