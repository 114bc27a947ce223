#pragma once
// Reference implementations used as test oracles. Deliberately naive: no
// sorting tricks, no shared code with the library kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

// O(N^2) approximate entropy, counting every vector pair including self.
inline double apen_brute(const std::vector<double>& x, std::size_t m, double r) {
  auto phi = [&](std::size_t mm) {
    const std::size_t n = x.size() - mm + 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < mm; ++k) d = std::max(d, std::abs(x[i + k] - x[j + k]));
        if (d <= r) ++c;
      }
      acc += std::log(static_cast<double>(c) / static_cast<double>(n));
    }
    return acc / static_cast<double>(n);
  };
  return phi(m) - phi(m + 1);
}

inline double pop_std(const std::vector<double>& x) {
  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(x.size()));
}

// Permutation entropy by exhaustive enumeration: every permutation of
// 0..m-1 (in lexicographic order) is tested against each tuple's ranking.
inline double pe_enumerate(const std::vector<double>& x, std::size_t m, std::size_t delay) {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::vector<std::size_t> counts(perms.size(), 0);
  const std::size_t span = (m - 1) * delay;
  const std::size_t n = x.size() - span;
  for (std::size_t t = 0; t < n; ++t) {
    // pattern = the permutation that sorts the tuple ascending, ties by index
    for (std::size_t q = 0; q < perms.size(); ++q) {
      bool ok = true;
      for (std::size_t k = 0; k + 1 < m && ok; ++k) {
        const std::size_t a = perms[q][k], b = perms[q][k + 1];
        const double va = x[t + a * delay], vb = x[t + b * delay];
        ok = va < vb || (va == vb && a < b);
      }
      if (ok) {
        ++counts[q];
        break;
      }
    }
  }
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double pr = static_cast<double>(c) / static_cast<double>(n);
    h -= pr * std::log(pr);
  }
  return h;
}

// Otsu by exhaustive search: every split k in 1..L-1, class statistics
// computed from scratch from the level of each value.
struct OtsuPick {
  std::size_t split;
  double threshold;
};

inline OtsuPick otsu_exhaustive(const std::vector<double>& v, std::size_t levels) {
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  const double w = (hi - lo) / static_cast<double>(levels);
  std::vector<double> edges(levels - 1);
  for (std::size_t k = 1; k < levels; ++k) edges[k - 1] = lo + w * static_cast<double>(k);
  std::vector<std::int64_t> lvl(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::int64_t l = 0;
    while (l < static_cast<std::int64_t>(levels) - 1 && v[i] >= edges[static_cast<std::size_t>(l)]) ++l;
    lvl[i] = l;
  }
  // score_k = (n1*s0 - n0*s1)^2 / (n0*n1), compared exactly as fractions
  __int128 best_num = -1, best_den = 1;
  std::size_t best_k = 1;
  for (std::size_t k = 1; k < levels; ++k) {
    __int128 n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (auto l : lvl) {
      if (l < static_cast<std::int64_t>(k)) {
        n0 += 1;
        s0 += l;
      } else {
        n1 += 1;
        s1 += l;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const __int128 d = n1 * s0 - n0 * s1;
    const __int128 num = d * d, den = n0 * n1;
    if (best_num < 0 || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_k = k;
    }
  }
  return {best_k, edges[best_k - 1]};
}

// Sum over frames of sum_n |w[n] x[f*hop + n]|^2.
inline double windowed_energy(const std::vector<std::complex<double>>& x, const std::vector<double>& w,
                              std::size_t hop) {
  const std::size_t L = w.size();
  const std::size_t frames = (x.size() - L) / hop + 1;
  double e = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t n = 0; n < L; ++n) e += std::norm(w[n] * x[f * hop + n]);
  }
  return e;
}

inline std::vector<double> white(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = d(g);
  return x;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
