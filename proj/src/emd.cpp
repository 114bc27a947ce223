#include "ceemdes/emd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/error.hpp"
#include "ceemdes/spline.hpp"

namespace ceemdes {

namespace {

constexpr std::size_t kMirrored = 2;

using Index = std::int64_t;
using IndexList = std::vector<Index>;

// Elements [from, to) of v, reversed.
IndexList reversed_slice(const std::vector<std::size_t>& v, Index from, Index to) {
  from = std::max<Index>(from, 0);
  to = std::min<Index>(to, static_cast<Index>(v.size()));
  IndexList out;
  for (Index i = to - 1; i >= from; --i) out.push_back(static_cast<Index>(v[i]));
  return out;
}

struct Knots {
  std::vector<double> t;
  std::vector<double> z;
};

// Mirror-extended knot sets for the upper (maxima) and lower (minima)
// envelopes, following the usual symmetric boundary rule: reflect about the
// first/last extremum, or about the end sample when that sample is itself
// more extreme than the neighbouring extremum of opposite kind.
std::pair<Knots, Knots> extended_knots(std::span<const double> x, const Extrema& ext) {
  const auto& imax = ext.maxima;
  const auto& imin = ext.minima;
  const Index nb = static_cast<Index>(kMirrored);
  const Index last = static_cast<Index>(x.size()) - 1;
  const Index nmax = static_cast<Index>(imax.size());
  const Index nmin = static_cast<Index>(imin.size());

  IndexList lmax, lmin, rmax, rmin;
  Index lsym = 0;
  Index rsym = last;

  if (imax.front() < imin.front()) {
    if (x[0] > x[imin.front()]) {
      lmax = reversed_slice(imax, 1, 1 + nb);
      lmin = reversed_slice(imin, 0, nb);
      lsym = static_cast<Index>(imax.front());
    } else {
      lmax = reversed_slice(imax, 0, nb);
      lmin = reversed_slice(imin, 0, nb - 1);
      lmin.push_back(0);
      lsym = 0;
    }
  } else {
    if (x[0] < x[imax.front()]) {
      lmax = reversed_slice(imax, 0, nb);
      lmin = reversed_slice(imin, 1, 1 + nb);
      lsym = static_cast<Index>(imin.front());
    } else {
      lmax = reversed_slice(imax, 0, nb - 1);
      lmax.push_back(0);
      lmin = reversed_slice(imin, 0, nb);
      lsym = 0;
    }
  }

  if (imax.back() < imin.back()) {
    if (x[last] < x[imax.back()]) {
      rmax = reversed_slice(imax, nmax - nb, nmax);
      rmin = reversed_slice(imin, nmin - nb - 1, nmin - 1);
      rsym = static_cast<Index>(imin.back());
    } else {
      rmax = {last};
      for (Index v : reversed_slice(imax, nmax - nb + 1, nmax)) rmax.push_back(v);
      rmin = reversed_slice(imin, nmin - nb, nmin);
      rsym = last;
    }
  } else {
    if (x[last] > x[imin.back()]) {
      rmax = reversed_slice(imax, nmax - nb - 1, nmax - 1);
      rmin = reversed_slice(imin, nmin - nb, nmin);
      rsym = static_cast<Index>(imax.back());
    } else {
      rmax = reversed_slice(imax, nmax - nb, nmax);
      rmin = {last};
      for (Index v : reversed_slice(imin, nmin - nb + 1, nmin)) rmin.push_back(v);
      rsym = last;
    }
  }

  auto mirror = [](const IndexList& idx, Index sym) {
    std::vector<double> t;
    t.reserve(idx.size());
    for (Index i : idx) t.push_back(static_cast<double>(2 * sym - i));
    return t;
  };

  auto tlmin = mirror(lmin, lsym);
  auto tlmax = mirror(lmax, lsym);
  auto trmin = mirror(rmin, rsym);
  auto trmax = mirror(rmax, rsym);

  // The reflection about an interior extremum may not reach past the ends;
  // fall back to reflecting about the end sample.
  if ((!tlmin.empty() && tlmin.front() > 0.0) || (!tlmax.empty() && tlmax.front() > 0.0)) {
    if (lsym == static_cast<Index>(imax.front())) {
      lmax = reversed_slice(imax, 0, nb);
    } else {
      lmin = reversed_slice(imin, 0, nb);
    }
    lsym = 0;
    tlmin = mirror(lmin, lsym);
    tlmax = mirror(lmax, lsym);
  }
  const double tend = static_cast<double>(last);
  if ((!trmin.empty() && trmin.back() < tend) || (!trmax.empty() && trmax.back() < tend)) {
    if (rsym == static_cast<Index>(imax.back())) {
      rmax = reversed_slice(imax, nmax - nb, nmax);
    } else {
      rmin = reversed_slice(imin, nmin - nb, nmin);
    }
    rsym = last;
    trmin = mirror(rmin, rsym);
    trmax = mirror(rmax, rsym);
  }

  auto assemble = [&](const std::vector<double>& tl, const IndexList& il,
                      const std::vector<std::size_t>& mid, const std::vector<double>& tr,
                      const IndexList& ir) {
    Knots k;
    auto push = [&](double t, Index i) {
      // Drop knots that would break strict monotonicity (coincident mirrors).
      if (!k.t.empty() && !(t > k.t.back())) return;
      k.t.push_back(t);
      k.z.push_back(x[static_cast<std::size_t>(i)]);
    };
    for (std::size_t j = 0; j < tl.size(); ++j) push(tl[j], il[j]);
    for (std::size_t i : mid) push(static_cast<double>(i), static_cast<Index>(i));
    for (std::size_t j = 0; j < tr.size(); ++j) push(tr[j], ir[j]);
    return k;
  };

  return {assemble(tlmax, lmax, imax, trmax, rmax), assemble(tlmin, lmin, imin, trmin, rmin)};
}

double population_std(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

Extrema find_extrema(std::span<const double> x) {
  Extrema ext;
  const std::size_t n = x.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (i > 0 && j + 1 < n) {
      const double prev = x[i - 1];
      const double next = x[j + 1];
      if (x[i] > prev && x[i] > next) {
        ext.maxima.push_back((i + j) / 2);
      } else if (x[i] < prev && x[i] < next) {
        ext.minima.push_back((i + j) / 2);
      }
    }
    i = j + 1;
  }
  return ext;
}

std::size_t count_zero_crossings(std::span<const double> x) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0) != (x[i] < 0.0)) ++count;
  }
  return count;
}

namespace {

Envelopes envelopes_from(std::span<const double> series, const Extrema& ext) {
  if (ext.maxima.empty() || ext.minima.empty() ||
      ext.maxima.size() + ext.minima.size() < 3) {
    throw Error("monotone remainder");
  }
  auto [up, lo] = extended_knots(series, ext);
  if (up.t.size() < 2 || lo.t.size() < 2) throw Error("monotone remainder");

  Envelopes env;
  env.upper = NaturalCubicSpline(up.t, up.z).sample_grid(series.size());
  env.lower = NaturalCubicSpline(lo.t, lo.z).sample_grid(series.size());
  return env;
}

bool imf_test(std::span<const double> series, const Extrema& ext, const Envelopes& env,
              double envelope_tol, std::size_t slack) {
  const std::size_t n_ext = ext.maxima.size() + ext.minima.size();
  const std::size_t n_zc = count_zero_crossings(series);
  const std::size_t diff = n_ext > n_zc ? n_ext - n_zc : n_zc - n_ext;
  if (diff > slack) return false;

  double mean_abs = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    mean_abs += std::abs(0.5 * (env.upper[i] + env.lower[i]));
  }
  mean_abs /= static_cast<double>(series.size());
  return mean_abs <= envelope_tol * population_std(series);
}

}  // namespace

Envelopes envelope_pair(std::span<const double> series) {
  if (series.size() < 3) throw Error("monotone remainder");
  return envelopes_from(series, find_extrema(series));
}

bool is_imf(std::span<const double> series, const Envelopes& env, double envelope_tol,
            std::size_t slack) {
  return imf_test(series, find_extrema(series), env, envelope_tol, slack);
}

SiftResult sift_imf(std::span<const double> series, const CeemdConfig& cfg) {
  if (series.size() < 3) throw Error("monotone remainder");
  SiftResult out;
  std::vector<double> h(series.begin(), series.end());

  for (std::size_t it = 0; it < cfg.max_sift_iters; ++it) {
    const Extrema ext = find_extrema(h);
    Envelopes env;
    try {
      env = envelopes_from(h, ext);
    } catch (const Error&) {
      if (it == 0) throw;
      break;
    }
    if (imf_test(h, ext, env, cfg.envelope_tol, cfg.extrema_zero_slack)) break;
    for (std::size_t i = 0; i < h.size(); ++i) h[i] -= 0.5 * (env.upper[i] + env.lower[i]);
    ++out.iterations;
  }

  out.remainder.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out.remainder[i] = series[i] - h[i];
  out.imf = std::move(h);
  return out;
}

EmdResult emd(std::span<const double> series, const CeemdConfig& cfg) {
  EmdResult out;
  std::vector<double> r(series.begin(), series.end());
  for (std::size_t k = 0; k < cfg.max_imfs; ++k) {
    SiftResult s;
    try {
      s = sift_imf(r, cfg);
    } catch (const Error&) {
      break;  // monotone remainder: decomposition complete
    }
    out.imfs.push_back(std::move(s.imf));
    r = std::move(s.remainder);
  }
  out.residual = std::move(r);
  return out;
}

}  // namespace ceemdes
