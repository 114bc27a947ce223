#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ceemdes {

// Natural cubic spline through (x[i], y[i]); x strictly increasing.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double t) const;

  // Evaluates at t = 0, 1, ..., n - 1 in one forward sweep.
  std::vector<double> sample_grid(std::size_t n) const;
  void sample_grid(std::span<double> out) const;

 private:
  double eval_segment(std::size_t seg, double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace ceemdes
