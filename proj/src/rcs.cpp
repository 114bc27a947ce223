#include "ceemdes/rcs.hpp"

#include <cmath>
#include <numbers>

#include "ceemdes/error.hpp"

namespace ceemdes {

void BodyEllipsoid::validate() const {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw Error("ellipsoid semi-axes must be positive");
}

AspectAngles aspect_angles(const Vec3& p) {
  if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) throw Error("radar at origin");
  AspectAngles out;
  out.theta = std::atan2(std::hypot(p.x, p.y), p.z);
  out.phi = std::atan2(p.y, p.x);
  if (out.phi == -std::numbers::pi) out.phi = std::numbers::pi;
  return out;
}

double ellipsoid_rcs(const BodyEllipsoid& body, double theta, double phi) {
  body.validate();
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double a2 = body.a * body.a, b2 = body.b * body.b, c2 = body.c * body.c;
  const double den = a2 * st * st * cp * cp + b2 * st * st * sp * sp + c2 * ct * ct;
  return std::numbers::pi * a2 * b2 * c2 / (den * den);
}

double frontal_rcs(const BodyEllipsoid& body) {
  body.validate();
  const double mu = std::sqrt(std::numbers::pi) / body.b;
  return mu * body.a * body.c;
}

double aspect_rcs_factor(const BodyEllipsoid& body, const Vec3& position) {
  const auto ang = aspect_angles(position);
  const double half_pi = 0.5 * std::numbers::pi;
  return ellipsoid_rcs(body, ang.theta, ang.phi) / ellipsoid_rcs(body, half_pi, half_pi);
}

}  // namespace ceemdes
