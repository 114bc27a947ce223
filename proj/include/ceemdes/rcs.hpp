#pragma once

namespace ceemdes {

// Body-centred frame: x lateral, y forward (towards a frontal radar), z up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct BodyEllipsoid {
  double a = 0.25;  // semi-axis along x (m)
  double b = 0.15;  // semi-axis along y (m)
  double c = 0.9;   // semi-axis along z (m)

  void validate() const;
};

struct AspectAngles {
  double theta = 0.0;  // incidence from +z, [0, pi]
  double phi = 0.0;    // azimuth from +x, (-pi, pi]
};

AspectAngles aspect_angles(const Vec3& position);

// Geometric-optics ellipsoid backscatter:
// pi a^2 b^2 c^2 / (a^2 sin^2(t) cos^2(p) + b^2 sin^2(t) sin^2(p) + c^2 cos^2(t))^2
double ellipsoid_rcs(const BodyEllipsoid& body, double theta, double phi);

// Frontal simplification sqrt(pi) * a * c / b. Note this is the square root
// of ellipsoid_rcs(body, pi/2, pi/2) and carries units of metres, not m^2.
double frontal_rcs(const BodyEllipsoid& body);

// ellipsoid_rcs at the given position, normalised by its value at the
// frontal aspect (theta = phi = pi/2).
double aspect_rcs_factor(const BodyEllipsoid& body, const Vec3& position);

}  // namespace ceemdes
