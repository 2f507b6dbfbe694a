#pragma once

#include "ncflow/geometry.hpp"

#include <cstddef>

namespace ncflow::gen {

/// Circle of radius r about `center`, uniform in angle, node 0 at angle 0.
DiscreteHypersurface circle(double r, std::size_t n, Vec2 center = Vec2::Zero());

/// Ellipse (a cos t, b sin t). Uniform arclength by default, else uniform in t.
/// Node 0 sits at (a, 0) either way.
DiscreteHypersurface ellipse(double a, double b, std::size_t n, bool uniform_arclength = true);

/// Sphere of radius r centered at x0 on the axis, uniform in polar angle.
DiscreteHypersurface sphere(double r, std::size_t n, double x0 = 0.0);

/// Spheroid with axial semi-axis a and equatorial radius b, uniform arclength.
DiscreteHypersurface ellipsoid(double a, double b, std::size_t n);

/// Torus of revolution: tube radius `tube` about the circle of radius
/// `center_radius`.
DiscreteHypersurface torus(double center_radius, double tube, std::size_t n);

/// Two spheres of radius R joined by a cylindrical neck of radius rho*R over
/// |x| <= neck_half_length, blended into the spheres with a C2 cosine blend.
DiscreteHypersurface dumbbell(double radius, double rho, double neck_half_length, std::size_t n);

} // namespace ncflow::gen
