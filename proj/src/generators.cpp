#include "ncflow/generators.hpp"

#include "ncflow/errors.hpp"

#include <cmath>
#include <numbers>

namespace ncflow::gen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kOversample = 32;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(what) + " must be positive");
}

} // namespace

DiscreteHypersurface circle(double r, std::size_t n, Vec2 center)
{
  require_positive(r, "circle radius");
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    pts[k] = center + r * Vec2(std::cos(t), std::sin(t));
  }
  return DiscreteHypersurface::plane_curve(std::move(pts));
}

DiscreteHypersurface ellipse(double a, double b, std::size_t n, bool uniform_arclength)
{
  require_positive(a, "ellipse semi-axis a");
  require_positive(b, "ellipse semi-axis b");
  const std::size_t m = uniform_arclength ? kOversample * n : n;
  std::vector<Vec2> pts(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
    pts[k] = Vec2(a * std::cos(t), b * std::sin(t));
  }
  auto dense = DiscreteHypersurface::plane_curve(std::move(pts));
  if (!uniform_arclength)
    return dense;
  auto fine = resample_arclength(dense);
  // Pick every kOversample-th node of the equal-chord dense curve, then
  // equalize at the target resolution.
  std::vector<Vec2> coarse(n);
  for (std::size_t k = 0; k < n; ++k)
    coarse[k] = fine.nodes()[k * kOversample];
  return resample_arclength(DiscreteHypersurface::plane_curve(std::move(coarse)));
}

DiscreteHypersurface sphere(double r, std::size_t n, double x0)
{
  require_positive(r, "sphere radius");
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = kPi * static_cast<double>(k) / static_cast<double>(n - 1);
    pts[k] = Vec2(x0 + r * std::cos(s), r * std::sin(s));
  }
  pts.front().y() = 0.0;
  pts.back().y() = 0.0;
  return DiscreteHypersurface::axisymmetric(std::move(pts), Topology::SphereLike);
}

namespace {

/// Dense sphere-like profile from a parametrization on [0, pi], reduced to n
/// nodes of uniform spacing.
template <class Param>
DiscreteHypersurface profile_from_param(Param&& param, std::size_t n)
{
  const std::size_t m = kOversample * (n - 1) + 1;
  std::vector<Vec2> pts(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = kPi * static_cast<double>(k) / static_cast<double>(m - 1);
    pts[k] = param(t);
  }
  pts.front().y() = 0.0;
  pts.back().y() = 0.0;
  auto fine = resample_arclength(
    DiscreteHypersurface::axisymmetric(std::move(pts), Topology::SphereLike));
  std::vector<Vec2> coarse(n);
  for (std::size_t k = 0; k < n; ++k)
    coarse[k] = fine.nodes()[k * kOversample];
  return resample_arclength(
    DiscreteHypersurface::axisymmetric(std::move(coarse), Topology::SphereLike));
}

} // namespace

DiscreteHypersurface ellipsoid(double a, double b, std::size_t n)
{
  require_positive(a, "ellipsoid axial semi-axis a");
  require_positive(b, "ellipsoid equatorial semi-axis b");
  return profile_from_param([&](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); }, n);
}

DiscreteHypersurface torus(double center_radius, double tube, std::size_t n)
{
  require_positive(center_radius, "torus center radius");
  require_positive(tube, "torus tube radius");
  if (!(tube < center_radius))
    throw ValidationError("torus tube radius must be smaller than its center radius");
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    pts[k] = Vec2(tube * std::cos(t), center_radius + tube * std::sin(t));
  }
  return DiscreteHypersurface::axisymmetric(std::move(pts), Topology::TorusLike);
}

DiscreteHypersurface dumbbell(double radius, double rho, double neck_half_length, std::size_t n)
{
  require_positive(radius, "dumbbell radius");
  require_positive(rho, "dumbbell neck ratio");
  if (!(rho < 1.0))
    throw ValidationError("dumbbell neck ratio must be below 1");
  if (!(neck_half_length >= 0.0))
    throw ValidationError("dumbbell neck half-length must be non-negative");

  const double R = radius;
  const double neck = rho * R;
  const double ell = neck_half_length;
  const double c = ell + R; // sphere centers at +-c
  const double x_end = c + R;

  auto r_of_x = [=](double x) {
    const double ax = std::abs(x);
    if (ax <= ell)
      return neck;
    const double dx = ax - c;
    const double cap = std::sqrt(std::max(0.0, R * R - dx * dx));
    if (ax >= c)
      return cap;
    // w(u) = u - sin(2 pi u)/(2 pi): w, w', w'' match 0 and 1 at the ends.
    const double u = (ax - ell) / R;
    const double w = u - std::sin(2.0 * kPi * u) / (2.0 * kPi);
    return (1.0 - w) * neck + w * cap;
  };

  return profile_from_param(
    [&](double t) {
      const double x = x_end * std::cos(t);
      return Vec2(x, r_of_x(x));
    },
    n);
}

} // namespace ncflow::gen
