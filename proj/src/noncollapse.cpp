#include "ncflow/noncollapse.hpp"

#include "ncflow/errors.hpp"
#include "ncflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ncflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct AngleTable
{
  std::vector<double> cos_phi;
  std::vector<double> sin_phi;
  std::vector<double> wrapped; ///< |phi| folded into [0, pi]

  explicit AngleTable(std::size_t m) : cos_phi(m), sin_phi(m), wrapped(m)
  {
    for (std::size_t k = 0; k < m; ++k) {
      const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
      cos_phi[k] = std::cos(phi);
      sin_phi[k] = std::sin(phi);
      wrapped[k] = std::min(phi, 2.0 * kPi - phi);
    }
    // Exact values at the symmetric angles keep the search mirror-symmetric.
    cos_phi[0] = 1.0;
    sin_phi[0] = 0.0;
    if (m % 2 == 0) {
      cos_phi[m / 2] = -1.0;
      sin_phi[m / 2] = 0.0;
    }
  }
};

struct Extremes
{
  SphereCurvature high;
  SphereCurvature low;
};

Extremes search_curve(const DiscreteHypersurface& h, std::size_t i, double excl)
{
  const SurfaceSample& x = h.sample(i);
  Extremes e{{x.kappa.max(), Witness::diagonal()}, {x.kappa.min(), Witness::diagonal()}};
  const auto nodes = h.nodes();
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (j == i || !(h.profile_distance(i, j) > excl))
      continue;
    const double z = chordal_Z(x, nodes[j]);
    if (z > e.high.value)
      e.high = {z, {Witness::Kind::Grid, j, 0}};
    if (z < e.low.value)
      e.low = {z, {Witness::Kind::Grid, j, 0}};
  }
  return e;
}

Extremes search_axisym(const DiscreteHypersurface& h, std::size_t i, double excl,
                       const AngleTable& angles)
{
  const SurfaceSample& x = h.sample(i);
  Extremes e{{x.kappa.max(), Witness::diagonal()}, {x.kappa.min(), Witness::diagonal()}};
  const double xi = x.position.x();
  const double ri = x.position.y();
  const double nx = x.normal.x();
  const double nr = x.normal.y();
  const std::size_t m_count = angles.cos_phi.size();
  const double excl2 = excl * excl;
  const auto nodes = h.nodes();

  for (std::size_t j = 0; j < h.size(); ++j) {
    const double xj = nodes[j].x();
    const double rj = nodes[j].y();
    const double dx = xi - xj;
    const double ds = h.profile_distance(i, j);
    const bool near = !(ds > excl);
    const double rbar = 0.5 * (ri + rj);
    const double base = dx * dx + ri * ri + rj * rj;
    const double twice_rr = 2.0 * ri * rj;
    const std::size_t m_end = rj == 0.0 ? 1 : m_count;
    for (std::size_t m = 0; m < m_end; ++m) {
      if (near) {
        const double arc = rbar * angles.wrapped[m];
        if (!(ds * ds + arc * arc > excl2))
          continue;
      }
      const double c = angles.cos_phi[m];
      const double num = 2.0 * (nx * dx + nr * (ri - rj * c));
      const double den = base - twice_rr * c;
      const double z = num / den;
      if (z > e.high.value)
        e.high = {z, {Witness::Kind::Grid, j, m}};
      if (z < e.low.value)
        e.low = {z, {Witness::Kind::Grid, j, m}};
    }
  }
  return e;
}

Extremes search(const DiscreteHypersurface& h, std::size_t i, double excl, std::size_t angles)
{
  if (h.backend() == Backend::PlaneCurve)
    return search_curve(h, i, excl);
  const AngleTable table(angles == 0 ? default_angles(h) : angles);
  return search_axisym(h, i, excl, table);
}

void require_exclusion(const DiscreteHypersurface& h, std::size_t i, double excl)
{
  if (i >= h.size())
    throw ValidationError("sample index out of range");
  const std::size_t n = h.size();
  double local = h.segment_length(std::min(i, h.segment_count() - 1));
  if (i > 0 || h.periodic())
    local = std::max(local, h.segment_length((i + n - 1) % n));
  if (!(excl >= 2.0 * local * (1.0 - 1e-12)))
    throw ValidationError("exclusion radius must be at least twice the local spacing");
}

Vec3 lift(const Vec2& v, double c, double s)
{
  return {v.x(), v.y() * c, v.y() * s};
}

/// Signed distance from p to a closed polygon, positive inside. With
/// `open_boundary` the closing edge counts for the inside test only.
double signed_polygon_distance(const Vec2& p, std::span<const Vec2> poly, bool open_boundary)
{
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  bool inside = false;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& a = poly[k];
    const Vec2& b = poly[(k + 1) % n];
    if (!(open_boundary && k == n - 1))
      best = std::min(best, point_segment_distance(p, a, b));
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xcross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < xcross)
        inside = !inside;
    }
  }
  return inside ? best : -best;
}

template <class Fn>
double golden_maximize(Fn&& fn, double lo, double hi, int iterations = 80)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

struct Circle
{
  Vec2 center;
  double radius;

  bool contains(const Vec2& p) const { return (p - center).norm() <= radius * (1.0 + 1e-12); }
};

Circle circle_from(const Vec2& a, const Vec2& b)
{
  return {0.5 * (a + b), 0.5 * (a - b).norm()};
}

Circle circle_from(const Vec2& a, const Vec2& b, const Vec2& c)
{
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
  if (std::abs(d) < 1e-300) {
    // Collinear: the widest pair spans the circle.
    Circle best = circle_from(a, b);
    for (const Circle& cand : {circle_from(a, c), circle_from(b, c)})
      if (cand.radius > best.radius)
        best = cand;
    return best;
  }
  const double b2 = ab.squaredNorm();
  const double c2 = ac.squaredNorm();
  const Vec2 u((ac.y() * b2 - ab.y() * c2) / d, (ab.x() * c2 - ac.x() * b2) / d);
  return {a + u, u.norm()};
}

/// Welzl's minimal enclosing circle, iterative form over a fixed-seed shuffle.
Circle minimal_enclosing_circle(std::vector<Vec2> pts)
{
  std::mt19937_64 rng(0x5eed);
  std::shuffle(pts.begin(), pts.end(), rng);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (c.contains(pts[i]))
      continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (c.contains(pts[j]))
        continue;
      c = circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!c.contains(pts[k]))
          c = circle_from(pts[i], pts[j], pts[k]);
    }
  }
  return c;
}

} // namespace

std::string Witness::label(Backend backend) const
{
  if (is_diagonal())
    return "diag";
  if (backend == Backend::PlaneCurve)
    return std::to_string(node);
  return std::to_string(node) + ":" + std::to_string(angle);
}

double chordal_Z(const SurfaceSample& x, const Vec2& y)
{
  const Vec2 diff = x.position - y;
  const double d2 = diff.squaredNorm();
  const double scale = std::max({1.0, x.position.norm(), y.norm()});
  if (d2 < 1e-24 * scale * scale)
    throw CoincidentPoints("chordal quantity needs two distinct points");
  return 2.0 * diff.dot(x.normal) / d2;
}

double chordal_Z(const SurfaceSample& x, const Vec3& y)
{
  const Vec3 px(x.position.x(), x.position.y(), 0.0);
  const Vec3 nu(x.normal.x(), x.normal.y(), 0.0);
  const Vec3 diff = px - y;
  const double d2 = diff.squaredNorm();
  const double scale = std::max({1.0, px.norm(), y.norm()});
  if (d2 < 1e-24 * scale * scale)
    throw CoincidentPoints("chordal quantity needs two distinct points");
  return 2.0 * diff.dot(nu) / d2;
}

double default_exclusion_radius(const DiscreteHypersurface& h, double factor)
{
  const double spacing = h.max_spacing();
  return std::max(2.0 * spacing, factor * spacing);
}

std::size_t default_angles(const DiscreteHypersurface& h)
{
  return std::max<std::size_t>(4, h.size() / 2);
}

SphereCurvature interior_sphere_curvature(const DiscreteHypersurface& h, std::size_t i,
                                          double exclusion_radius, std::size_t angles)
{
  require_exclusion(h, i, exclusion_radius);
  return search(h, i, exclusion_radius, angles).high;
}

SphereCurvature exterior_sphere_curvature(const DiscreteHypersurface& h, std::size_t i,
                                          double exclusion_radius, std::size_t angles)
{
  require_exclusion(h, i, exclusion_radius);
  return search(h, i, exclusion_radius, angles).low;
}

SphereCurvatureField sphere_curvature_field(const DiscreteHypersurface& h,
                                            const AnalyzerOptions& opts)
{
  const std::size_t n = h.size();
  SphereCurvatureField field;
  field.exclusion_radius = default_exclusion_radius(h, opts.exclusion_radius_factor);
  field.angles = h.backend() == Backend::Axisymmetric
                   ? (opts.angles == 0 ? default_angles(h) : opts.angles)
                   : 0;
  field.zbar.resize(n);
  field.zlow.resize(n);
  field.witness_bar.resize(n);
  field.witness_low.resize(n);
  field.kappa_max.resize(n);
  field.kappa_min.resize(n);

  const AngleTable table(std::max<std::size_t>(field.angles, 1));
  parallel_for(n, [&](std::size_t i) {
    const Extremes e = h.backend() == Backend::PlaneCurve
                         ? search_curve(h, i, field.exclusion_radius)
                         : search_axisym(h, i, field.exclusion_radius, table);
    field.zbar[i] = e.high.value;
    field.witness_bar[i] = e.high.witness;
    field.zlow[i] = e.low.value;
    field.witness_low[i] = e.low.witness;
    field.kappa_max[i] = h.sample(i).kappa.max();
    field.kappa_min[i] = h.sample(i).kappa.min();
  });
  return field;
}

NoncollapseAnalysis analyze_trajectory(const FlowTrajectory& traj, const SpeedFunction& f,
                                       const AnalyzerOptions& opts)
{
  NoncollapseAnalysis out;
  for (const auto& snap : traj.snapshots) {
    const auto& h = snap.surface;
    std::vector<double> speed(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
      speed[i] = f.value(h.sample(i).kappa);
    const auto [lo, hi] = std::minmax_element(speed.begin(), speed.end());
    if (!(*lo > 0.0))
      throw NonPositiveSpeed("speed is not positive at t = " + std::to_string(snap.t));

    SphereCurvatureField field = sphere_curvature_field(h, opts);
    SeriesRow row;
    row.t = snap.t;
    row.min_F = *lo;
    row.max_F = *hi;
    row.sup_ratio = -std::numeric_limits<double>::infinity();
    row.inf_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.size(); ++i) {
      row.sup_ratio = std::max(row.sup_ratio, field.zbar[i] / speed[i]);
      row.inf_ratio = std::min(row.inf_ratio, field.zlow[i] / speed[i]);
    }
    if (!out.series.rows.empty()) {
      const SeriesRow& prev = out.series.rows.back();
      row.defect_sup = row.sup_ratio - prev.sup_ratio;
      row.defect_inf = prev.inf_ratio - row.inf_ratio;
    }
    out.series.rows.push_back(row);
    out.fields.push_back(std::move(field));
    out.speeds.push_back(std::move(speed));
  }

  auto& rows = out.series.rows;
  if (rows.size() >= 2) {
    out.series.defect_sup = -std::numeric_limits<double>::infinity();
    out.series.defect_inf = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < rows.size(); ++k) {
      out.series.defect_sup = std::max(out.series.defect_sup, rows[k].defect_sup);
      out.series.defect_inf = std::max(out.series.defect_inf, rows[k].defect_inf);
    }
  }
  return out;
}

SeriesRecord ratio_series(const FlowTrajectory& traj, const SpeedFunction& f,
                          double exclusion_radius_factor, std::size_t angles)
{
  return analyze_trajectory(traj, f, {exclusion_radius_factor, angles}).series;
}

double tangency_residual(const DiscreteHypersurface& h, std::size_t i, const Witness& witness,
                         std::size_t angles)
{
  if (witness.is_diagonal())
    throw ValidationError("tangency residual needs a grid witness");
  const SurfaceSample& x = h.sample(i);
  const SurfaceSample& y = h.sample(witness.node);

  if (h.backend() == Backend::PlaneCurve) {
    const Vec2 diff = x.position - y.position;
    const double d = diff.norm();
    const double z = chordal_Z(x, y.position);
    const Vec2 v = x.normal - d * z * (diff / d);
    return std::abs(y.tangent.dot(v));
  }

  const std::size_t m = angles == 0 ? default_angles(h) : angles;
  const double phi = 2.0 * kPi * static_cast<double>(witness.angle) / static_cast<double>(m);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const Vec3 px(x.position.x(), x.position.y(), 0.0);
  const Vec3 nu(x.normal.x(), x.normal.y(), 0.0);
  const Vec3 py = lift(y.position, c, s);
  const Vec3 diff = px - py;
  const double d = diff.norm();
  const double z = chordal_Z(x, py);
  const Vec3 v = nu - d * z * (diff / d);
  const Vec3 along_profile = lift(y.tangent, c, s).normalized();
  const Vec3 around_axis(0.0, -s, c);
  double res = std::abs(along_profile.dot(v));
  if (y.position.y() > 0.0)
    res = std::max(res, std::abs(around_axis.dot(v)));
  return res;
}

double circumradius(const DiscreteHypersurface& h)
{
  const auto nodes = h.nodes();
  if (h.backend() == Backend::PlaneCurve)
    return minimal_enclosing_circle({nodes.begin(), nodes.end()}).radius;

  // The smallest ball around a surface of revolution is centered on the axis.
  double lo = nodes[0].x();
  double hi = nodes[0].x();
  for (const auto& p : nodes) {
    lo = std::min(lo, p.x());
    hi = std::max(hi, p.x());
  }
  auto reach = [&](double cx) {
    double r2 = 0.0;
    for (const auto& p : nodes)
      r2 = std::max(r2, (p.x() - cx) * (p.x() - cx) + p.y() * p.y());
    return std::sqrt(r2);
  };
  return -golden_maximize([&](double cx) { return -reach(cx); }, lo, hi);
}

double inradius(const DiscreteHypersurface& h)
{
  const auto nodes = h.nodes();
  Vec2 lo = nodes[0];
  Vec2 hi = nodes[0];
  for (const auto& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  if (h.backend() == Backend::PlaneCurve) {
    // Signed distance to the boundary of a convex region is concave, so
    // nested golden-section searches find the incenter.
    auto best_over_y = [&](double cx) {
      return golden_maximize(
        [&](double cy) { return signed_polygon_distance(Vec2(cx, cy), nodes, false); }, lo.y(), hi.y());
    };
    return golden_maximize(best_over_y, lo.x(), hi.x());
  }

  if (h.topology() != Topology::SphereLike)
    throw NonConvexInput("inradius on the axis needs a sphere-like profile");
  // Closing the profile along the axis gives the meridian section's upper half;
  // by symmetry the distance from an axis point to it is the distance to the
  // full section.
  return golden_maximize([&](double cx) { return signed_polygon_distance(Vec2(cx, 0.0), nodes, true); },
                         lo.x(), hi.x());
}

double circum_inradius_ratio(const DiscreteHypersurface& h)
{
  for (const auto& s : h.samples())
    if (!(s.kappa.min() > 0.0))
      throw NonConvexInput("circumradius/inradius ratio needs all principal curvatures positive");
  return circumradius(h) / inradius(h);
}

} // namespace ncflow
