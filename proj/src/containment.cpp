#include "ncflow/containment.hpp"

#include "ncflow/errors.hpp"
#include "ncflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncflow {

namespace {

bool inside_polygon(const Vec2& p, std::span<const Vec2> poly)
{
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& a = poly[k];
    const Vec2& b = poly[(k + 1) % n];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xcross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < xcross)
        inside = !inside;
    }
  }
  return inside;
}

bool all_inside(const DiscreteHypersurface& inner, const DiscreteHypersurface& outer)
{
  for (const auto& p : inner.nodes())
    if (!inside_polygon(p, outer.nodes()))
      return false;
  return true;
}

bool any_inside(const DiscreteHypersurface& inner, const DiscreteHypersurface& outer)
{
  for (const auto& p : inner.nodes())
    if (inside_polygon(p, outer.nodes()))
      return true;
  return false;
}

} // namespace

std::string to_string(OrientationCase c)
{
  return c == OrientationCase::Nested ? "nested" : "disjoint";
}

MinDistance min_distance(const DiscreteHypersurface& a, const DiscreteHypersurface& b)
{
  if (a.backend() != b.backend())
    throw ValidationError("min_distance needs two surfaces of the same backend");
  const auto na = a.nodes();
  const auto nb = b.nodes();

  struct Best
  {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
  };
  std::vector<Best> per_a(na.size());
  parallel_for(na.size(), [&](std::size_t i) {
    Best best;
    for (std::size_t j = 0; j < nb.size(); ++j) {
      const double d2 = (na[i] - nb[j]).squaredNorm();
      if (d2 < best.d2)
        best = {d2, j};
    }
    per_a[i] = best;
  });

  std::size_t ia = 0;
  for (std::size_t i = 1; i < na.size(); ++i)
    if (per_a[i].d2 < per_a[ia].d2)
      ia = i;
  MinDistance out;
  out.node_a = ia;
  out.node_b = per_a[ia].j;
  out.point_a = na[out.node_a];
  out.point_b = nb[out.node_b];
  out.distance = (out.point_a - out.point_b).norm();
  return out;
}

void check_orientation(const DiscreteHypersurface& a, const DiscreteHypersurface& b,
                       OrientationCase orientation)
{
  if (orientation == OrientationCase::Nested) {
    if (!all_inside(a, b) || any_inside(b, a))
      throw ValidationError("case 'nested' requires surface A strictly inside surface B");
  } else {
    if (any_inside(a, b) || any_inside(b, a))
      throw ValidationError("case 'disjoint' requires neither surface to enclose the other");
  }
}

std::pair<PairTrajectory, DistanceSeries> run_pair(const DiscreteHypersurface& a0,
                                                   const DiscreteHypersurface& b0,
                                                   const FlowConfig& cfg,
                                                   OrientationCase orientation)
{
  cfg.validate();
  if (a0.backend() != b0.backend())
    throw ValidationError("containment pairs must share the geometry backend");

  const MinDistance d0 = min_distance(a0, b0);
  const double scale = std::max(a0.diameter(), b0.diameter());
  if (!(d0.distance > 1e-12 * scale))
    throw InitialContact("surfaces touch at t = 0");
  check_orientation(a0, b0, orientation);

  PairTrajectory traj;
  traj.orientation = orientation;
  DistanceSeries series;
  const bool convex = [&] {
    for (const auto* h : {&a0, &b0})
      for (const auto& s : h->samples())
        if (!(s.kappa.min() > 0.0))
          return false;
    return true;
  }();
  series.advisory = orientation == OrientationCase::Disjoint &&
                    cfg.speed.kind() != SpeedKind::Sum && !convex;

  const double cap = cfg.kappa_cap.value_or(1e3 / std::min(a0.diameter(), b0.diameter()));

  auto record = [&](double t, const DiscreteHypersurface& a, const DiscreteHypersurface& b) {
    DistanceRow row;
    row.t = t;
    row.closest = min_distance(a, b);
    if (!series.rows.empty())
      row.defect = series.rows.back().closest.distance - row.closest.distance;
    series.rows.push_back(row);
    traj.snapshots.push_back({t, a, b});
  };

  record(0.0, a0, b0);
  DiscreteHypersurface a = a0;
  DiscreteHypersurface b = b0;
  double t = 0.0;
  std::size_t steps = 0;
  const double t_tol = 1e-14 * cfg.t_end;

  auto finish = [&](Termination why, std::string detail) {
    traj.termination = why;
    traj.detail = std::move(detail);
    series.max_decrease = 0.0;
    if (series.rows.size() >= 2) {
      series.max_decrease = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < series.rows.size(); ++k)
        series.max_decrease = std::max(series.max_decrease, series.rows[k].defect);
    }
    return std::make_pair(std::move(traj), std::move(series));
  };

  while (t < cfg.t_end - t_tol) {
    try {
      double dt = std::min(cfl_dt(a, cfg.speed, cfg.dt_safety), cfl_dt(b, cfg.speed, cfg.dt_safety));
      if (t + dt > cfg.t_end)
        dt = cfg.t_end - t;
      a = step(a, cfg.speed, dt);
      b = step(b, cfg.speed, dt);
      t += dt;
      ++steps;
      if (steps % static_cast<std::size_t>(cfg.resample_every) == 0) {
        a = resample_arclength(a);
        b = resample_arclength(b);
      }
    } catch (const ConeViolation& e) {
      return finish(Termination::ConeExit, e.what());
    } catch (const Error& e) {
      return finish(Termination::Instability, e.what());
    }
    if (std::max(max_abs_curvature(a), max_abs_curvature(b)) > cap)
      return finish(Termination::CurvatureCap, "curvature exceeded kappa_cap");

    const bool last = !(t < cfg.t_end - t_tol);
    if (last || steps % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
      if (cfg.check_embedding && (self_intersection_check(a) || self_intersection_check(b)))
        return finish(Termination::SelfIntersection, "generating polyline self-intersects");
      record(t, a, b);
    }
  }
  return finish(Termination::ReachedTEnd, "");
}

} // namespace ncflow
