#include "ncflow/flow.hpp"

#include "ncflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ncflow {

void FlowConfig::validate() const
{
  if (!(dt_safety > 0.0 && dt_safety <= 1.0))
    throw ValidationError("flow.dt_safety must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw ValidationError("flow.t_end must be positive");
  if (resample_every < 1)
    throw ValidationError("flow.resample_every must be >= 1");
  if (snapshot_every < 1)
    throw ValidationError("flow.snapshot_every must be >= 1");
  if (kappa_cap && !(*kappa_cap > 0.0))
    throw ValidationError("flow.kappa_cap must be positive");
}

std::string to_string(Termination t)
{
  switch (t) {
  case Termination::ReachedTEnd: return "ReachedTEnd";
  case Termination::CurvatureCap: return "CurvatureCap";
  case Termination::ConeExit: return "ConeExit";
  case Termination::SelfIntersection: return "SelfIntersection";
  case Termination::Instability: return "Instability";
  }
  return "?";
}

double cfl_dt(const DiscreteHypersurface& h, const SpeedFunction& f, double safety)
{
  double gmax = 0.0;
  for (const auto& s : h.samples())
    for (double g : f.evaluate(s.kappa).grad())
      gmax = std::max(gmax, g);
  if (!(gmax > 0.0))
    throw ConeViolation("speed gradient vanishes; no parabolic time step");
  const double hmin = h.min_spacing();
  return safety * hmin * hmin / (2.0 * gmax);
}

DiscreteHypersurface step(const DiscreteHypersurface& h, const SpeedFunction& f, double dt)
{
  std::vector<Vec2> next(h.size());
  const auto samples = h.samples();
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double speed = f.value(samples[i].kappa);
    next[i] = samples[i].position - dt * speed * samples[i].normal;
    if (!std::isfinite(next[i].x()) || !std::isfinite(next[i].y()))
      throw Instability("non-finite node after step");
  }
  return h.with_nodes(std::move(next));
}

double max_abs_curvature(const DiscreteHypersurface& h)
{
  double m = 0.0;
  for (const auto& s : h.samples())
    for (double k : s.kappa.values())
      m = std::max(m, std::abs(k));
  return m;
}

FlowTrajectory run(const DiscreteHypersurface& h0, const FlowConfig& cfg)
{
  cfg.validate();
  const double cap = cfg.kappa_cap.value_or(1e3 / h0.diameter());

  FlowTrajectory traj;
  traj.snapshots.push_back({0.0, 0, false, h0});

  DiscreteHypersurface h = h0;
  double t = 0.0;
  std::size_t steps = 0;
  bool resampled = false;
  const double t_tol = 1e-14 * cfg.t_end;

  auto stop = [&](Termination why, std::string detail) {
    traj.termination = why;
    traj.detail = std::move(detail);
    traj.steps = steps;
    return traj;
  };

  while (t < cfg.t_end - t_tol) {
    try {
      double dt = cfl_dt(h, cfg.speed, cfg.dt_safety);
      if (t + dt > cfg.t_end)
        dt = cfg.t_end - t;
      h = step(h, cfg.speed, dt);
      t += dt;
      ++steps;
      if (steps % static_cast<std::size_t>(cfg.resample_every) == 0) {
        h = resample_arclength(h);
        resampled = true;
      }
    } catch (const ConeViolation& e) {
      return stop(Termination::ConeExit, e.what());
    } catch (const Error& e) {
      return stop(Termination::Instability, e.what());
    }

    if (max_abs_curvature(h) > cap)
      return stop(Termination::CurvatureCap, "curvature exceeded kappa_cap");

    const bool last = !(t < cfg.t_end - t_tol);
    if (last || steps % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
      if (cfg.check_embedding && self_intersection_check(h))
        return stop(Termination::SelfIntersection, "generating polyline self-intersects");
      traj.snapshots.push_back({t, steps, resampled, h});
      resampled = false;
    }
  }
  return stop(Termination::ReachedTEnd, "");
}

} // namespace ncflow
