#pragma once

#include "ncflow/geometry.hpp"
#include "ncflow/speed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncflow {

struct FlowConfig
{
  SpeedFunction speed = SpeedFunction::sum();
  double dt_safety = 0.2;
  double t_end = 0.0;
  int resample_every = 10;
  /// Defaults to 1e3 / initial diameter when unset.
  std::optional<double> kappa_cap;
  int snapshot_every = 1;
  /// Run the O(N^2) self-intersection test on every recorded snapshot.
  bool check_embedding = true;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

enum class Termination
{
  ReachedTEnd,
  CurvatureCap,
  ConeExit,
  SelfIntersection,
  Instability,
};

std::string to_string(Termination t);

struct Snapshot
{
  double t = 0.0;
  std::size_t step = 0;
  /// A resampling event happened after the previous snapshot was recorded, so
  /// nodes of the two snapshots are not material images of each other.
  bool resampled_since_previous = false;
  DiscreteHypersurface surface;
};

struct FlowTrajectory
{
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::ReachedTEnd;
  std::string detail;
  std::size_t steps = 0;
};

/// Explicit-Euler stability bound safety * h_min^2 / (2 max_i,s dF/dkappa_i).
double cfl_dt(const DiscreteHypersurface& h, const SpeedFunction& f, double safety);

/// One forward-Euler step of dX/dt = -F nu; every node moves along its own
/// normal, so nodes are material points of the flow.
DiscreteHypersurface step(const DiscreteHypersurface& h, const SpeedFunction& f, double dt);

/// Largest |kappa_i| over all samples.
double max_abs_curvature(const DiscreteHypersurface& h);

/// Evolves h0 until t_end or a stopping condition. The returned trajectory
/// always holds at least the initial snapshot.
FlowTrajectory run(const DiscreteHypersurface& h0, const FlowConfig& cfg);

} // namespace ncflow
