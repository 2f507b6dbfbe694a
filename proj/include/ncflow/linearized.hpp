#pragma once

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"
#include "ncflow/speed.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ncflow {

/// Which known solution of the linearized flow a scalar field represents.
struct FieldLabel
{
  enum class Kind
  {
    Speed,           ///< f = F
    NormalComponent, ///< f = <nu, e>
    ScalingSolution, ///< f = <X - origin, nu> + 2 t F
  };
  Kind kind = Kind::Speed;
  /// Coordinate axis e for NormalComponent; only the rotation axis (0) is
  /// admissible on surfaces of revolution.
  int axis = 0;
  Vec2 origin = Vec2::Zero();

  static FieldLabel speed() { return {Kind::Speed, 0, Vec2::Zero()}; }
  static FieldLabel normal_component(int axis) { return {Kind::NormalComponent, axis, Vec2::Zero()}; }
  static FieldLabel scaling_solution(Vec2 origin = Vec2::Zero())
  {
    return {Kind::ScalingSolution, 0, origin};
  }
  /// Parses "speed", "normal", "normal:<axis>" or "scaling".
  static FieldLabel parse(const std::string& text);
  std::string name() const;
};

struct ScalarField
{
  std::vector<double> values;
  FieldLabel label;
};

/// Samples the labelled field on h at time t.
ScalarField evaluate_field(const DiscreteHypersurface& h, const SpeedFunction& f,
                           const FieldLabel& label, double t);

/// Linearized-flow operator in the principal frame:
///   curves:  g f_ss + g kappa^2 f
///   surfaces of revolution:  g1 f_ss + g2 (r_s / r) f_s + (g1 k1^2 + g2 k2^2) f
/// with (g1, g2) the speed gradient at the local curvatures. At poles the
/// rotational term takes its smooth limit g2 f_ss.
ScalarField lin_operator(const DiscreteHypersurface& h, const SpeedFunction& f,
                         const ScalarField& field);

/// Forward difference of the field between snapshots k and k + 1. Throws
/// ResampleBoundary if the nodes were redistributed in between.
ScalarField flow_time_derivative(const FlowTrajectory& traj, const SpeedFunction& f,
                                 const FieldLabel& label, std::size_t k);

/// Samples whose stencils are regular: all but the poles of sphere-like
/// profiles.
std::vector<std::size_t> interior_samples(const DiscreteHypersurface& h);

struct ResidualWindow
{
  double t_begin = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  std::size_t max_pairs = 8;
};

/// Snapshot indices k in the window whose pair (k, k+1) has no resampling.
std::vector<std::size_t> window_pairs(const FlowTrajectory& traj, const ResidualWindow& window);

/// max over window pairs and interior samples of |df/dt - L f|.
double solution_residual(const FlowTrajectory& traj, const SpeedFunction& f,
                         const FieldLabel& label, const ResidualWindow& window = {});

struct ResidualRow
{
  std::size_t n = 0;
  double dt = 0.0;
  double residual = 0.0;
};

struct ResidualReport
{
  std::vector<ResidualRow> rows;
  std::string label;
  std::string speed;
  double order = 0.0;        ///< least-squares slope of log residual against log(1/N)
  double fit_residual = 0.0; ///< RMS deviation of the log-log fit
};

using SurfaceGenerator = std::function<DiscreteHypersurface(std::size_t n)>;

/// Runs the flow at each resolution (time step set by the stability bound, so
/// dt scales like 1/N^2) and fits the decay order of the residual over the
/// second half of [0, cfg.t_end].
ResidualReport convergence_order(const SurfaceGenerator& generator, const FlowConfig& cfg,
                                 const FieldLabel& label, const std::vector<std::size_t>& resolutions);

/// Same, for several labels sharing one trajectory per resolution.
std::vector<ResidualReport> convergence_orders(const SurfaceGenerator& generator,
                                               const FlowConfig& cfg,
                                               const std::vector<FieldLabel>& labels,
                                               const std::vector<std::size_t>& resolutions);

/// Least-squares slope of log(y) against log(1/x) and its RMS misfit.
std::pair<double, double> fit_order(const std::vector<double>& x, const std::vector<double>& y);

} // namespace ncflow
