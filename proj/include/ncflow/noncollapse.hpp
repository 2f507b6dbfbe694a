#pragma once

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"
#include "ncflow/speed.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ncflow {

/// The pair point that realizes an interior/exterior sphere curvature: a
/// grid node (with rotation-angle index for surfaces of revolution) or the
/// diagonal, where the principal curvature bound is attained.
struct Witness
{
  enum class Kind
  {
    Grid,
    Diagonal,
  };
  Kind kind = Kind::Diagonal;
  std::size_t node = 0;
  std::size_t angle = 0;

  static Witness diagonal() { return {}; }
  bool is_diagonal() const { return kind == Kind::Diagonal; }
  /// "diag", "<j>" for curves, "<j>:<m>" for surfaces of revolution.
  std::string label(Backend backend) const;
};

struct SphereCurvature
{
  double value = 0.0;
  Witness witness;
};

struct AnalyzerOptions
{
  double exclusion_radius_factor = 3.0;
  /// Rotation angles M of the pair search on surfaces of revolution; 0 means N/2.
  std::size_t angles = 0;
};

/// Per-sample interior (Zbar) and exterior (Zlow) sphere curvatures.
struct SphereCurvatureField
{
  std::vector<double> zbar;
  std::vector<double> zlow;
  std::vector<Witness> witness_bar;
  std::vector<Witness> witness_low;
  std::vector<double> kappa_max;
  std::vector<double> kappa_min;
  double exclusion_radius = 0.0;
  std::size_t angles = 0;
};

/// 2 <X(x) - X(y), nu(x)> / |X(x) - X(y)|^2 for a point in the plane of x.
double chordal_Z(const SurfaceSample& x, const Vec2& y);
/// Same for a surface of revolution with x placed at rotation angle 0.
double chordal_Z(const SurfaceSample& x, const Vec3& y);

/// max(2 h, factor h) with h the largest node spacing.
double default_exclusion_radius(const DiscreteHypersurface& h, double factor);
std::size_t default_angles(const DiscreteHypersurface& h);

SphereCurvature interior_sphere_curvature(const DiscreteHypersurface& h, std::size_t i,
                                          double exclusion_radius, std::size_t angles = 0);
SphereCurvature exterior_sphere_curvature(const DiscreteHypersurface& h, std::size_t i,
                                          double exclusion_radius, std::size_t angles = 0);

/// Both fields at every sample, parallel over samples.
SphereCurvatureField sphere_curvature_field(const DiscreteHypersurface& h,
                                            const AnalyzerOptions& opts = {});

struct SeriesRow
{
  double t = 0.0;
  double sup_ratio = 0.0; ///< max_i Zbar / F
  double inf_ratio = 0.0; ///< min_i Zlow / F
  double min_F = 0.0;
  double max_F = 0.0;
  double defect_sup = 0.0; ///< sup_ratio increase since the previous row
  double defect_inf = 0.0; ///< inf_ratio decrease since the previous row
};

struct SeriesRecord
{
  std::vector<SeriesRow> rows;
  /// Largest forward increase of sup_ratio / decrease of inf_ratio between
  /// consecutive snapshots; zero when fewer than two rows exist.
  double defect_sup = 0.0;
  double defect_inf = 0.0;
};

struct NoncollapseAnalysis
{
  SeriesRecord series;
  std::vector<SphereCurvatureField> fields;
  std::vector<std::vector<double>> speeds;
};

/// Ratio series plus the per-snapshot fields. Throws NonPositiveSpeed if F <= 0
/// on any sample of any snapshot.
NoncollapseAnalysis analyze_trajectory(const FlowTrajectory& traj, const SpeedFunction& f,
                                       const AnalyzerOptions& opts = {});
SeriesRecord ratio_series(const FlowTrajectory& traj, const SpeedFunction& f,
                          double exclusion_radius_factor = 3.0, std::size_t angles = 0);

/// Deviation of the touching sphere from tangency at the witness:
/// max over unit tangents tau at y of |<tau, nu(x) - d Z w>|, w = (X(x)-X(y))/d.
double tangency_residual(const DiscreteHypersurface& h, std::size_t i, const Witness& witness,
                         std::size_t angles = 0);

/// Radius of the smallest ball containing all samples (center on the axis for
/// surfaces of revolution).
double circumradius(const DiscreteHypersurface& h);
/// Radius of the largest ball inside the body (center on the axis for
/// surfaces of revolution), measured to the generating polyline.
double inradius(const DiscreteHypersurface& h);
/// circumradius / inradius. Throws NonConvexInput unless every kappa > 0.
double circum_inradius_ratio(const DiscreteHypersurface& h);

} // namespace ncflow
