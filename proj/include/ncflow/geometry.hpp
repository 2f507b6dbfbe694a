#pragma once

#include "ncflow/speed.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ncflow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class Backend
{
  PlaneCurve,
  Axisymmetric,
};

enum class Topology
{
  Closed,     ///< plane curve, implicitly closed
  SphereLike, ///< profile with both endpoints on the axis r = 0
  TorusLike,  ///< closed profile with r > 0 everywhere
};

std::string to_string(Backend b);
std::string to_string(Topology t);

/// Local geometry at one node.
///
/// For the axisymmetric backend `position`, `normal` and `tangent` live in the
/// meridian half-plane (x, r); the surface point at rotation angle phi is
/// (x, r cos phi, r sin phi). Coordinate directions are principal directions,
/// so `kappa` is the diagonal of the second fundamental form: (kappa) for
/// curves, (kappa_profile, kappa_rotational) for surfaces of revolution.
struct SurfaceSample
{
  Vec2 position = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();
  PrincipalCurvatures kappa;
  double weight = 0.0; ///< ds for curves, 2 pi r ds for surfaces
};

/// A sampled closed plane curve or surface of revolution together with its
/// derived per-node geometry. Immutable; derived quantities are computed once
/// at construction.
class DiscreteHypersurface
{
public:
  static constexpr std::size_t kMinNodes = 16;
  static constexpr double kDegenerateSpacing = 1e-9;

  /// Counterclockwise orientation is enforced by reversing the node order
  /// when the outward-normal convention is violated.
  static DiscreteHypersurface plane_curve(std::vector<Vec2> points);
  static DiscreteHypersurface axisymmetric(std::vector<Vec2> profile, Topology topology);

  /// Same backend and topology with new node positions. No reorientation.
  DiscreteHypersurface with_nodes(std::vector<Vec2> nodes) const;
  DiscreteHypersurface translated(const Vec2& offset) const;
  DiscreteHypersurface scaled(double lambda) const;

  Backend backend() const { return backend_; }
  Topology topology() const { return topology_; }
  bool periodic() const { return topology_ != Topology::SphereLike; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t dimension() const { return backend_ == Backend::PlaneCurve ? 1 : 2; }

  std::span<const Vec2> nodes() const { return nodes_; }
  std::span<const SurfaceSample> samples() const { return samples_; }
  const SurfaceSample& sample(std::size_t i) const { return samples_[i]; }

  /// Number of segments of the generating polyline.
  std::size_t segment_count() const { return periodic() ? size() : size() - 1; }
  double segment_length(std::size_t k) const;
  double min_spacing() const;
  double max_spacing() const;
  /// Cumulative polyline length at each node, starting at 0 for node 0.
  const std::vector<double>& arclength() const { return arclength_; }
  double total_length() const { return total_length_; }
  /// Intrinsic distance between nodes i and j along the generating polyline.
  double profile_distance(std::size_t i, std::size_t j) const;
  /// Bounding-box diagonal of the embedded hypersurface.
  double diameter() const { return diameter_; }
  Vec2 centroid() const;

  /// Embedded point of node i at rotation angle phi (axisymmetric backend).
  Vec3 point3(std::size_t i, double cos_phi, double sin_phi) const;

private:
  DiscreteHypersurface(Backend backend, Topology topology, std::vector<Vec2> nodes);

  void validate();
  void compute_samples();
  bool needs_reversal() const;
  void reverse_orientation();

  Backend backend_;
  Topology topology_;
  std::vector<Vec2> nodes_;
  std::vector<SurfaceSample> samples_;
  std::vector<double> arclength_;
  double total_length_ = 0.0;
  double diameter_ = 0.0;
};

/// Per-node geometry of a plane curve by centered differences on the closed
/// index ring.
std::vector<SurfaceSample> curve_geometry(const DiscreteHypersurface& curve);
/// Per-node geometry of a surface-of-revolution profile.
std::vector<SurfaceSample> axisym_geometry(const DiscreteHypersurface& profile);

/// Redistributes nodes to equal spacing along an interpolating cubic spline:
/// periodic for closed curves and tori, mirrored across the axis for
/// sphere-like profiles so both poles stay on the axis. Node 0 is kept fixed.
DiscreteHypersurface resample_arclength(const DiscreteHypersurface& h);

/// True iff two non-adjacent segments of the generating polyline intersect.
bool self_intersection_check(const DiscreteHypersurface& h);

/// Symmetric Hausdorff distance between two generating polylines, measured
/// from the nodes of each to the segments of the other.
double polyline_hausdorff(const DiscreteHypersurface& a, const DiscreteHypersurface& b);

/// Distance from a point to segment [p, q].
double point_segment_distance(const Vec2& x, const Vec2& p, const Vec2& q);

} // namespace ncflow
