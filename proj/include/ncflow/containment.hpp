#pragma once

#include "ncflow/flow.hpp"
#include "ncflow/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ncflow {

enum class OrientationCase
{
  Disjoint,
  Nested, ///< A strictly inside B, both normals outward
};

std::string to_string(OrientationCase c);

struct MinDistance
{
  double distance = 0.0;
  std::size_t node_a = 0;
  std::size_t node_b = 0;
  Vec2 point_a = Vec2::Zero(); ///< (x, y) or (x, r) at the common rotation angle
  Vec2 point_b = Vec2::Zero();
};

/// Brute-force minimum over all node pairs, lowest index pair on ties.
/// Surfaces of revolution must share the axis; the closest points then lie
/// at a common rotation angle, so the search runs over profile pairs.
MinDistance min_distance(const DiscreteHypersurface& a, const DiscreteHypersurface& b);

struct PairSnapshot
{
  double t = 0.0;
  DiscreteHypersurface a;
  DiscreteHypersurface b;
};

struct PairTrajectory
{
  std::vector<PairSnapshot> snapshots;
  OrientationCase orientation = OrientationCase::Disjoint;
  Termination termination = Termination::ReachedTEnd;
  std::string detail;
};

struct DistanceRow
{
  double t = 0.0;
  MinDistance closest;
  double defect = 0.0; ///< d_min decrease since the previous row
};

struct DistanceSeries
{
  std::vector<DistanceRow> rows;
  double max_decrease = 0.0;
  /// The orientation hypotheses of the containment principle are not
  /// guaranteed, so the monotonicity verdict is informational only.
  bool advisory = false;
};

/// Throws ValidationError when the orientation case does not hold at t = 0.
void check_orientation(const DiscreteHypersurface& a, const DiscreteHypersurface& b,
                       OrientationCase orientation);

/// Evolves both surfaces with a shared time step (the smaller of the two
/// stability bounds) and records d_min at every snapshot. Throws
/// InitialContact if the surfaces touch at t = 0.
std::pair<PairTrajectory, DistanceSeries> run_pair(const DiscreteHypersurface& a0,
                                                   const DiscreteHypersurface& b0,
                                                   const FlowConfig& cfg,
                                                   OrientationCase orientation);

} // namespace ncflow
