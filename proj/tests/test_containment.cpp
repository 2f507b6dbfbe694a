#include "ncflow/containment.hpp"
#include "ncflow/errors.hpp"
#include "ncflow/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ncflow;

namespace {

FlowConfig config(SpeedFunction f, double t_end, int snapshot_every)
{
  FlowConfig cfg;
  cfg.speed = f;
  cfg.t_end = t_end;
  cfg.snapshot_every = snapshot_every;
  return cfg;
}

} // namespace

TEST(MinDistance, HandCases)
{
  const auto a = gen::circle(1.0, 256);
  const auto b = gen::circle(1.0, 256, {4.0, 0.0});
  const auto d = min_distance(a, b);
  EXPECT_NEAR(d.distance, 2.0, 1e-12);
  EXPECT_NEAR((d.point_a - Vec2(1.0, 0.0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((d.point_b - Vec2(3.0, 0.0)).norm(), 0.0, 1e-12);

  EXPECT_NEAR(min_distance(gen::circle(1.0, 256), gen::circle(3.0, 256)).distance, 2.0, 1e-12);
  EXPECT_NEAR(min_distance(gen::sphere(1.0, 128), gen::sphere(3.0, 128)).distance, 2.0, 1e-12);
  EXPECT_THROW(min_distance(a, gen::sphere(1.0, 64)), ValidationError);
}

TEST(MinDistance, SymmetricAndTranslationInvariant)
{
  const auto a = gen::ellipse(2.0, 1.0, 200);
  const auto b = gen::circle(0.7, 150, {3.5, 1.2});
  EXPECT_EQ(min_distance(a, b).distance, min_distance(b, a).distance);
  const Vec2 shift(-0.75, 0.5);
  EXPECT_NEAR(min_distance(a.translated(shift), b.translated(shift)).distance,
              min_distance(a, b).distance, 1e-12);
}

TEST(Orientation, Checks)
{
  const auto inner = gen::sphere(1.0, 64);
  const auto outer = gen::sphere(3.0, 64);
  EXPECT_NO_THROW(check_orientation(inner, outer, OrientationCase::Nested));
  EXPECT_THROW(check_orientation(outer, inner, OrientationCase::Nested), ValidationError);
  EXPECT_THROW(check_orientation(inner, outer, OrientationCase::Disjoint), ValidationError);
  EXPECT_NO_THROW(check_orientation(gen::sphere(1.0, 64, -2.0), gen::sphere(1.0, 64, 2.0),
                                    OrientationCase::Disjoint));
}

TEST(RunPair, ConcentricCirclesFollowExactLaw)
{
  const auto [traj, series] = run_pair(gen::circle(1.0, 256), gen::circle(3.0, 256),
                                       config(SpeedFunction::sum(), 0.4, 500), OrientationCase::Nested);
  ASSERT_EQ(traj.termination, Termination::ReachedTEnd) << traj.detail;
  const double d0 = series.rows.front().closest.distance;
  EXPECT_LE(series.max_decrease, 1e-3 * d0);
  for (const auto& r : series.rows)
    EXPECT_NEAR(r.closest.distance, std::sqrt(9.0 - 2.0 * r.t) - std::sqrt(1.0 - 2.0 * r.t), 5e-3);
  EXPECT_GT(series.rows.back().closest.distance, d0);
  EXPECT_FALSE(series.advisory);
}

TEST(RunPair, DisjointSpheresFollowExactLaw)
{
  const auto [traj, series] =
    run_pair(gen::sphere(1.0, 128, -2.0), gen::sphere(1.0, 128, 2.0),
             config(SpeedFunction::sum(), 0.15, 300), OrientationCase::Disjoint);
  ASSERT_EQ(traj.termination, Termination::ReachedTEnd);
  for (const auto& r : series.rows)
    EXPECT_NEAR(r.closest.distance / (4.0 - 2.0 * std::sqrt(1.0 - 4.0 * r.t)), 1.0, 5e-3);
  EXPECT_LE(series.max_decrease, 1e-3 * 2.0);
  for (std::size_t k = 1; k < series.rows.size(); ++k)
    EXPECT_DOUBLE_EQ(series.rows[k].defect,
                     series.rows[k - 1].closest.distance - series.rows[k].closest.distance);
}

TEST(RunPair, TranslationLeavesSeriesUnchanged)
{
  const auto cfg = config(SpeedFunction::sum(), 0.02, 50);
  const auto [ta, sa] = run_pair(gen::circle(1.0, 64), gen::circle(0.5, 64, {2.5, 0.0}), cfg,
                                 OrientationCase::Disjoint);
  const Vec2 shift(3.0, -2.0);
  const auto [tb, sb] = run_pair(gen::circle(1.0, 64).translated(shift),
                                 gen::circle(0.5, 64, {2.5, 0.0}).translated(shift), cfg,
                                 OrientationCase::Disjoint);
  ASSERT_EQ(sa.rows.size(), sb.rows.size());
  for (std::size_t k = 0; k < sa.rows.size(); ++k) {
    EXPECT_NEAR(sa.rows[k].t, sb.rows[k].t, 1e-12);
    EXPECT_NEAR(sa.rows[k].closest.distance, sb.rows[k].closest.distance, 1e-12);
  }
}

TEST(RunPair, Preconditions)
{
  const auto cfg = config(SpeedFunction::sum(), 0.01, 10);
  EXPECT_THROW(run_pair(gen::sphere(1.0, 64, -1.0), gen::sphere(1.0, 64, 1.0), cfg,
                        OrientationCase::Disjoint),
               InitialContact);
  EXPECT_THROW(run_pair(gen::sphere(3.0, 64), gen::sphere(1.0, 64), cfg, OrientationCase::Nested),
               ValidationError);
  EXPECT_THROW(run_pair(gen::circle(1.0, 64), gen::sphere(1.0, 64, 5.0), cfg,
                        OrientationCase::Disjoint),
               ValidationError);
}

TEST(RunPair, AdvisoryForNonConvexDisjointBodies)
{
  const auto bell = gen::dumbbell(1.0, 0.4, 0.5, 128);
  const auto ball = gen::sphere(0.5, 64, 5.0);
  const auto [t1, s1] = run_pair(bell, ball, config(SpeedFunction::power_mean(-1.0), 1e-3, 10),
                                 OrientationCase::Disjoint);
  (void)t1;
  EXPECT_TRUE(s1.advisory);
  const auto [t2, s2] =
    run_pair(bell, ball, config(SpeedFunction::sum(), 1e-3, 10), OrientationCase::Disjoint);
  (void)t2;
  EXPECT_FALSE(s2.advisory);
}
