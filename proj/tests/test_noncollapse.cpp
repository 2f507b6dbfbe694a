#include "ncflow/errors.hpp"
#include "ncflow/flow.hpp"
#include "ncflow/generators.hpp"
#include "ncflow/noncollapse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ncflow;
using std::numbers::pi;

namespace {

std::size_t nearest_node(const DiscreteHypersurface& h, const Vec2& p)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < h.size(); ++i)
    if ((h.nodes()[i] - p).norm() < (h.nodes()[best] - p).norm())
      best = i;
  return best;
}

// Plain all-pairs search in the plane with the same exclusion rule.
std::pair<double, double> brute_force_curve(const DiscreteHypersurface& h, std::size_t i, double excl)
{
  const auto& x = h.sample(i);
  double hi = x.kappa[0], lo = x.kappa[0];
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h.profile_distance(i, j) <= excl)
      continue;
    const Vec2 d = x.position - h.nodes()[j];
    const double z = 2.0 * d.dot(x.normal) / d.squaredNorm();
    hi = std::max(hi, z);
    lo = std::min(lo, z);
  }
  return {hi, lo};
}

// Surface of revolution as a 3D point cloud: every node at every angle.
std::pair<double, double> brute_force_revolution(const DiscreteHypersurface& h, std::size_t i,
                                                 double excl, std::size_t m)
{
  const auto& x = h.sample(i);
  double hi = x.kappa.max(), lo = x.kappa.min();
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const double phi = 2.0 * pi * static_cast<double>(k) / static_cast<double>(m);
      const double wrapped = std::min(phi, 2.0 * pi - phi);
      const double rbar = 0.5 * (x.position.y() + h.nodes()[j].y());
      const double ds = h.profile_distance(i, j);
      if (std::hypot(ds, rbar * wrapped) <= excl)
        continue;
      const Vec3 y = h.point3(j, std::cos(phi), std::sin(phi));
      const double z = chordal_Z(x, y);
      hi = std::max(hi, z);
      lo = std::min(lo, z);
      if (h.nodes()[j].y() == 0.0)
        break;
    }
  }
  return {hi, lo};
}

FlowConfig config(SpeedFunction f, double t_end, int snapshot_every)
{
  FlowConfig cfg;
  cfg.speed = f;
  cfg.t_end = t_end;
  cfg.snapshot_every = snapshot_every;
  return cfg;
}

} // namespace

TEST(ChordalZ, HandValues)
{
  const auto c = gen::circle(1.0, 64);
  for (std::size_t j : {1u, 7u, 32u, 50u})
    EXPECT_NEAR(chordal_Z(c.sample(0), c.nodes()[j]), 1.0 / c.nodes()[0].norm(), 1e-14);

  SurfaceSample tip;
  tip.position = {2.0, 0.0};
  tip.normal = {1.0, 0.0};
  EXPECT_NEAR(chordal_Z(tip, Vec2(0.0, 1.0)), 0.8, 1e-15);

  SurfaceSample pole;
  pole.position = {0.0, 2.5};
  pole.normal = {0.0, 1.0};
  for (double phi : {0.3, 1.7, pi})
    EXPECT_NEAR(chordal_Z(pole, Vec3(2.5 * std::sin(1.1) * std::cos(phi), 2.5 * std::cos(1.1),
                                     2.5 * std::sin(1.1) * std::sin(phi))),
                0.4, 1e-14);
  EXPECT_THROW(chordal_Z(tip, Vec2(2.0, 0.0)), CoincidentPoints);
}

TEST(SphereCurvatures, CircleAndSphere)
{
  const auto c = gen::circle(1.0, 128);
  const auto fc = sphere_curvature_field(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(fc.zbar[i], 1.0, 1e-3);
    EXPECT_NEAR(fc.zlow[i], 1.0, 1e-3);
  }
  const auto s = gen::sphere(2.0, 128);
  const auto fs = sphere_curvature_field(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(fs.zbar[i], 0.5, 1e-3);
    EXPECT_NEAR(fs.zlow[i], 0.5, 1e-3);
  }
}

TEST(SphereCurvatures, EllipseOracles)
{
  const auto e = gen::ellipse(2.0, 1.0, 1024);
  const double excl = default_exclusion_radius(e, 3.0);
  const std::size_t tip = nearest_node(e, {2.0, 0.0});
  const std::size_t flat = nearest_node(e, {0.0, 1.0});

  const auto at_tip = interior_sphere_curvature(e, tip, excl);
  EXPECT_NEAR(at_tip.value, 2.0, 1e-2);
  EXPECT_TRUE(at_tip.witness.is_diagonal());

  const auto at_flat = interior_sphere_curvature(e, flat, excl);
  EXPECT_NEAR(at_flat.value, 1.0, 1e-2);
  ASSERT_FALSE(at_flat.witness.is_diagonal());
  EXPECT_LE((e.nodes()[at_flat.witness.node] - Vec2(0.0, -1.0)).norm(), 0.05);

  EXPECT_NEAR(exterior_sphere_curvature(e, flat, excl).value, 0.25, 1e-2);

  for (std::size_t i : {tip, flat, std::size_t{100}, std::size_t{333}}) {
    const auto [hi, lo] = brute_force_curve(e, i, excl);
    EXPECT_EQ(interior_sphere_curvature(e, i, excl).value, hi);
    EXPECT_EQ(exterior_sphere_curvature(e, i, excl).value, lo);
  }
}

TEST(SphereCurvatures, RefinementConverges)
{
  const auto a = gen::ellipse(2.0, 1.0, 512);
  const auto b = gen::ellipse(2.0, 1.0, 1024);
  for (const Vec2& p : {Vec2(2.0, 0.0), Vec2(0.0, 1.0), Vec2(std::sqrt(2.0), std::sqrt(0.5))}) {
    const std::size_t ia = nearest_node(a, p), ib = nearest_node(b, p);
    const double za = interior_sphere_curvature(a, ia, default_exclusion_radius(a, 3.0)).value;
    const double zb = interior_sphere_curvature(b, ib, default_exclusion_radius(b, 3.0)).value;
    EXPECT_NEAR(za, zb, 1e-2);
  }
}

TEST(SphereCurvatures, RevolutionSearchMatchesPointCloud)
{
  for (const auto& h : {gen::ellipsoid(1.5, 1.0, 48), gen::dumbbell(1.0, 0.4, 0.5, 64),
                        gen::torus(3.0, 1.0, 40)}) {
    const std::size_t m = 24;
    const double excl = default_exclusion_radius(h, 3.0);
    for (std::size_t i = 0; i < h.size(); i += 5) {
      const auto [hi, lo] = brute_force_revolution(h, i, excl, m);
      EXPECT_NEAR(interior_sphere_curvature(h, i, excl, m).value, hi, 1e-12);
      EXPECT_NEAR(exterior_sphere_curvature(h, i, excl, m).value, lo, 1e-12);
    }
  }
}

// For fixed nodes Z depends on the angle through cos(phi) as a linear
// fraction, so its extremes over the circle of y sit at phi = 0 or pi.
TEST(SphereCurvatures, ExtremesLieInTheMeridianPlane)
{
  const auto h = gen::dumbbell(1.0, 0.4, 0.5, 80);
  for (std::size_t i = 1; i + 1 < h.size(); i += 7) {
    for (std::size_t j = 1; j + 1 < h.size(); j += 5) {
      if (j == i)
        continue;
      const double z0 = chordal_Z(h.sample(i), h.point3(j, 1.0, 0.0));
      const double zpi = chordal_Z(h.sample(i), h.point3(j, -1.0, 0.0));
      for (int k = 1; k < 360; ++k) {
        const double phi = pi * k / 180.0;
        const double z = chordal_Z(h.sample(i), h.point3(j, std::cos(phi), std::sin(phi)));
        EXPECT_LE(z, std::max(z0, zpi) + 1e-12);
        EXPECT_GE(z, std::min(z0, zpi) - 1e-12);
      }
    }
  }
}

TEST(SphereCurvatures, StructuralBounds)
{
  for (const auto& h : {gen::ellipse(2.0, 1.0, 200), gen::ellipsoid(1.5, 1.0, 100),
                        gen::torus(3.0, 1.0, 100), gen::dumbbell(1.0, 0.3, 0.5, 120)}) {
    const auto f = sphere_curvature_field(h, {3.0, 32});
    for (std::size_t i = 0; i < h.size(); ++i) {
      EXPECT_GE(f.zbar[i], f.kappa_max[i]);
      EXPECT_LE(f.zlow[i], f.kappa_min[i]);
      EXPECT_GE(f.zbar[i], f.zlow[i]);
    }
  }
}

TEST(SphereCurvatures, ScaleEquivariance)
{
  for (const auto& h : {gen::ellipse(2.0, 1.0, 128), gen::ellipsoid(1.5, 1.0, 64)}) {
    for (double lambda : {0.25, 3.0}) {
      const auto a = sphere_curvature_field(h, {3.0, 16});
      const auto b = sphere_curvature_field(h.scaled(lambda), {3.0, 16});
      for (std::size_t i = 0; i < h.size(); ++i) {
        EXPECT_NEAR(b.zbar[i] * lambda, a.zbar[i], 1e-10 * std::abs(a.zbar[i]));
        EXPECT_NEAR(b.zlow[i] * lambda, a.zlow[i], 1e-10 * std::abs(a.zlow[i]));
      }
    }
  }
}

TEST(SphereCurvatures, ExclusionRadiusValidation)
{
  const auto c = gen::circle(1.0, 64);
  EXPECT_THROW(interior_sphere_curvature(c, 3, 0.5 * c.min_spacing()), ValidationError);
  EXPECT_THROW(interior_sphere_curvature(c, 64, 1.0), ValidationError);
  EXPECT_DOUBLE_EQ(default_exclusion_radius(c, 1.0), 2.0 * c.max_spacing());
  EXPECT_DOUBLE_EQ(default_exclusion_radius(c, 5.0), 5.0 * c.max_spacing());
}

TEST(WitnessLabel, Formats)
{
  EXPECT_EQ(Witness::diagonal().label(Backend::PlaneCurve), "diag");
  EXPECT_EQ((Witness{Witness::Kind::Grid, 12, 0}).label(Backend::PlaneCurve), "12");
  EXPECT_EQ((Witness{Witness::Kind::Grid, 12, 5}).label(Backend::Axisymmetric), "12:5");
}

TEST(Tangency, Cases)
{
  const auto c = gen::circle(1.0, 128);
  for (std::size_t j : {10u, 64u, 100u})
    EXPECT_LE(tangency_residual(c, 0, {Witness::Kind::Grid, j, 0}), 1e-10);

  const auto e = gen::ellipse(2.0, 1.0, 512);
  const std::size_t flat = nearest_node(e, {0.0, 1.0});
  const auto w = interior_sphere_curvature(e, flat, default_exclusion_radius(e, 3.0)).witness;
  EXPECT_LE(tangency_residual(e, flat, w), 2.0 * e.max_spacing());
  const std::size_t off = nearest_node(e, {std::sqrt(2.0), -std::sqrt(0.5)});
  EXPECT_GE(tangency_residual(e, flat, {Witness::Kind::Grid, off, 0}), 0.1);
  EXPECT_THROW(tangency_residual(e, flat, Witness::diagonal()), ValidationError);

  const auto s = gen::sphere(1.0, 64);
  EXPECT_LE(tangency_residual(s, 20, {Witness::Kind::Grid, 40, 7}, 32), 1e-10);
}

TEST(RatioSeries, ShrinkingSphereIsSelfSimilar)
{
  for (const auto& f : {SpeedFunction::sum(), SpeedFunction::euclidean_norm(), SpeedFunction::power_mean(-1.0)}) {
    const auto traj = run(gen::sphere(1.0, 256), config(f, 0.05 / f.value({1.0, 1.0}), 500));
    const auto rec = ratio_series(traj, f, 3.0, 8);
    ASSERT_GE(rec.rows.size(), 3u);
    const double exact = 1.0 / f.value({1.0, 1.0});
    for (const auto& r : rec.rows) {
      EXPECT_NEAR(r.sup_ratio, exact, 1e-4) << f.name();
      EXPECT_NEAR(r.inf_ratio, exact, 1e-4) << f.name();
    }
    // first interval carries a small start-up transient, see ratio tolerance
    EXPECT_LE(rec.defect_sup, 1e-5);
    EXPECT_LE(rec.defect_inf, 1e-5);
  }
}

TEST(RatioSeries, DefectsAreForwardDifferences)
{
  const auto traj = run(gen::ellipse(2.0, 1.0, 64), config(SpeedFunction::sum(), 0.05, 5));
  const auto rec = ratio_series(traj, SpeedFunction::sum());
  ASSERT_GE(rec.rows.size(), 3u);
  double worst = -1e300;
  for (std::size_t k = 1; k < rec.rows.size(); ++k) {
    EXPECT_DOUBLE_EQ(rec.rows[k].defect_sup, rec.rows[k].sup_ratio - rec.rows[k - 1].sup_ratio);
    worst = std::max(worst, rec.rows[k].defect_sup);
  }
  EXPECT_EQ(rec.defect_sup, worst);
  FlowTrajectory single;
  single.snapshots.push_back(traj.snapshots.front());
  EXPECT_EQ(ratio_series(single, SpeedFunction::sum()).defect_sup, 0.0);
}

TEST(RatioSeries, NonPositiveSpeedIsRejected)
{
  std::vector<Vec2> flower;
  for (int k = 0; k < 256; ++k) {
    const double t = 2.0 * pi * k / 256.0;
    const double r = 1.0 + 0.3 * std::cos(3.0 * t);
    flower.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  FlowTrajectory traj;
  traj.snapshots.push_back({0.0, 0, false, DiscreteHypersurface::plane_curve(flower)});
  EXPECT_THROW(analyze_trajectory(traj, SpeedFunction::sum()), NonPositiveSpeed);
}

TEST(CircumInradius, ExactBodies)
{
  EXPECT_NEAR(circum_inradius_ratio(gen::sphere(1.0, 256)), 1.0, 1e-3);
  EXPECT_NEAR(circum_inradius_ratio(gen::circle(2.0, 256)), 1.0, 1e-3);
  const auto e = gen::ellipse(2.0, 1.0, 256);
  EXPECT_NEAR(circumradius(e), 2.0, 1e-3);
  EXPECT_NEAR(inradius(e), 1.0, 2e-3);
  EXPECT_NEAR(circum_inradius_ratio(e), 2.0, 2e-2);
  EXPECT_NEAR(circum_inradius_ratio(gen::ellipsoid(1.5, 1.0, 256)), 1.5, 2e-2);
  EXPECT_NEAR(circumradius(gen::sphere(1.0, 128, 4.0)), 1.0, 1e-9);
  EXPECT_THROW(circum_inradius_ratio(gen::dumbbell(1.0, 0.3, 0.5, 128)), NonConvexInput);
}
