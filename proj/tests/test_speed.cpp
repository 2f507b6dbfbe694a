#include "ncflow/errors.hpp"
#include "ncflow/speed.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ncflow;

namespace {

std::vector<SpeedFunction> builtins()
{
  return {SpeedFunction::sum(), SpeedFunction::euclidean_norm(), SpeedFunction::power_mean(-1.0),
          SpeedFunction::power_mean(0.5), SpeedFunction::power_mean(1.0),
          SpeedFunction::power_mean(2.0), SpeedFunction::power_mean(3.0)};
}

// Central differences on the value alone.
std::array<double, 2> fd_gradient(const SpeedFunction& f, const PrincipalCurvatures& k)
{
  std::array<double, 2> g{};
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double h = 1e-6 * std::abs(k[i]);
    PrincipalCurvatures up = k, down = k;
    up[i] += h;
    down[i] -= h;
    g[i] = (f.value(up) - f.value(down)) / (2.0 * h);
  }
  return g;
}

} // namespace

TEST(SpeedValue, HandValues)
{
  EXPECT_DOUBLE_EQ(eval_speed(SpeedFunction::sum(), {1.0, 2.0}), 3.0);
  EXPECT_DOUBLE_EQ(eval_speed(SpeedFunction::euclidean_norm(), {3.0, 4.0}), 5.0);
  EXPECT_NEAR(eval_speed(SpeedFunction::power_mean(-1.0), {1.0, 2.0}), 4.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(eval_speed(SpeedFunction::sum(), {0.7}), 0.7);
  EXPECT_NEAR(eval_speed(SpeedFunction::power_mean(2.0), {1.0, 7.0}), 5.0, 1e-14);
}

TEST(SpeedValue, ConeViolationOutsidePositiveCone)
{
  EXPECT_THROW(eval_speed(SpeedFunction::power_mean(-1.0), {1.0, -0.5}), ConeViolation);
  EXPECT_THROW(eval_speed(SpeedFunction::euclidean_norm(), {0.0, 1.0}), ConeViolation);
  EXPECT_NO_THROW(eval_speed(SpeedFunction::sum(), {-5.0, 1.0}));
}

TEST(SpeedValue, RejectsWrongLengthAndNonFinite)
{
  const double three[] = {1.0, 2.0, 3.0};
  EXPECT_ANY_THROW(PrincipalCurvatures(std::span<const double>(three)));
  EXPECT_ANY_THROW(eval_speed(SpeedFunction::sum(), {1.0, std::nan("")}));
}

TEST(SpeedGradient, HandValues)
{
  const auto gs = eval_gradient(SpeedFunction::sum(), {-3.0, 8.0});
  EXPECT_DOUBLE_EQ(gs[0], 1.0);
  EXPECT_DOUBLE_EQ(gs[1], 1.0);
  const auto gh = eval_gradient(SpeedFunction::power_mean(-1.0), {1.0, 1.0});
  EXPECT_NEAR(gh[0], 0.5, 1e-15);
  EXPECT_NEAR(gh[1], 0.5, 1e-15);
}

TEST(SpeedGradient, NormMatchesFiniteDifferences)
{
  const auto f = SpeedFunction::euclidean_norm();
  const auto g = eval_gradient(f, {3.0, 4.0});
  const auto fd = fd_gradient(f, {3.0, 4.0});
  EXPECT_NEAR(g[0], 0.6, 1e-12);
  EXPECT_NEAR(g[1], 0.8, 1e-12);
  EXPECT_NEAR(fd[0], 0.6, 1e-8);
  EXPECT_NEAR(fd[1], 0.8, 1e-8);
}

TEST(SpeedHomogeneity, HandCases)
{
  const auto s = check_euler_homogeneity(SpeedFunction::sum(), {1.0, 2.0}, 3.0);
  EXPECT_EQ(s.scaling, 0.0);
  EXPECT_EQ(s.euler, 0.0);
  const auto h = check_euler_homogeneity(SpeedFunction::power_mean(-1.0), {1.0, 2.0}, 2.0);
  EXPECT_LE(h.scaling, 1e-12);
  EXPECT_LE(h.euler, 1e-12);
  EXPECT_NEAR(eval_speed(SpeedFunction::power_mean(-1.0), {2.0, 4.0}), 8.0 / 3.0, 1e-14);
  const auto n = check_euler_homogeneity(SpeedFunction::euclidean_norm(), {3.0, 4.0}, 0.5);
  EXPECT_LE(n.scaling, 1e-12);
  EXPECT_LE(n.euler, 1e-12);
}

TEST(SpeedSupport, HandCases)
{
  EXPECT_EQ(support_inequality_residual(SpeedFunction::sum(), {0.3, 9.0}, {-2.0, 5.0}), 0.0);
  EXPECT_NEAR(support_inequality_residual(SpeedFunction::power_mean(-1.0), {1.0, 1.0}, {1.0, 2.0}),
              1.0 / 6.0, 1e-14);
  EXPECT_NEAR(support_inequality_residual(SpeedFunction::euclidean_norm(), {2.0, 1.0}, {1.0, 2.0}),
              4.0 / std::sqrt(5.0) - std::sqrt(5.0), 1e-14);
}

TEST(SpeedMonotonicity, HandCases)
{
  EXPECT_TRUE(check_monotonicity(SpeedFunction::sum(), {-5.0, 1.0}));
  EXPECT_TRUE(check_monotonicity(SpeedFunction::power_mean(2.0), {1.0, 3.0}));
  EXPECT_FALSE(check_monotonicity(SpeedFunction::euclidean_norm(ConeKind::AllOfRn), {-1.0, 2.0}));
}

TEST(SpeedConvexity, Classification)
{
  EXPECT_EQ(classify_convexity(SpeedFunction::sum(), 1000, 1), ConvexityClass::Both);
  EXPECT_EQ(classify_convexity(SpeedFunction::power_mean(-1.0), 1000, 1), ConvexityClass::Concave);
  EXPECT_EQ(classify_convexity(SpeedFunction::euclidean_norm(), 1000, 1), ConvexityClass::Convex);
  EXPECT_EQ(classify_convexity(SpeedFunction::power_mean(3.0), 1000, 1), ConvexityClass::Convex);
  EXPECT_EQ(classify_convexity(SpeedFunction::power_mean(0.5), 1000, 1), ConvexityClass::Concave);
  EXPECT_THROW(classify_convexity(SpeedFunction::sum(), 10, 1), ValidationError);
}

TEST(SpeedParse, Selections)
{
  EXPECT_EQ(SpeedFunction::parse("sum").kind(), SpeedKind::Sum);
  EXPECT_EQ(SpeedFunction::parse("norm").kind(), SpeedKind::EuclideanNorm);
  const auto p = SpeedFunction::parse("pmean:-1");
  EXPECT_EQ(p.kind(), SpeedKind::PowerMean);
  EXPECT_EQ(p.exponent(), -1.0);
  EXPECT_EQ(SpeedFunction::parse(p.name()).exponent(), -1.0);
  try {
    SpeedFunction::parse("pmean:abc");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
  EXPECT_THROW(SpeedFunction::parse("mean"), ParseError);
  EXPECT_THROW(SpeedFunction::parse("pmean:0"), ParseError);
}

// Random sweeps over the positive cone, entries in [0.1, 10].
class SpeedSweep : public ::testing::TestWithParam<int>
{
};

TEST_P(SpeedSweep, HomogeneityEulerGradientSymmetry)
{
  const auto f = builtins()[static_cast<std::size_t>(GetParam())];
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int s = 0; s < 1000; ++s) {
    const PrincipalCurvatures k{u(rng), u(rng)};
    const double fk = f.value(k);
    for (double lambda : {0.5, 2.0, 7.0}) {
      const auto r = check_euler_homogeneity(f, k, lambda);
      ASSERT_LE(r.scaling, 1e-10 * fk);
      ASSERT_LE(r.euler, 1e-10 * fk);
    }
    const auto g = eval_gradient(f, k);
    const auto fd = fd_gradient(f, k);
    for (int i = 0; i < 2; ++i) {
      ASSERT_GT(g[i], 0.0);
      // a tiny partial next to a large one is limited by the large one's roundoff
      ASSERT_NEAR(g[i], fd[i], 1e-6 * (std::abs(g[0]) + std::abs(g[1])));
    }
    ASSERT_EQ(f.value(k), f.value({k[1], k[0]}));
  }
}

TEST_P(SpeedSweep, SupportInequalitySign)
{
  const auto f = builtins()[static_cast<std::size_t>(GetParam())];
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int s = 0; s < 1000; ++s) {
    const PrincipalCurvatures a{u(rng), u(rng)};
    const PrincipalCurvatures b{u(rng), u(rng)};
    const double r = support_inequality_residual(f, a, b);
    if (f.is_concave())
      ASSERT_GE(r, -1e-10);
    if (f.is_convex())
      ASSERT_LE(r, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Builtins, SpeedSweep, ::testing::Range(0, 7));

TEST(SpeedCertificate, BuiltinsPass)
{
  for (const auto& f : builtins()) {
    const auto c = certify_speed(f, 1000, 3);
    EXPECT_LE(c.homogeneity, 1e-10) << f.name();
    EXPECT_LE(c.euler, 1e-10) << f.name();
    EXPECT_LE(c.gradient_fd, 1e-6) << f.name();
    EXPECT_GT(c.min_gradient, 0.0) << f.name();
    if (f.is_concave())
      EXPECT_GE(c.support_min, -1e-10) << f.name();
    if (f.is_convex())
      EXPECT_LE(c.support_max, 1e-10) << f.name();
  }
}

TEST(SpeedCertificate, Deterministic)
{
  const auto a = certify_speed(SpeedFunction::euclidean_norm(), 500, 11);
  const auto b = certify_speed(SpeedFunction::euclidean_norm(), 500, 11);
  EXPECT_EQ(a.homogeneity, b.homogeneity);
  EXPECT_EQ(a.support_max, b.support_max);
  EXPECT_EQ(a.gradient_fd, b.gradient_fd);
}
