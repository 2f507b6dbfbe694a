#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace ncflow {

/// Principal curvatures of a plane curve (n = 1) or a surface (n = 2).
class PrincipalCurvatures
{
public:
  PrincipalCurvatures() = default;
  PrincipalCurvatures(std::initializer_list<double> values);
  explicit PrincipalCurvatures(std::span<const double> values);

  std::size_t size() const { return size_; }
  double operator[](std::size_t i) const { return k_[i]; }
  double& operator[](std::size_t i) { return k_[i]; }
  std::span<const double> values() const { return {k_.data(), size_}; }

  double max() const;
  double min() const;

  PrincipalCurvatures scaled(double lambda) const;

private:
  std::array<double, 2> k_{0.0, 0.0};
  std::size_t size_ = 0;
};

enum class ConeKind
{
  PositiveCone,
  AllOfRn,
};

struct ConeSpec
{
  ConeKind kind = ConeKind::PositiveCone;

  /// Exact membership: strict positivity for the positive cone, no margin.
  bool contains(const PrincipalCurvatures& k) const;
};

enum class SpeedKind
{
  Sum,
  EuclideanNorm,
  PowerMean,
};

enum class ConvexityClass
{
  Concave,
  Convex,
  Both,
  Neither,
};

std::string to_string(ConvexityClass c);

struct SpeedEvaluation
{
  double value = 0.0;
  std::array<double, 2> gradient{0.0, 0.0};
  std::size_t size = 0;

  std::span<const double> grad() const { return {gradient.data(), size}; }
};

/// Symmetric, degree-one homogeneous curvature speed F(kappa).
///
/// Sum is the mean curvature H, EuclideanNorm is |A|, and PowerMean(p) is
/// (sum kappa_i^p / n)^(1/p); PowerMean(-1) is the harmonic mean. Instances are
/// immutable and may be evaluated concurrently.
class SpeedFunction
{
public:
  static SpeedFunction sum(ConeKind cone = ConeKind::AllOfRn);
  static SpeedFunction euclidean_norm(ConeKind cone = ConeKind::PositiveCone);
  static SpeedFunction power_mean(double p);

  /// Parses "sum", "norm" or "pmean:<p>". Throws ParseError naming the token.
  static SpeedFunction parse(std::string_view text);

  SpeedKind kind() const { return kind_; }
  double exponent() const { return p_; }
  const ConeSpec& cone() const { return cone_; }
  std::string name() const;

  bool is_concave() const;
  bool is_convex() const;

  /// F(kappa). Throws ConeViolation outside the cone.
  double value(const PrincipalCurvatures& k) const;
  /// Value and analytic gradient dF/dkappa_i. Throws ConeViolation outside the
  /// cone and where the gradient does not exist.
  SpeedEvaluation evaluate(const PrincipalCurvatures& k) const;

private:
  SpeedFunction(SpeedKind kind, double p, ConeKind cone)
    : kind_(kind), p_(p), cone_{cone}
  {
  }

  void require_in_cone(const PrincipalCurvatures& k) const;

  SpeedKind kind_;
  double p_;
  ConeSpec cone_;
};

double eval_speed(const SpeedFunction& f, const PrincipalCurvatures& k);
std::array<double, 2> eval_gradient(const SpeedFunction& f, const PrincipalCurvatures& k);

struct HomogeneityResidual
{
  double scaling = 0.0; ///< |F(lambda k) - lambda F(k)|
  double euler = 0.0;   ///< |sum g_i k_i - F(k)|
};

HomogeneityResidual check_euler_homogeneity(const SpeedFunction& f,
                                            const PrincipalCurvatures& k, double lambda);

/// dF_A(B) - F(B) with A and B in a common principal frame. Non-negative for
/// concave F, non-positive for convex F.
double support_inequality_residual(const SpeedFunction& f, const PrincipalCurvatures& a,
                                   const PrincipalCurvatures& b);

bool check_monotonicity(const SpeedFunction& f, const PrincipalCurvatures& k);

/// Midpoint-sampling certificate of concavity/convexity on two-dimensional
/// curvature pairs. Deterministic given the seed.
ConvexityClass classify_convexity(const SpeedFunction& f, int samples, std::uint64_t seed);

struct SpeedCertificate
{
  double homogeneity = 0.0;     ///< max |F(lk) - l F(k)| / F(k), l in {0.5, 2, 7}
  double euler = 0.0;           ///< max |g . k - F(k)| / F(k)
  double gradient_fd = 0.0;     ///< max relative gap to central differences
  double min_gradient = 0.0;    ///< smallest gradient component seen
  double support_min = 0.0;     ///< smallest support_inequality_residual
  double support_max = 0.0;     ///< largest support_inequality_residual
  ConvexityClass convexity = ConvexityClass::Neither;
  int samples = 0;
};

/// Random sweep of two-dimensional curvatures with entries in [0.1, 10]
/// collecting the homogeneity, Euler, gradient and support-inequality
/// residuals. Deterministic given the seed.
SpeedCertificate certify_speed(const SpeedFunction& f, int samples, std::uint64_t seed);

} // namespace ncflow
