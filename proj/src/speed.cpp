#include "ncflow/speed.hpp"

#include "ncflow/errors.hpp"

#include <algorithm>
#include <limits>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace ncflow {

PrincipalCurvatures::PrincipalCurvatures(std::initializer_list<double> values)
  : PrincipalCurvatures(std::span<const double>(values.begin(), values.size()))
{
}

PrincipalCurvatures::PrincipalCurvatures(std::span<const double> values)
{
  if (values.empty() || values.size() > 2)
    throw InvalidGeometry("principal curvatures must have 1 or 2 entries");
  size_ = values.size();
  for (std::size_t i = 0; i < size_; ++i) {
    if (!std::isfinite(values[i]))
      throw InvalidGeometry("non-finite principal curvature");
    k_[i] = values[i];
  }
}

double PrincipalCurvatures::max() const
{
  return size_ == 1 ? k_[0] : std::max(k_[0], k_[1]);
}

double PrincipalCurvatures::min() const
{
  return size_ == 1 ? k_[0] : std::min(k_[0], k_[1]);
}

PrincipalCurvatures PrincipalCurvatures::scaled(double lambda) const
{
  PrincipalCurvatures out = *this;
  for (std::size_t i = 0; i < size_; ++i)
    out.k_[i] *= lambda;
  return out;
}

bool ConeSpec::contains(const PrincipalCurvatures& k) const
{
  if (kind == ConeKind::AllOfRn)
    return true;
  for (double v : k.values())
    if (!(v > 0.0))
      return false;
  return true;
}

std::string to_string(ConvexityClass c)
{
  switch (c) {
  case ConvexityClass::Concave: return "Concave";
  case ConvexityClass::Convex: return "Convex";
  case ConvexityClass::Both: return "Both";
  case ConvexityClass::Neither: return "Neither";
  }
  return "?";
}

SpeedFunction SpeedFunction::sum(ConeKind cone)
{
  return {SpeedKind::Sum, 1.0, cone};
}

SpeedFunction SpeedFunction::euclidean_norm(ConeKind cone)
{
  return {SpeedKind::EuclideanNorm, 2.0, cone};
}

SpeedFunction SpeedFunction::power_mean(double p)
{
  if (!std::isfinite(p) || p == 0.0)
    throw ValidationError("power mean exponent must be finite and non-zero");
  return {SpeedKind::PowerMean, p, ConeKind::PositiveCone};
}

SpeedFunction SpeedFunction::parse(std::string_view text)
{
  if (text == "sum")
    return sum();
  if (text == "norm")
    return euclidean_norm();
  constexpr std::string_view prefix = "pmean:";
  if (text.substr(0, prefix.size()) == prefix) {
    std::string_view token = text.substr(prefix.size());
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), p);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
      throw ParseError("invalid power mean exponent '" + std::string(token) + "'");
    if (!std::isfinite(p) || p == 0.0)
      throw ParseError("power mean exponent must be finite and non-zero, got '" +
                       std::string(token) + "'");
    return power_mean(p);
  }
  throw ParseError("unknown speed '" + std::string(text) + "'");
}

std::string SpeedFunction::name() const
{
  switch (kind_) {
  case SpeedKind::Sum: return "sum";
  case SpeedKind::EuclideanNorm: return "norm";
  case SpeedKind::PowerMean: {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "pmean:" << p_;
    return os.str();
  }
  }
  return "?";
}

bool SpeedFunction::is_concave() const
{
  switch (kind_) {
  case SpeedKind::Sum: return true;
  case SpeedKind::EuclideanNorm: return false;
  case SpeedKind::PowerMean: return p_ <= 1.0;
  }
  return false;
}

bool SpeedFunction::is_convex() const
{
  switch (kind_) {
  case SpeedKind::Sum: return true;
  case SpeedKind::EuclideanNorm: return true;
  case SpeedKind::PowerMean: return p_ >= 1.0;
  }
  return false;
}

void SpeedFunction::require_in_cone(const PrincipalCurvatures& k) const
{
  if (k.size() == 0)
    throw ConeViolation("empty curvature vector");
  if (!cone_.contains(k)) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "curvatures (";
    for (std::size_t i = 0; i < k.size(); ++i)
      os << (i ? ", " : "") << k[i];
    os << ") outside the cone of " << name();
    throw ConeViolation(os.str());
  }
}

double SpeedFunction::value(const PrincipalCurvatures& k) const
{
  require_in_cone(k);
  const std::size_t n = k.size();
  switch (kind_) {
  case SpeedKind::Sum: {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += k[i];
    return s;
  }
  case SpeedKind::EuclideanNorm: {
    return n == 1 ? std::abs(k[0]) : std::hypot(k[0], k[1]);
  }
  case SpeedKind::PowerMean: {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += std::pow(k[i], p_);
    return std::pow(s / static_cast<double>(n), 1.0 / p_);
  }
  }
  return 0.0;
}

SpeedEvaluation SpeedFunction::evaluate(const PrincipalCurvatures& k) const
{
  SpeedEvaluation out;
  out.value = value(k);
  out.size = k.size();
  const std::size_t n = k.size();
  switch (kind_) {
  case SpeedKind::Sum:
    for (std::size_t i = 0; i < n; ++i)
      out.gradient[i] = 1.0;
    break;
  case SpeedKind::EuclideanNorm:
    if (out.value == 0.0)
      throw ConeViolation("norm speed has no gradient at the origin");
    for (std::size_t i = 0; i < n; ++i)
      out.gradient[i] = k[i] / out.value;
    break;
  case SpeedKind::PowerMean:
    // dF/dk_i = (1/n) (k_i / F)^(p-1)
    for (std::size_t i = 0; i < n; ++i)
      out.gradient[i] = std::pow(k[i] / out.value, p_ - 1.0) / static_cast<double>(n);
    break;
  }
  return out;
}

double eval_speed(const SpeedFunction& f, const PrincipalCurvatures& k)
{
  return f.value(k);
}

std::array<double, 2> eval_gradient(const SpeedFunction& f, const PrincipalCurvatures& k)
{
  return f.evaluate(k).gradient;
}

HomogeneityResidual check_euler_homogeneity(const SpeedFunction& f,
                                            const PrincipalCurvatures& k, double lambda)
{
  if (!(lambda > 0.0))
    throw ValidationError("homogeneity check requires lambda > 0");
  const SpeedEvaluation e = f.evaluate(k);
  const double scaled = f.value(k.scaled(lambda));
  double contraction = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    contraction += e.gradient[i] * k[i];
  return {std::abs(scaled - lambda * e.value), std::abs(contraction - e.value)};
}

double support_inequality_residual(const SpeedFunction& f, const PrincipalCurvatures& a,
                                   const PrincipalCurvatures& b)
{
  if (a.size() != b.size())
    throw ValidationError("support inequality needs curvatures of equal dimension");
  const SpeedEvaluation ea = f.evaluate(a);
  const double fb = f.value(b);
  double contraction = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    contraction += ea.gradient[i] * b[i];
  return contraction - fb;
}

bool check_monotonicity(const SpeedFunction& f, const PrincipalCurvatures& k)
{
  const SpeedEvaluation e = f.evaluate(k);
  for (double g : e.grad())
    if (!(g > 0.0))
      return false;
  return true;
}

ConvexityClass classify_convexity(const SpeedFunction& f, int samples, std::uint64_t seed)
{
  if (samples < 100)
    throw ValidationError("convexity classification needs at least 100 samples");

  std::mt19937_64 rng(seed);
  const bool positive = f.cone().kind == ConeKind::PositiveCone;
  std::uniform_real_distribution<double> dist(positive ? 0.1 : -10.0, 10.0);

  bool concave_ok = true;
  bool convex_ok = true;
  int drawn = 0;
  while (drawn < samples) {
    PrincipalCurvatures a{dist(rng), dist(rng)};
    PrincipalCurvatures b{dist(rng), dist(rng)};
    PrincipalCurvatures mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    // Resample draws that sit near the non-smooth origin of |A|.
    if (std::hypot(a[0], a[1]) < 1e-3 || std::hypot(b[0], b[1]) < 1e-3 ||
        std::hypot(mid[0], mid[1]) < 1e-3)
      continue;
    if (!f.cone().contains(a) || !f.cone().contains(b))
      continue;
    ++drawn;

    const double fa = f.value(a);
    const double fb = f.value(b);
    const double gap = f.value(mid) - 0.5 * (fa + fb);
    const double tol = 1e-10 * std::max(1.0, std::abs(fa) + std::abs(fb));
    if (gap < -tol)
      concave_ok = false;
    if (gap > tol)
      convex_ok = false;
  }

  if (concave_ok && convex_ok)
    return ConvexityClass::Both;
  if (concave_ok)
    return ConvexityClass::Concave;
  if (convex_ok)
    return ConvexityClass::Convex;
  return ConvexityClass::Neither;
}

SpeedCertificate certify_speed(const SpeedFunction& f, int samples, std::uint64_t seed)
{
  if (samples < 1)
    throw ValidationError("certificate needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.1, 10.0);

  SpeedCertificate c;
  c.samples = samples;
  c.min_gradient = std::numeric_limits<double>::infinity();
  c.support_min = std::numeric_limits<double>::infinity();
  c.support_max = -std::numeric_limits<double>::infinity();

  for (int s = 0; s < samples; ++s) {
    const PrincipalCurvatures k{dist(rng), dist(rng)};
    const SpeedEvaluation e = f.evaluate(k);
    for (double lambda : {0.5, 2.0, 7.0}) {
      const HomogeneityResidual r = check_euler_homogeneity(f, k, lambda);
      c.homogeneity = std::max(c.homogeneity, r.scaling / e.value);
      c.euler = std::max(c.euler, r.euler / e.value);
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
      c.min_gradient = std::min(c.min_gradient, e.gradient[i]);
      const double step = 1e-5 * std::hypot(k[0], k[1]);
      PrincipalCurvatures up = k;
      PrincipalCurvatures down = k;
      up[i] += step;
      down[i] -= step;
      const double fd = (f.value(up) - f.value(down)) / (2.0 * step);
      c.gradient_fd = std::max(c.gradient_fd, std::abs(fd - e.gradient[i]) / std::abs(e.gradient[i]));
    }
    const PrincipalCurvatures b{dist(rng), dist(rng)};
    const double support = support_inequality_residual(f, k, b);
    c.support_min = std::min(c.support_min, support);
    c.support_max = std::max(c.support_max, support);
  }
  c.convexity = classify_convexity(f, std::max(samples, 100), seed);
  return c;
}

} // namespace ncflow
