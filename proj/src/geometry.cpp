#include "ncflow/geometry.hpp"

#include "ncflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ncflow {

namespace {

double cross(const Vec2& a, const Vec2& b)
{
  return a.x() * b.y() - a.y() * b.x();
}

Vec2 mirror(const Vec2& p)
{
  return {p.x(), -p.y()};
}

/// Node i + offset on the index ring; sphere-like profiles continue across
/// each pole by reflection in the axis.
Vec2 ring_node(const DiscreteHypersurface& h, std::ptrdiff_t i)
{
  const auto n = static_cast<std::ptrdiff_t>(h.size());
  const auto nodes = h.nodes();
  if (h.periodic())
    return nodes[static_cast<std::size_t>(((i % n) + n) % n)];
  if (i < 0)
    return mirror(nodes[static_cast<std::size_t>(-i)]);
  if (i > n - 1)
    return mirror(nodes[static_cast<std::size_t>(2 * (n - 1) - i)]);
  return nodes[static_cast<std::size_t>(i)];
}

struct FrameAtNode
{
  Vec2 tangent;
  Vec2 normal;
  double curvature;
};

FrameAtNode centered_frame(const DiscreteHypersurface& h, std::size_t i)
{
  const auto ii = static_cast<std::ptrdiff_t>(i);
  const Vec2 prev = ring_node(h, ii - 1);
  const Vec2 next = ring_node(h, ii + 1);
  const Vec2 here = h.nodes()[i];
  const Vec2 d1 = 0.5 * (next - prev);
  const Vec2 d2 = next - 2.0 * here + prev;
  const double speed = d1.norm();
  FrameAtNode out;
  out.tangent = d1 / speed;
  out.normal = Vec2(out.tangent.y(), -out.tangent.x());
  out.curvature = cross(d1, d2) / (speed * speed * speed);
  return out;
}

/// Interpolating periodic cubic spline through closed 2D data, parametrized by
/// cumulative chord length.
class PeriodicSpline
{
public:
  explicit PeriodicSpline(std::span<const Vec2> points)
    : y_(points.begin(), points.end())
  {
    const std::size_t n = y_.size();
    knots_.resize(n + 1);
    knots_[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      knots_[k + 1] = knots_[k] + (y_[(k + 1) % n] - y_[k]).norm();

    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k)
      h[k] = knots_[k + 1] - knots_[k];

    // Cyclic tridiagonal system for the second derivatives.
    std::vector<double> sub(n), diag(n), sup(n);
    std::vector<Vec2> rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t km = (k + n - 1) % n;
      const std::size_t kp = (k + 1) % n;
      sub[k] = h[km];
      diag[k] = 2.0 * (h[km] + h[k]);
      sup[k] = h[k];
      rhs[k] = 6.0 * ((y_[kp] - y_[k]) / h[k] - (y_[k] - y_[km]) / h[km]);
    }
    second_ = solve_cyclic(sub, diag, sup, rhs);
  }

  double period() const { return knots_.back(); }

  Vec2 operator()(double u) const
  {
    const double len = period();
    u = std::fmod(u, len);
    if (u < 0.0)
      u += len;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - knots_.begin()) - 1));
    const std::size_t n = y_.size();
    if (k >= n)
      k = n - 1;
    const std::size_t kp = (k + 1) % n;
    const double h = knots_[k + 1] - knots_[k];
    const double s = u - knots_[k];
    const Vec2& m0 = second_[k];
    const Vec2& m1 = second_[kp];
    return y_[k] + s * ((y_[kp] - y_[k]) / h - h * (2.0 * m0 + m1) / 6.0) + (s * s / 2.0) * m0 +
           (s * s * s / (6.0 * h)) * (m1 - m0);
  }

private:
  // Sherman-Morrison reduction of the cyclic system to two tridiagonal solves.
  static std::vector<Vec2> solve_cyclic(const std::vector<double>& a, const std::vector<double>& b,
                                        const std::vector<double>& c, const std::vector<Vec2>& r)
  {
    const std::size_t n = b.size();
    const double alpha = c[n - 1]; // bottom-left corner
    const double beta = a[0];      // top-right corner
    const double gamma = -b[0];
    std::vector<double> bb(b);
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;

    auto thomas = [&](auto rhs) {
      using T = typename decltype(rhs)::value_type;
      std::vector<double> cp(n);
      std::vector<T> dp(n);
      cp[0] = c[0] / bb[0];
      dp[0] = rhs[0] / bb[0];
      for (std::size_t i = 1; i < n; ++i) {
        const double m = bb[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
      }
      std::vector<T> x(n);
      x[n - 1] = dp[n - 1];
      for (std::size_t i = n - 1; i-- > 0;)
        x[i] = dp[i] - cp[i] * x[i + 1];
      return x;
    };

    const std::vector<Vec2> x = thomas(r);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const std::vector<double> z = thomas(u);
    const double vz = z[0] + beta / gamma * z[n - 1];
    const Vec2 vx = x[0] + beta / gamma * x[n - 1];
    const Vec2 factor = vx / (1.0 + vz);
    std::vector<Vec2> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = x[i] - factor * z[i];
    return out;
  }

  std::vector<Vec2> y_;
  std::vector<double> knots_;
  std::vector<Vec2> second_;
};

/// `count` points on the closed spline with equal consecutive chords, the
/// first at parameter 0. Fixed-point iteration on the chord-length map.
std::vector<Vec2> equal_chord_points(const PeriodicSpline& spline, std::size_t count)
{
  const double len = spline.period();
  std::vector<double> u(count + 1);
  for (std::size_t k = 0; k <= count; ++k)
    u[k] = len * static_cast<double>(k) / static_cast<double>(count);

  std::vector<Vec2> pts(count);
  std::vector<double> cum(count + 1);
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t k = 0; k < count; ++k)
      pts[k] = spline(u[k]);
    cum[0] = 0.0;
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double c = (pts[(k + 1) % count] - pts[k]).norm();
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
      cum[k + 1] = cum[k] + c;
    }
    if (cmax - cmin <= 1e-14 * cmax)
      break;
    // New parameters: piecewise-linear inverse of the cumulative chord map.
    std::vector<double> next(count + 1);
    next[0] = 0.0;
    next[count] = len;
    std::size_t seg = 0;
    for (std::size_t k = 1; k < count; ++k) {
      const double target = cum[count] * static_cast<double>(k) / static_cast<double>(count);
      while (seg + 1 < count && cum[seg + 1] < target)
        ++seg;
      const double w = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
      next[k] = u[seg] + w * (u[seg + 1] - u[seg]);
    }
    u.swap(next);
  }
  return pts;
}

bool on_segment(const Vec2& p, const Vec2& q, const Vec2& r)
{
  return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
         std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
}

int orientation(const Vec2& p, const Vec2& q, const Vec2& r)
{
  const double v = cross(q - p, r - q);
  if (v > 0.0)
    return 1;
  if (v < 0.0)
    return -1;
  return 0;
}

bool segments_intersect(const Vec2& p1, const Vec2& q1, const Vec2& p2, const Vec2& q2)
{
  const int o1 = orientation(p1, q1, p2);
  const int o2 = orientation(p1, q1, q2);
  const int o3 = orientation(p2, q2, p1);
  const int o4 = orientation(p2, q2, q1);
  if (o1 != o2 && o3 != o4)
    return true;
  if (o1 == 0 && on_segment(p1, p2, q1))
    return true;
  if (o2 == 0 && on_segment(p1, q2, q1))
    return true;
  if (o3 == 0 && on_segment(p2, p1, q2))
    return true;
  if (o4 == 0 && on_segment(p2, q1, q2))
    return true;
  return false;
}

} // namespace

std::string to_string(Backend b)
{
  return b == Backend::PlaneCurve ? "curve" : "axisym";
}

std::string to_string(Topology t)
{
  switch (t) {
  case Topology::Closed: return "closed";
  case Topology::SphereLike: return "sphere";
  case Topology::TorusLike: return "torus";
  }
  return "?";
}

DiscreteHypersurface::DiscreteHypersurface(Backend backend, Topology topology,
                                           std::vector<Vec2> nodes)
  : backend_(backend), topology_(topology), nodes_(std::move(nodes))
{
  if (backend_ == Backend::PlaneCurve && topology_ != Topology::Closed)
    throw InvalidGeometry("plane curves must use the closed topology");
  if (backend_ == Backend::Axisymmetric && topology_ == Topology::Closed)
    throw InvalidGeometry("profiles must be sphere-like or torus-like");
}

DiscreteHypersurface DiscreteHypersurface::plane_curve(std::vector<Vec2> points)
{
  DiscreteHypersurface h(Backend::PlaneCurve, Topology::Closed, std::move(points));
  h.validate();
  if (h.needs_reversal())
    h.reverse_orientation();
  h.compute_samples();
  return h;
}

DiscreteHypersurface DiscreteHypersurface::axisymmetric(std::vector<Vec2> profile,
                                                        Topology topology)
{
  DiscreteHypersurface h(Backend::Axisymmetric, topology, std::move(profile));
  h.validate();
  if (h.needs_reversal())
    h.reverse_orientation();
  h.compute_samples();
  return h;
}

DiscreteHypersurface DiscreteHypersurface::with_nodes(std::vector<Vec2> nodes) const
{
  DiscreteHypersurface h(backend_, topology_, std::move(nodes));
  h.validate();
  h.compute_samples();
  return h;
}

DiscreteHypersurface DiscreteHypersurface::translated(const Vec2& offset) const
{
  if (backend_ == Backend::Axisymmetric && offset.y() != 0.0)
    throw InvalidGeometry("surfaces of revolution can only be translated along the axis");
  std::vector<Vec2> moved(nodes_);
  for (auto& p : moved)
    p += offset;
  return with_nodes(std::move(moved));
}

DiscreteHypersurface DiscreteHypersurface::scaled(double lambda) const
{
  if (!(lambda > 0.0))
    throw InvalidGeometry("scale factor must be positive");
  std::vector<Vec2> moved(nodes_);
  for (auto& p : moved)
    p *= lambda;
  return with_nodes(std::move(moved));
}

void DiscreteHypersurface::validate()
{
  const std::size_t n = nodes_.size();
  if (n < kMinNodes) {
    std::ostringstream os;
    os << "need at least " << kMinNodes << " nodes, got " << n;
    throw InvalidGeometry(os.str());
  }
  for (const auto& p : nodes_)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw Instability("non-finite node coordinate");

  Vec2 lo = nodes_[0];
  Vec2 hi = nodes_[0];
  for (const auto& p : nodes_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  if (backend_ == Backend::Axisymmetric) {
    const double rmax = hi.y();
    diameter_ = std::hypot(hi.x() - lo.x(), 2.0 * rmax);
  } else {
    diameter_ = (hi - lo).norm();
  }

  if (backend_ == Backend::Axisymmetric) {
    const double axis_tol = 1e-12 * diameter_;
    if (topology_ == Topology::SphereLike) {
      for (std::size_t end : {std::size_t{0}, n - 1}) {
        if (std::abs(nodes_[end].y()) > axis_tol)
          throw AxisViolation("sphere-like profile must start and end on the axis");
        nodes_[end].y() = 0.0;
      }
      for (std::size_t i = 1; i + 1 < n; ++i)
        if (!(nodes_[i].y() > 0.0)) {
          std::ostringstream os;
          os << "profile node " << i << " has r = " << nodes_[i].y() << " away from a pole";
          throw AxisViolation(os.str());
        }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (!(nodes_[i].y() > 0.0)) {
          std::ostringstream os;
          os << "torus-like profile node " << i << " has r = " << nodes_[i].y();
          throw AxisViolation(os.str());
        }
    }
  }

  const std::size_t segs = periodic() ? n : n - 1;
  arclength_.assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < segs; ++k) {
    const double len = (nodes_[(k + 1) % n] - nodes_[k]).norm();
    if (len < kDegenerateSpacing * diameter_) {
      std::ostringstream os;
      os << "nodes " << k << " and " << (k + 1) % n << " are " << len << " apart";
      throw DegenerateSpacing(os.str());
    }
    acc += len;
    if (k + 1 < n)
      arclength_[k + 1] = acc;
  }
  total_length_ = acc;
}

bool DiscreteHypersurface::needs_reversal() const
{
  // Shoelace area of the node polygon. Sphere-like profiles close along the
  // axis, so a positive area means the outward normal convention holds.
  double area = 0.0;
  const std::size_t n = nodes_.size();
  for (std::size_t k = 0; k < n; ++k)
    area += cross(nodes_[k], nodes_[(k + 1) % n]);
  return area < 0.0;
}

void DiscreteHypersurface::reverse_orientation()
{
  if (periodic())
    std::reverse(nodes_.begin() + 1, nodes_.end());
  else
    std::reverse(nodes_.begin(), nodes_.end());
  validate();
}

void DiscreteHypersurface::compute_samples()
{
  samples_ = backend_ == Backend::PlaneCurve ? curve_geometry(*this) : axisym_geometry(*this);
}

double DiscreteHypersurface::segment_length(std::size_t k) const
{
  return (nodes_[(k + 1) % nodes_.size()] - nodes_[k]).norm();
}

double DiscreteHypersurface::min_spacing() const
{
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < segment_count(); ++k)
    m = std::min(m, segment_length(k));
  return m;
}

double DiscreteHypersurface::max_spacing() const
{
  double m = 0.0;
  for (std::size_t k = 0; k < segment_count(); ++k)
    m = std::max(m, segment_length(k));
  return m;
}

double DiscreteHypersurface::profile_distance(std::size_t i, std::size_t j) const
{
  const double d = std::abs(arclength_[i] - arclength_[j]);
  return periodic() ? std::min(d, total_length_ - d) : d;
}

Vec2 DiscreteHypersurface::centroid() const
{
  Vec2 c = Vec2::Zero();
  for (const auto& p : nodes_)
    c += p;
  return c / static_cast<double>(nodes_.size());
}

Vec3 DiscreteHypersurface::point3(std::size_t i, double cos_phi, double sin_phi) const
{
  const Vec2& p = nodes_[i];
  return {p.x(), p.y() * cos_phi, p.y() * sin_phi};
}

std::vector<SurfaceSample> curve_geometry(const DiscreteHypersurface& curve)
{
  const std::size_t n = curve.size();
  std::vector<SurfaceSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FrameAtNode f = centered_frame(curve, i);
    SurfaceSample& s = out[i];
    s.position = curve.nodes()[i];
    s.tangent = f.tangent;
    s.normal = f.normal;
    s.kappa = PrincipalCurvatures{f.curvature};
    s.weight = 0.5 * (curve.segment_length((i + n - 1) % n) + curve.segment_length(i));
  }
  return out;
}

std::vector<SurfaceSample> axisym_geometry(const DiscreteHypersurface& profile)
{
  const std::size_t n = profile.size();
  const bool poles = profile.topology() == Topology::SphereLike;
  std::vector<SurfaceSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FrameAtNode f = centered_frame(profile, i);
    SurfaceSample& s = out[i];
    s.position = profile.nodes()[i];
    s.tangent = f.tangent;
    s.normal = f.normal;
    const bool pole = poles && (i == 0 || i == n - 1);
    if (pole) {
      // Smooth limit of -x_s / r at a perpendicular axis crossing.
      s.kappa = PrincipalCurvatures{f.curvature, f.curvature};
      const double h = profile.segment_length(i == 0 ? 0 : n - 2);
      s.weight = std::numbers::pi * 0.25 * h * h;
    } else {
      const double r = s.position.y();
      s.kappa = PrincipalCurvatures{f.curvature, s.normal.y() / r};
      const double ds = 0.5 * (profile.segment_length((i + n - 1) % n) + profile.segment_length(i));
      s.weight = 2.0 * std::numbers::pi * r * ds;
    }
  }
  return out;
}

DiscreteHypersurface resample_arclength(const DiscreteHypersurface& h)
{
  const std::size_t n = h.size();
  if (h.periodic()) {
    const PeriodicSpline spline(h.nodes());
    return h.with_nodes(equal_chord_points(spline, n));
  }
  // Mirror the profile across the axis into a closed curve through both poles.
  std::vector<Vec2> closed(h.nodes().begin(), h.nodes().end());
  for (std::size_t i = n - 2; i >= 1; --i)
    closed.push_back(mirror(h.nodes()[i]));
  const PeriodicSpline spline(closed);
  std::vector<Vec2> pts = equal_chord_points(spline, closed.size());
  pts.resize(n);
  pts.front().y() = 0.0;
  pts.back().y() = 0.0;
  return h.with_nodes(std::move(pts));
}

bool self_intersection_check(const DiscreteHypersurface& h)
{
  const std::size_t n = h.size();
  const std::size_t segs = h.segment_count();
  const auto nodes = h.nodes();
  std::vector<Vec2> lo(segs), hi(segs);
  for (std::size_t k = 0; k < segs; ++k) {
    lo[k] = nodes[k].cwiseMin(nodes[(k + 1) % n]);
    hi[k] = nodes[k].cwiseMax(nodes[(k + 1) % n]);
  }
  for (std::size_t a = 0; a < segs; ++a) {
    for (std::size_t b = a + 2; b < segs; ++b) {
      if (h.periodic() && a == 0 && b == segs - 1)
        continue;
      if (lo[a].x() > hi[b].x() || lo[b].x() > hi[a].x() || lo[a].y() > hi[b].y() ||
          lo[b].y() > hi[a].y())
        continue;
      if (segments_intersect(nodes[a], nodes[(a + 1) % n], nodes[b], nodes[(b + 1) % n]))
        return true;
    }
  }
  return false;
}

double point_segment_distance(const Vec2& x, const Vec2& p, const Vec2& q)
{
  const Vec2 d = q - p;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - p).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (p + t * d)).norm();
}

double polyline_hausdorff(const DiscreteHypersurface& a, const DiscreteHypersurface& b)
{
  auto directed = [](const DiscreteHypersurface& from, const DiscreteHypersurface& to) {
    double worst = 0.0;
    const auto tn = to.nodes();
    for (const auto& x : from.nodes()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < to.segment_count(); ++k)
        best = std::min(best, point_segment_distance(x, tn[k], tn[(k + 1) % tn.size()]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

} // namespace ncflow
