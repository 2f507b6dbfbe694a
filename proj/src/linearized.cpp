#include "ncflow/linearized.hpp"

#include "ncflow/errors.hpp"
#include "ncflow/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ncflow {

FieldLabel FieldLabel::parse(const std::string& text)
{
  if (text == "speed")
    return speed();
  if (text == "scaling")
    return scaling_solution();
  if (text == "normal")
    return normal_component(0);
  if (text == "normal:0" || text == "normal:x")
    return normal_component(0);
  if (text == "normal:1" || text == "normal:y")
    return normal_component(1);
  throw ParseError("unknown field label '" + text + "'");
}

std::string FieldLabel::name() const
{
  switch (kind) {
  case Kind::Speed: return "speed";
  case Kind::NormalComponent: return "normal:" + std::to_string(axis);
  case Kind::ScalingSolution: return "scaling";
  }
  return "?";
}

ScalarField evaluate_field(const DiscreteHypersurface& h, const SpeedFunction& f,
                           const FieldLabel& label, double t)
{
  if (h.backend() == Backend::Axisymmetric) {
    if (label.kind == FieldLabel::Kind::NormalComponent && label.axis != 0)
      throw ValidationError("normal component on a surface of revolution must use the axis");
    if (label.kind == FieldLabel::Kind::ScalingSolution && label.origin.y() != 0.0)
      throw ValidationError("scaling origin on a surface of revolution must lie on the axis");
  }
  if (label.axis < 0 || label.axis > 1)
    throw ValidationError("normal component axis must be 0 or 1");

  ScalarField out;
  out.label = label;
  out.values.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const SurfaceSample& s = h.sample(i);
    switch (label.kind) {
    case FieldLabel::Kind::Speed: out.values[i] = f.value(s.kappa); break;
    case FieldLabel::Kind::NormalComponent: out.values[i] = s.normal[label.axis]; break;
    case FieldLabel::Kind::ScalingSolution:
      out.values[i] = (s.position - label.origin).dot(s.normal) + 2.0 * t * f.value(s.kappa);
      break;
    }
  }
  return out;
}

ScalarField lin_operator(const DiscreteHypersurface& h, const SpeedFunction& f,
                         const ScalarField& field)
{
  const std::size_t n = h.size();
  if (field.values.size() != n)
    throw ValidationError("field and surface sizes differ");
  const auto& v = field.values;
  const bool poles = h.topology() == Topology::SphereLike;

  ScalarField out;
  out.label = field.label;
  out.values.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const SurfaceSample& s = h.sample(i);
    const SpeedEvaluation e = f.evaluate(s.kappa);
    double potential = 0.0;
    for (std::size_t k = 0; k < s.kappa.size(); ++k)
      potential += e.gradient[k] * s.kappa[k] * s.kappa[k];

    if (poles && (i == 0 || i == n - 1)) {
      // Mirror ghost f(-h) = f(h): f_s = 0 and r_s f_s / r -> f_ss.
      const std::size_t nb = i == 0 ? 1 : n - 2;
      const double hh = h.segment_length(i == 0 ? 0 : n - 2);
      const double fss = 2.0 * (v[nb] - v[i]) / (hh * hh);
      out.values[i] = (e.gradient[0] + e.gradient[1]) * fss + potential * v[i];
      return;
    }

    const std::size_t im = (i + n - 1) % n;
    const std::size_t ip = (i + 1) % n;
    const double hm = h.segment_length(im);
    const double hp = h.segment_length(i);
    const double dm = v[i] - v[im];
    const double dp = v[ip] - v[i];
    const double fss = 2.0 * (dp / hp - dm / hm) / (hp + hm);

    if (h.backend() == Backend::PlaneCurve) {
      out.values[i] = e.gradient[0] * fss + potential * v[i];
      return;
    }
    const double fs = (hm * hm * dp + hp * hp * dm) / (hp * hm * (hp + hm));
    const double rs = s.tangent.y();
    const double r = s.position.y();
    out.values[i] = e.gradient[0] * fss + e.gradient[1] * (rs / r) * fs + potential * v[i];
  });
  return out;
}

ScalarField flow_time_derivative(const FlowTrajectory& traj, const SpeedFunction& f,
                                 const FieldLabel& label, std::size_t k)
{
  if (k + 1 >= traj.snapshots.size())
    throw ValidationError("time derivative needs snapshot k + 1");
  const Snapshot& s0 = traj.snapshots[k];
  const Snapshot& s1 = traj.snapshots[k + 1];
  if (s1.resampled_since_previous)
    throw ResampleBoundary("nodes were resampled between snapshots " + std::to_string(k) +
                           " and " + std::to_string(k + 1));
  if (s0.surface.size() != s1.surface.size())
    throw ResampleBoundary("snapshot resolutions differ");
  const ScalarField f0 = evaluate_field(s0.surface, f, label, s0.t);
  const ScalarField f1 = evaluate_field(s1.surface, f, label, s1.t);
  const double dt = s1.t - s0.t;
  if (!(dt > 0.0))
    throw ValidationError("snapshot times must increase");
  ScalarField out;
  out.label = label;
  out.values.resize(f0.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = (f1.values[i] - f0.values[i]) / dt;
  return out;
}

std::vector<std::size_t> interior_samples(const DiscreteHypersurface& h)
{
  std::vector<std::size_t> out;
  const std::size_t n = h.size();
  const bool poles = h.topology() == Topology::SphereLike;
  for (std::size_t i = 0; i < n; ++i)
    if (!(poles && (i == 0 || i == n - 1)))
      out.push_back(i);
  return out;
}

std::vector<std::size_t> window_pairs(const FlowTrajectory& traj, const ResidualWindow& window)
{
  std::vector<std::size_t> valid;
  for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
    const double t = traj.snapshots[k].t;
    if (t < window.t_begin || t > window.t_end)
      continue;
    if (traj.snapshots[k + 1].resampled_since_previous)
      continue;
    valid.push_back(k);
  }
  if (valid.size() <= window.max_pairs || window.max_pairs == 0)
    return valid;
  std::vector<std::size_t> picked;
  const std::size_t m = window.max_pairs;
  for (std::size_t q = 0; q < m; ++q)
    picked.push_back(valid[q * (valid.size() - 1) / (m - (m > 1 ? 1 : 0))]);
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

double solution_residual(const FlowTrajectory& traj, const SpeedFunction& f,
                         const FieldLabel& label, const ResidualWindow& window)
{
  const auto pairs = window_pairs(traj, window);
  if (pairs.empty())
    throw ValidationError("no resampling-free snapshot pair in the residual window");
  double worst = 0.0;
  for (std::size_t k : pairs) {
    const auto& h = traj.snapshots[k].surface;
    const ScalarField dfdt = flow_time_derivative(traj, f, label, k);
    const ScalarField lf = lin_operator(h, f, evaluate_field(h, f, label, traj.snapshots[k].t));
    for (std::size_t i : interior_samples(h))
      worst = std::max(worst, std::abs(dfdt.values[i] - lf.values[i]));
  }
  return worst;
}

std::pair<double, double> fit_order(const std::vector<double>& x, const std::vector<double>& y)
{
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw ValidationError("order fit needs at least two points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(1.0 / x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (my + slope * (lx[i] - mx));
    rss += r * r;
  }
  return {slope, std::sqrt(rss / static_cast<double>(n))};
}

std::vector<ResidualReport> convergence_orders(const SurfaceGenerator& generator,
                                               const FlowConfig& cfg,
                                               const std::vector<FieldLabel>& labels,
                                               const std::vector<std::size_t>& resolutions)
{
  if (resolutions.size() < 3)
    throw ValidationError("convergence study needs at least three resolutions");
  for (std::size_t q = 1; q < resolutions.size(); ++q)
    if (resolutions[q] != 2 * resolutions[q - 1])
      throw ValidationError("each resolution must double the previous one");

  std::vector<ResidualReport> reports(labels.size());
  for (std::size_t l = 0; l < labels.size(); ++l) {
    reports[l].label = labels[l].name();
    reports[l].speed = cfg.speed.name();
  }

  FlowConfig run_cfg = cfg;
  run_cfg.snapshot_every = 1;
  const ResidualWindow window{0.5 * cfg.t_end, cfg.t_end, 8};
  for (std::size_t n : resolutions) {
    const FlowTrajectory traj = run(generator(n), run_cfg);
    if (traj.termination != Termination::ReachedTEnd)
      throw Instability("convergence run at N = " + std::to_string(n) +
                        " stopped early: " + to_string(traj.termination));
    const auto pairs = window_pairs(traj, window);
    const double dt = pairs.empty()
                        ? 0.0
                        : traj.snapshots[pairs.front() + 1].t - traj.snapshots[pairs.front()].t;
    for (std::size_t l = 0; l < labels.size(); ++l)
      reports[l].rows.push_back({n, dt, solution_residual(traj, cfg.speed, labels[l], window)});
  }

  for (auto& rep : reports) {
    std::vector<double> x, y;
    for (const auto& row : rep.rows) {
      x.push_back(static_cast<double>(row.n));
      y.push_back(row.residual);
    }
    std::tie(rep.order, rep.fit_residual) = fit_order(x, y);
  }
  return reports;
}

ResidualReport convergence_order(const SurfaceGenerator& generator, const FlowConfig& cfg,
                                 const FieldLabel& label, const std::vector<std::size_t>& resolutions)
{
  return convergence_orders(generator, cfg, {label}, resolutions).front();
}

} // namespace ncflow
