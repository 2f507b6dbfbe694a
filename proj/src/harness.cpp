#include "ncflow/harness.hpp"

#include "ncflow/errors.hpp"
#include "ncflow/geometry_io.hpp"
#include "ncflow/parallel.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>

namespace ncflow {

using nlohmann::json;
namespace fs = std::filesystem;
using csv::format_double;

int exit_code_for(const std::exception& e)
{
  if (dynamic_cast<const ParseError*>(&e))
    return exit_code::parse_error;
  if (dynamic_cast<const ValidationError*>(&e))
    return exit_code::validation_error;
  if (dynamic_cast<const IoError*>(&e))
    return exit_code::io_error;
  return exit_code::flow_failed;
}

csv::Table series_table(const SeriesRecord& record)
{
  csv::Table t;
  t.header = {"t", "sup_ratio", "inf_ratio", "min_F", "max_F", "defect_sup", "defect_inf"};
  for (const auto& r : record.rows)
    t.rows.push_back({format_double(r.t), format_double(r.sup_ratio), format_double(r.inf_ratio),
                      format_double(r.min_F), format_double(r.max_F), format_double(r.defect_sup),
                      format_double(r.defect_inf)});
  return t;
}

csv::Table field_table(const SphereCurvatureField& field, const std::vector<double>& speed,
                       Backend backend)
{
  csv::Table t;
  t.header = {"i", "Zbar", "Zlow", "kappa_max", "kappa_min", "F", "witness_bar", "witness_low"};
  for (std::size_t i = 0; i < field.zbar.size(); ++i)
    t.rows.push_back({std::to_string(i), format_double(field.zbar[i]), format_double(field.zlow[i]),
                      format_double(field.kappa_max[i]), format_double(field.kappa_min[i]),
                      format_double(speed[i]), field.witness_bar[i].label(backend),
                      field.witness_low[i].label(backend)});
  return t;
}

csv::Table distance_table(const DistanceSeries& series)
{
  csv::Table t;
  t.header = {"t", "d_min", "ax", "ar_or_y", "bx", "br_or_y", "defect"};
  for (const auto& r : series.rows)
    t.rows.push_back({format_double(r.t), format_double(r.closest.distance),
                      format_double(r.closest.point_a.x()), format_double(r.closest.point_a.y()),
                      format_double(r.closest.point_b.x()), format_double(r.closest.point_b.y()),
                      format_double(r.defect)});
  return t;
}

csv::Table report_table(const std::vector<ResidualReport>& reports)
{
  csv::Table t;
  t.header = {"N", "dt", "residual", "label", "speed"};
  for (const auto& rep : reports)
    for (const auto& row : rep.rows)
      t.rows.push_back({std::to_string(row.n), format_double(row.dt), format_double(row.residual),
                        rep.label, rep.speed});
  return t;
}

void write_series(const SeriesRecord& record, const fs::path& path)
{
  csv::write(path, series_table(record));
}

void write_series(const DistanceSeries& series, const fs::path& path)
{
  csv::write(path, distance_table(series));
}

void write_series(const std::vector<ResidualReport>& reports, const fs::path& path)
{
  csv::write(path, report_table(reports));
}

namespace {

double unit_speed(const SpeedFunction& f, std::size_t dimension)
{
  return dimension == 1 ? f.value(PrincipalCurvatures{1.0}) : f.value(PrincipalCurvatures{1.0, 1.0});
}

/// Mean distance of the nodes from the center of a round body.
double mean_radius(const DiscreteHypersurface& h)
{
  Vec2 center = h.centroid();
  if (h.backend() == Backend::Axisymmetric)
    center = Vec2(0.5 * (h.nodes().front().x() + h.nodes().back().x()), 0.0);
  double acc = 0.0;
  for (const auto& p : h.nodes())
    acc += (p - center).norm();
  return acc / static_cast<double>(h.size());
}

bool is_round(const GeometrySpec& g)
{
  return g.generator == "circle" || g.generator == "sphere";
}

Vec2 round_center(const GeometrySpec& g)
{
  if (g.generator == "sphere")
    return Vec2(g.params.value("x0", 0.0), 0.0);
  return Vec2(g.params.value("cx", 0.0), g.params.value("cy", 0.0));
}

void write_summary(const fs::path& dir, const json& summary)
{
  std::ofstream os(dir / "summary.json", std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot write summary.json in '" + dir.string() + "'");
  os << summary.dump(2) << '\n';
}

int flow_exit(Termination t)
{
  return t == Termination::ReachedTEnd ? exit_code::ok : exit_code::flow_failed;
}

int run_flow(const ExperimentConfig& cfg, json& summary, std::ostream& log)
{
  const auto h0 = cfg.geometry.build();
  const FlowTrajectory traj = run(h0, cfg.flow);
  summary["termination"] = to_string(traj.termination);
  summary["termination_detail"] = traj.detail;
  summary["steps"] = traj.steps;
  summary["final_t"] = traj.snapshots.back().t;

  csv::Table index;
  index.header = {"t", "file", "min_F", "max_F", "max_kappa"};
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& snap = traj.snapshots[k];
    const std::string name = "snap_" + std::to_string(k) + ".csv";
    write_geometry(cfg.output_dir / name, snap.surface, false);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : snap.surface.samples()) {
      const double v = cfg.speed.value(s.kappa);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    index.rows.push_back({format_double(snap.t), name, format_double(lo), format_double(hi),
                          format_double(max_abs_curvature(snap.surface))});
  }
  csv::write(cfg.output_dir / "index.csv", index);

  const auto& last = traj.snapshots.back();
  const double r_final = mean_radius(last.surface);
  summary["final_mean_radius"] = r_final;
  int code = flow_exit(traj.termination);
  if (is_round(cfg.geometry)) {
    const double r0 = cfg.geometry.params.value("r", 1.0);
    const double f1 = unit_speed(cfg.speed, h0.dimension());
    const double exact = std::sqrt(r0 * r0 - 2.0 * f1 * last.t);
    const double err = std::abs(r_final - exact) / exact;
    const bool ok = err <= cfg.tolerances.radius;
    summary["verdicts"]["exact_radius"] = exact;
    summary["verdicts"]["radius_rel_error"] = err;
    summary["verdicts"]["radius_ok"] = ok;
    log << "final radius " << r_final << " (exact " << exact << ", rel. error " << err << ")\n";
    if (!ok && code == exit_code::ok)
      code = exit_code::verdict_failed;
  }
  return code;
}

int analyze_noncollapse(const ExperimentConfig& cfg, json& summary, std::ostream& log)
{
  const auto h0 = cfg.geometry.build();
  const FlowTrajectory traj = run(h0, cfg.flow);
  summary["termination"] = to_string(traj.termination);
  summary["termination_detail"] = traj.detail;
  summary["steps"] = traj.steps;
  summary["snapshots"] = traj.snapshots.size();

  const NoncollapseAnalysis analysis = analyze_trajectory(traj, cfg.speed, cfg.analyzer);
  write_series(analysis.series, cfg.output_dir / "series.csv");
  const Backend backend = h0.backend();
  for (std::size_t k = 0; k < analysis.fields.size(); ++k)
    csv::write(cfg.output_dir / ("field_" + std::to_string(k) + ".csv"),
               field_table(analysis.fields[k], analysis.speeds[k], backend));

  const auto& rows = analysis.series.rows;
  json& v = summary["verdicts"];
  bool ok = true;
  v["defect_sup"] = analysis.series.defect_sup;
  v["defect_inf"] = analysis.series.defect_inf;
  if (cfg.speed.is_concave()) {
    const double tol = cfg.tolerances.ratio_defect * std::abs(rows.front().sup_ratio);
    v["defect_sup_tolerance"] = tol;
    v["defect_sup_ok"] = analysis.series.defect_sup <= tol;
    ok = ok && analysis.series.defect_sup <= tol;
  }
  if (cfg.speed.is_convex()) {
    const double tol = cfg.tolerances.ratio_defect * std::abs(rows.front().inf_ratio);
    v["defect_inf_tolerance"] = tol;
    v["defect_inf_ok"] = analysis.series.defect_inf <= tol;
    ok = ok && analysis.series.defect_inf <= tol;
  }

  bool structural = true;
  for (const auto& field : analysis.fields)
    for (std::size_t i = 0; i < field.zbar.size(); ++i)
      if (field.zbar[i] < field.kappa_max[i] - 1e-12 || field.zlow[i] > field.kappa_min[i] + 1e-12)
        structural = false;
  v["sphere_curvature_bounds_ok"] = structural;
  ok = ok && structural;

  // Circumradius bound from exterior non-collapsing, for convex speeds on
  // convex snapshots.
  if (cfg.speed.is_convex()) {
    double worst_inverse = 0.0;
    for (const auto& row : rows)
      worst_inverse = std::max(worst_inverse, 1.0 / row.inf_ratio);
    bool bound = true;
    bool applicable = rows.front().inf_ratio > 0.0;
    for (const auto& snap : traj.snapshots) {
      try {
        const double circ = circumradius(snap.surface);
        const double in = inradius(snap.surface);
        (void)circum_inradius_ratio(snap.surface);
        if (circ > worst_inverse * in + cfg.tolerances.circum_slack)
          bound = false;
      } catch (const NonConvexInput&) {
        applicable = false;
      }
    }
    if (applicable) {
      v["circum_inradius_ok"] = bound;
      ok = ok && bound;
    }
  }

  log << "sup Zbar/F: " << rows.front().sup_ratio << " -> " << rows.back().sup_ratio
      << ", max forward increase " << analysis.series.defect_sup << "\n";
  log << "inf Zlow/F: " << rows.front().inf_ratio << " -> " << rows.back().inf_ratio
      << ", max forward decrease " << analysis.series.defect_inf << "\n";

  const int code = flow_exit(traj.termination);
  if (code != exit_code::ok)
    return code;
  return ok ? exit_code::ok : exit_code::verdict_failed;
}

int run_containment(const ExperimentConfig& cfg, json& summary, std::ostream& log)
{
  const auto a0 = cfg.geometry.build();
  const auto b0 = cfg.geometry_b->build();
  const auto [traj, series] = run_pair(a0, b0, cfg.flow, cfg.orientation);
  write_series(series, cfg.output_dir / "distance.csv");
  summary["termination"] = to_string(traj.termination);
  summary["termination_detail"] = traj.detail;
  summary["case"] = to_string(cfg.orientation);

  const double d0 = series.rows.front().closest.distance;
  const double tol = cfg.tolerances.distance_defect * d0;
  json& v = summary["verdicts"];
  v["d_min_initial"] = d0;
  v["d_min_final"] = series.rows.back().closest.distance;
  v["max_decrease"] = series.max_decrease;
  v["max_decrease_tolerance"] = tol;
  v["advisory"] = series.advisory;
  v["monotone_ok"] = series.max_decrease <= tol;
  bool ok = series.max_decrease <= tol || series.advisory;

  // Two round bodies shrink independently, so the exact gap is known.
  if (is_round(cfg.geometry) && is_round(*cfg.geometry_b)) {
    const double f1 = unit_speed(cfg.speed, a0.dimension());
    const double sep = (round_center(cfg.geometry) - round_center(*cfg.geometry_b)).norm();
    const double ra0 = cfg.geometry.params.value("r", 1.0);
    const double rb0 = cfg.geometry_b->params.value("r", 1.0);
    double worst = 0.0;
    for (const auto& row : series.rows) {
      const double ra = std::sqrt(ra0 * ra0 - 2.0 * f1 * row.t);
      const double rb = std::sqrt(rb0 * rb0 - 2.0 * f1 * row.t);
      const double exact =
        cfg.orientation == OrientationCase::Nested ? rb - ra - sep : sep - ra - rb;
      worst = std::max(worst, std::abs(row.closest.distance - exact) / exact);
    }
    v["exact_gap_rel_error"] = worst;
    v["exact_gap_ok"] = worst <= cfg.tolerances.radius;
    ok = ok && worst <= cfg.tolerances.radius;
  }
  log << "d_min " << d0 << " -> " << series.rows.back().closest.distance
      << ", max forward decrease " << series.max_decrease << "\n";

  const int code = flow_exit(traj.termination);
  if (code != exit_code::ok)
    return code;
  return ok ? exit_code::ok : exit_code::verdict_failed;
}

int verify_linearized(const ExperimentConfig& cfg, json& summary, std::ostream& log)
{
  const GeometrySpec spec = cfg.geometry;
  const auto reports = convergence_orders([&](std::size_t n) { return spec.build(n); }, cfg.flow,
                                          cfg.verifier.labels, cfg.verifier.resolutions);
  write_series(reports, cfg.output_dir / "report.csv");

  csv::Table orders;
  orders.header = {"label", "speed", "p", "fit_residual"};
  bool ok = true;
  json& v = summary["verdicts"];
  for (const auto& rep : reports) {
    orders.rows.push_back({rep.label, rep.speed, format_double(rep.order),
                           format_double(rep.fit_residual)});
    log << rep.label << ',' << rep.speed << ',' << rep.order << ',' << rep.fit_residual << '\n';
    v["orders"][rep.label] = rep.order;
    ok = ok && rep.order >= cfg.tolerances.min_order;
  }
  csv::write(cfg.output_dir / "orders.csv", orders);
  v["min_order"] = cfg.tolerances.min_order;
  v["orders_ok"] = ok;
  return ok ? exit_code::ok : exit_code::verdict_failed;
}

int check_speeds(const ExperimentConfig& cfg, json& summary, std::ostream& log)
{
  const SpeedCertificate c = certify_speed(cfg.speed, cfg.samples, cfg.seed);
  const double tol = cfg.tolerances.certificate;

  csv::Table t;
  t.header = {"check", "value", "tolerance", "pass"};
  bool ok = true;
  auto add = [&](const std::string& name, double value, double limit, bool pass) {
    t.rows.push_back({name, format_double(value), format_double(limit), pass ? "1" : "0"});
    summary["verdicts"][name] = value;
    log << name << ' ' << value << (pass ? " ok" : " FAILED") << '\n';
    ok = ok && pass;
  };
  add("homogeneity", c.homogeneity, tol, c.homogeneity <= tol);
  add("euler", c.euler, tol, c.euler <= tol);
  add("gradient_fd", c.gradient_fd, 1e-6, c.gradient_fd <= 1e-6);
  add("min_gradient", c.min_gradient, 0.0, c.min_gradient > 0.0);
  if (cfg.speed.is_concave())
    add("support_min", c.support_min, -tol, c.support_min >= -tol);
  if (cfg.speed.is_convex())
    add("support_max", c.support_max, tol, c.support_max <= tol);

  const ConvexityClass expected = cfg.speed.is_concave() && cfg.speed.is_convex()
                                    ? ConvexityClass::Both
                                    : (cfg.speed.is_concave() ? ConvexityClass::Concave
                                                              : ConvexityClass::Convex);
  const bool class_ok = c.convexity == expected;
  t.rows.push_back({"convexity", to_string(c.convexity), to_string(expected), class_ok ? "1" : "0"});
  summary["verdicts"]["convexity"] = to_string(c.convexity);
  log << "convexity " << to_string(c.convexity) << (class_ok ? " ok" : " FAILED") << '\n';
  ok = ok && class_ok;

  csv::write(cfg.output_dir / "speeds.csv", t);
  return ok ? exit_code::ok : exit_code::verdict_failed;
}

} // namespace

RunOutcome run_command(const ExperimentConfig& cfg, std::ostream& log)
{
  const auto start = std::chrono::steady_clock::now();
  unsigned threads = cfg.threads;
  if (threads == 0)
    if (const char* env = std::getenv("NONCOLLAPSE_THREADS"))
      threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  set_thread_count(threads);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + cfg.output_dir.string() + "'");

  RunOutcome out;
  json& summary = out.summary;
  summary["command"] = to_string(cfg.command);
  summary["speed"] = cfg.speed.name();
  summary["seed"] = cfg.seed;
  try {
    switch (cfg.command) {
    case Command::RunFlow: out.exit_code = run_flow(cfg, summary, log); break;
    case Command::AnalyzeNoncollapse: out.exit_code = analyze_noncollapse(cfg, summary, log); break;
    case Command::RunContainment: out.exit_code = run_containment(cfg, summary, log); break;
    case Command::VerifyLinearized: out.exit_code = verify_linearized(cfg, summary, log); break;
    case Command::CheckSpeeds: out.exit_code = check_speeds(cfg, summary, log); break;
    }
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    summary["error"] = e.what();
    out.exit_code = exit_code_for(e);
    log << "error: " << e.what() << '\n';
  }
  summary["exit_code"] = out.exit_code;
  summary["wall_clock_seconds"] =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_summary(cfg.output_dir, summary);
  return out;
}

} // namespace ncflow
