#include "ncflow/geometry_io.hpp"

#include "ncflow/errors.hpp"

#include "json.hpp"

#include <fstream>

namespace ncflow {

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path)
{
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

csv::Table geometry_table(const DiscreteHypersurface& h)
{
  csv::Table t;
  t.header = {"x", h.backend() == Backend::PlaneCurve ? "y" : "r"};
  t.rows.reserve(h.size());
  for (const auto& p : h.nodes())
    t.rows.push_back({csv::format_double(p.x()), csv::format_double(p.y())});
  return t;
}

void write_geometry(const std::filesystem::path& csv_path, const DiscreteHypersurface& h,
                    bool sidecar)
{
  csv::write(csv_path, geometry_table(h));
  if (!sidecar)
    return;
  nlohmann::json j;
  j["backend"] = to_string(h.backend());
  if (h.backend() == Backend::Axisymmetric)
    j["topology"] = to_string(h.topology());
  std::ofstream os(sidecar_path(csv_path), std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot write sidecar for '" + csv_path.string() + "'");
  os << j.dump(2) << '\n';
}

DiscreteHypersurface read_geometry(const std::filesystem::path& csv_path)
{
  const auto side = sidecar_path(csv_path);
  std::ifstream is(side);
  if (!is)
    throw IoError("missing geometry sidecar '" + side.string() + "'");
  nlohmann::json meta;
  try {
    is >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("sidecar '" + side.string() + "': " + e.what());
  }
  const std::string backend = meta.value("backend", "");
  const csv::Table t = csv::read(csv_path);
  std::vector<Vec2> pts(t.rows.size());

  if (backend == "curve") {
    const auto cx = t.column("x");
    const auto cy = t.column("y");
    for (std::size_t i = 0; i < pts.size(); ++i)
      pts[i] = Vec2(csv::parse_double(t.rows[i][cx]), csv::parse_double(t.rows[i][cy]));
    return DiscreteHypersurface::plane_curve(std::move(pts));
  }
  if (backend == "axisym") {
    const std::string topo = meta.value("topology", "");
    Topology topology;
    if (topo == "sphere")
      topology = Topology::SphereLike;
    else if (topo == "torus")
      topology = Topology::TorusLike;
    else
      throw ValidationError("sidecar key 'topology' must be \"sphere\" or \"torus\"");
    const auto cx = t.column("x");
    const auto cr = t.column("r");
    for (std::size_t i = 0; i < pts.size(); ++i)
      pts[i] = Vec2(csv::parse_double(t.rows[i][cx]), csv::parse_double(t.rows[i][cr]));
    return DiscreteHypersurface::axisymmetric(std::move(pts), topology);
  }
  throw ValidationError("sidecar key 'backend' must be \"curve\" or \"axisym\"");
}

} // namespace ncflow
