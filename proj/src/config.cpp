#include "ncflow/config.hpp"

#include "ncflow/errors.hpp"
#include "ncflow/generators.hpp"
#include "ncflow/geometry_io.hpp"

#include <fstream>
#include <map>
#include <set>

namespace ncflow {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key)
{
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed)
{
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ValidationError("unknown key '" + join(prefix, key) + "'");
}

const json& require_object(const json& doc, const std::string& key)
{
  const json& v = doc.at(key);
  if (!v.is_object())
    throw ParseError("'" + key + "' must be an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& path)
{
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ParseError("'" + path + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& prefix, double fallback)
{
  return obj.contains(key) ? number(obj, key, join(prefix, key)) : fallback;
}

long long integer(const json& obj, const std::string& key, const std::string& path)
{
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ParseError("'" + path + "' must be an integer");
  return v.get<long long>();
}

std::string string(const json& obj, const std::string& key, const std::string& path)
{
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ParseError("'" + path + "' must be a string");
  return v.get<std::string>();
}

const std::set<std::string>& generator_keys(const std::string& gen, const std::string& path)
{
  static const std::map<std::string, std::set<std::string>> keys = {
    {"circle", {"r", "cx", "cy"}},
    {"ellipse", {"a", "b", "param"}},
    {"sphere", {"r", "x0"}},
    {"ellipsoid", {"a", "b"}},
    {"torus", {"R", "a"}},
    {"dumbbell", {"R", "rho", "neck_half_length"}},
  };
  auto it = keys.find(gen);
  if (it == keys.end())
    throw ValidationError("'" + path + ".gen' names an unknown generator '" + gen + "'");
  return it->second;
}

GeometrySpec parse_geometry(const json& obj, const std::string& path)
{
  if (!obj.is_object())
    throw ParseError("'" + path + "' must be an object");
  GeometrySpec spec;
  if (obj.contains("N")) {
    const long long n = integer(obj, "N", path + ".N");
    if (n < static_cast<long long>(DiscreteHypersurface::kMinNodes))
      throw ValidationError("'" + path + ".N' must be at least 16");
    spec.n = static_cast<std::size_t>(n);
  }
  if (obj.contains("file")) {
    if (obj.contains("gen"))
      throw ValidationError("'" + path + "' sets both 'gen' and 'file'");
    reject_unknown(obj, path, {"file", "N"});
    spec.file = string(obj, "file", path + ".file");
    if (!std::filesystem::exists(spec.file))
      throw ValidationError("'" + path + ".file' does not exist: " + spec.file.string());
    if (!std::filesystem::exists(sidecar_path(spec.file)))
      throw ValidationError("'" + path + ".file' has no JSON sidecar");
    return spec;
  }
  if (!obj.contains("gen"))
    throw ValidationError("missing key '" + path + ".gen' (or '" + path + ".file')");
  spec.generator = string(obj, "gen", path + ".gen");
  auto allowed = generator_keys(spec.generator, path);
  allowed.insert({"gen", "N"});
  reject_unknown(obj, path, allowed);
  for (const auto& [key, value] : obj.items()) {
    if (key == "gen" || key == "N")
      continue;
    if (key == "param") {
      if (!value.is_string() || (value != "arclength" && value != "angle"))
        throw ParseError("'" + path + ".param' must be \"arclength\" or \"angle\"");
    } else if (!value.is_number()) {
      throw ParseError("'" + join(path, key) + "' must be a number");
    }
    spec.params[key] = value;
  }
  return spec;
}

FlowConfig parse_flow(const json& obj, const SpeedFunction& speed, bool need_t_end)
{
  const std::string p = "flow";
  reject_unknown(obj, p,
                 {"t_end", "dt_safety", "resample_every", "kappa_cap", "snapshot_every",
                  "check_embedding"});
  FlowConfig cfg;
  cfg.speed = speed;
  if (obj.contains("t_end"))
    cfg.t_end = number(obj, "t_end", "flow.t_end");
  else if (need_t_end)
    throw ValidationError("missing key 'flow.t_end'");
  cfg.dt_safety = number_or(obj, "dt_safety", p, cfg.dt_safety);
  if (obj.contains("resample_every"))
    cfg.resample_every = static_cast<int>(integer(obj, "resample_every", "flow.resample_every"));
  if (obj.contains("snapshot_every"))
    cfg.snapshot_every = static_cast<int>(integer(obj, "snapshot_every", "flow.snapshot_every"));
  if (obj.contains("kappa_cap"))
    cfg.kappa_cap = number(obj, "kappa_cap", "flow.kappa_cap");
  if (obj.contains("check_embedding")) {
    if (!obj["check_embedding"].is_boolean())
      throw ParseError("'flow.check_embedding' must be a boolean");
    cfg.check_embedding = obj["check_embedding"].get<bool>();
  }
  if (need_t_end)
    cfg.validate();
  return cfg;
}

} // namespace

std::string to_string(Command c)
{
  switch (c) {
  case Command::RunFlow: return "run-flow";
  case Command::AnalyzeNoncollapse: return "analyze-noncollapse";
  case Command::RunContainment: return "run-containment";
  case Command::VerifyLinearized: return "verify-linearized";
  case Command::CheckSpeeds: return "check-speeds";
  }
  return "?";
}

Command parse_command(const std::string& text)
{
  for (Command c : {Command::RunFlow, Command::AnalyzeNoncollapse, Command::RunContainment,
                    Command::VerifyLinearized, Command::CheckSpeeds})
    if (to_string(c) == text)
      return c;
  throw ParseError("'command' has unknown value '" + text + "'");
}

DiscreteHypersurface GeometrySpec::build() const
{
  return build(n);
}

DiscreteHypersurface GeometrySpec::build(std::size_t resolution) const
{
  if (!file.empty())
    return read_geometry(file);
  auto get = [&](const char* key, double fallback) {
    return params.contains(key) ? params[key].get<double>() : fallback;
  };
  if (generator == "circle")
    return gen::circle(get("r", 1.0), resolution, Vec2(get("cx", 0.0), get("cy", 0.0)));
  if (generator == "ellipse")
    return gen::ellipse(get("a", 2.0), get("b", 1.0), resolution,
                        params.value("param", std::string("arclength")) == "arclength");
  if (generator == "sphere")
    return gen::sphere(get("r", 1.0), resolution, get("x0", 0.0));
  if (generator == "ellipsoid")
    return gen::ellipsoid(get("a", 1.5), get("b", 1.0), resolution);
  if (generator == "torus")
    return gen::torus(get("R", 3.0), get("a", 1.0), resolution);
  if (generator == "dumbbell")
    return gen::dumbbell(get("R", 1.0), get("rho", 0.4), get("neck_half_length", 0.5), resolution);
  throw ValidationError("unknown generator '" + generator + "'");
}

ExperimentConfig parse_config(const json& doc)
{
  if (!doc.is_object())
    throw ParseError("config must be a JSON object");
  reject_unknown(doc, "",
                 {"command", "geometry", "geometry_b", "case", "speed", "flow", "analyzer",
                  "verifier", "tolerances", "output_dir", "seed", "samples", "threads"});

  ExperimentConfig cfg;
  if (!doc.contains("command"))
    throw ValidationError("missing key 'command'");
  cfg.command = parse_command(string(doc, "command", "command"));

  if (!doc.contains("speed"))
    throw ValidationError("missing key 'speed'");
  try {
    cfg.speed = SpeedFunction::parse(string(doc, "speed", "speed"));
  } catch (const ParseError& e) {
    throw ParseError(std::string("'speed': ") + e.what());
  }

  const bool needs_geometry = cfg.command != Command::CheckSpeeds;
  if (needs_geometry) {
    if (!doc.contains("geometry"))
      throw ValidationError("missing key 'geometry'");
    cfg.geometry = parse_geometry(doc["geometry"], "geometry");
  }
  if (cfg.command == Command::RunContainment) {
    if (!doc.contains("geometry_b"))
      throw ValidationError("missing key 'geometry_b'");
    cfg.geometry_b = parse_geometry(doc["geometry_b"], "geometry_b");
    if (doc.contains("case")) {
      const std::string c = string(doc, "case", "case");
      if (c == "nested")
        cfg.orientation = OrientationCase::Nested;
      else if (c == "disjoint")
        cfg.orientation = OrientationCase::Disjoint;
      else
        throw ParseError("'case' must be \"nested\" or \"disjoint\"");
    }
  }

  const json flow = doc.contains("flow") ? require_object(doc, "flow") : json::object();
  cfg.flow = parse_flow(flow, cfg.speed, needs_geometry);

  if (doc.contains("analyzer")) {
    const json& a = require_object(doc, "analyzer");
    reject_unknown(a, "analyzer", {"exclusion_radius_factor", "M"});
    cfg.analyzer.exclusion_radius_factor =
      number_or(a, "exclusion_radius_factor", "analyzer", cfg.analyzer.exclusion_radius_factor);
    if (!(cfg.analyzer.exclusion_radius_factor > 0.0))
      throw ValidationError("'analyzer.exclusion_radius_factor' must be positive");
    if (a.contains("M")) {
      const long long m = integer(a, "M", "analyzer.M");
      if (m < 4)
        throw ValidationError("'analyzer.M' must be at least 4");
      cfg.analyzer.angles = static_cast<std::size_t>(m);
    }
  }

  if (doc.contains("verifier")) {
    const json& v = require_object(doc, "verifier");
    reject_unknown(v, "verifier", {"resolutions", "labels"});
    if (v.contains("resolutions")) {
      if (!v["resolutions"].is_array())
        throw ParseError("'verifier.resolutions' must be an array");
      cfg.verifier.resolutions.clear();
      for (const auto& r : v["resolutions"]) {
        if (!r.is_number_integer() || r.get<long long>() < 16)
          throw ValidationError("'verifier.resolutions' entries must be integers >= 16");
        cfg.verifier.resolutions.push_back(r.get<std::size_t>());
      }
    }
    if (v.contains("labels")) {
      if (!v["labels"].is_array())
        throw ParseError("'verifier.labels' must be an array");
      cfg.verifier.labels.clear();
      for (const auto& l : v["labels"]) {
        if (!l.is_string())
          throw ParseError("'verifier.labels' entries must be strings");
        try {
          cfg.verifier.labels.push_back(FieldLabel::parse(l.get<std::string>()));
        } catch (const ParseError& e) {
          throw ParseError(std::string("'verifier.labels': ") + e.what());
        }
      }
    }
    if (cfg.command == Command::VerifyLinearized) {
      const auto& rs = cfg.verifier.resolutions;
      if (rs.size() < 3)
        throw ValidationError("'verifier.resolutions' needs at least three entries");
      for (std::size_t q = 1; q < rs.size(); ++q)
        if (rs[q] != 2 * rs[q - 1])
          throw ValidationError("'verifier.resolutions' must double at each entry");
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = require_object(doc, "tolerances");
    reject_unknown(t, "tolerances",
                   {"ratio_defect", "distance_defect", "radius", "min_order", "certificate",
                    "circum_slack"});
    auto& tol = cfg.tolerances;
    tol.ratio_defect = number_or(t, "ratio_defect", "tolerances", tol.ratio_defect);
    tol.distance_defect = number_or(t, "distance_defect", "tolerances", tol.distance_defect);
    tol.radius = number_or(t, "radius", "tolerances", tol.radius);
    tol.min_order = number_or(t, "min_order", "tolerances", tol.min_order);
    tol.certificate = number_or(t, "certificate", "tolerances", tol.certificate);
    tol.circum_slack = number_or(t, "circum_slack", "tolerances", tol.circum_slack);
  }

  if (doc.contains("output_dir"))
    cfg.output_dir = string(doc, "output_dir", "output_dir");
  if (doc.contains("seed"))
    cfg.seed = static_cast<std::uint64_t>(integer(doc, "seed", "seed"));
  if (doc.contains("samples")) {
    cfg.samples = static_cast<int>(integer(doc, "samples", "samples"));
    if (cfg.samples < 100)
      throw ValidationError("'samples' must be at least 100");
  }
  if (doc.contains("threads")) {
    const long long t = integer(doc, "threads", "threads");
    if (t < 0)
      throw ValidationError("'threads' must be non-negative");
    cfg.threads = static_cast<unsigned>(t);
  }

  // Geometry parameters are checked by building once at the configured size.
  if (needs_geometry && cfg.command != Command::VerifyLinearized) {
    try {
      (void)cfg.geometry.build();
      if (cfg.geometry_b)
        (void)cfg.geometry_b->build();
    } catch (const Error& e) {
      throw ValidationError(std::string("'geometry': ") + e.what());
    }
  }
  return cfg;
}

void apply_override(json& doc, const std::string& dotted_key, const std::string& value)
{
  if (dotted_key.empty())
    throw ParseError("empty override key");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  std::string pointer;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    pointer += "/" + dotted_key.substr(start, dot - start);
    if (dot == std::string::npos)
      break;
    start = dot + 1;
  }
  doc[json::json_pointer(pointer)] = parsed;
}

json load_config_document(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& overrides)
{
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is)
      throw ParseError("cannot read config file '" + path.string() + "'");
    try {
      is >> doc;
    } catch (const json::parse_error& e) {
      throw ParseError("config '" + path.string() + "': " + e.what());
    }
  }
  for (const auto& [key, value] : overrides)
    apply_override(doc, key, value);
  return doc;
}

} // namespace ncflow
