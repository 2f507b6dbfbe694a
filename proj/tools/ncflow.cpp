// Command-line driver: one subcommand per experiment pipeline.
//
//   ncflow run-flow --config configs/sphere_sum.json --flow.t_end=0.1
//
// Any config key can be overridden with a dotted flag; flags win over the file.

#include "ncflow/config.hpp"
#include "ncflow/errors.hpp"
#include "ncflow/harness.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Turns leftover "--a.b=v" / "--a.b v" arguments into dotted overrides.
Overrides collect_overrides(const std::vector<std::string>& extras)
{
  Overrides out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0)
      throw ncflow::ParseError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2);
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(key.substr(0, eq), key.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size())
      throw ncflow::ParseError("flag '" + arg + "' needs a value");
    out.emplace_back(key, extras[++i]);
  }
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Numerical lab for fully nonlinear curvature flows"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = -1;
  std::string output_dir;
  std::vector<CLI::App*> subs;
  for (const char* name :
       {"run-flow", "analyze-noncollapse", "run-containment", "verify-linearized", "check-speeds"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--threads", threads, "worker threads (default: NONCOLLAPSE_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--output-dir", output_dir, "directory for CSVs and summary.json");
    sub->allow_extras();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ncflow::exit_code::parse_error;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    Overrides overrides = collect_overrides(chosen->remaining());
    overrides.emplace_back("command", '"' + chosen->get_name() + '"');
    if (threads >= 0)
      overrides.emplace_back("threads", std::to_string(threads));
    if (!output_dir.empty())
      overrides.emplace_back("output_dir", nlohmann::json(output_dir).dump());

    const nlohmann::json doc = ncflow::load_config_document(config_path, overrides);
    const ncflow::ExperimentConfig cfg = ncflow::parse_config(doc);
    const ncflow::RunOutcome outcome = ncflow::run_command(cfg, std::cout);
    std::cout << "exit " << outcome.exit_code << " (summary in "
              << (cfg.output_dir / "summary.json").string() << ")\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ncflow::exit_code_for(e);
  }
}
