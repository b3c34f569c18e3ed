#include "fqc/app/cli.hpp"

#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fqc/app/tasks.hpp"
#include "fqc/parallel.hpp"

namespace fqc::app {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional prescribed-curvature toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--seed", seed, "random seed (overrides [run] seed)");
  app.add_option("--threads", threads, "worker threads (overrides [run] threads)");
  const std::vector<std::pair<const char*, const char*>> tasks = {
      {"spectrum", "eigenvalues and Riesz kernel constants"},
      {"solve", "solve the curvature equation on the grid"},
      {"continue", "subcritical continuation with blow-up diagnostics"},
      {"diagnose", "blow-up diagnostics of one solution"},
      {"flatness", "flatness integrals, membership table and matrix M"},
      {"degree", "degree of the finite-dimensional obstruction field"},
      {"verify", "identity and oracle checks for the configured problem"},
      {"certify", "compactness certificate from the declared critical points"}};
  for (const auto& [name, help] : tasks) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  std::optional<ArtifactWriter> writer;
  std::string task_name;
  int rc = 0;
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    cfg.task = task_from_string(app.get_subcommands().front()->get_name());
    task_name = to_string(cfg.task);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const Context ctx = make_context(cfg);
    set_thread_count(cfg.threads);
    writer.emplace(cfg.out_dir, config_hash(cfg));
    rc = run_task(ctx, *writer, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    rc = 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    rc = 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    rc = 3;
  }
  if (writer) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      writer->manifest(task_name, wall, rc);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      if (rc == 0) rc = 2;
    }
  }
  return rc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fqc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fqc::app
