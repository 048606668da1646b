// dbarlab command-line entry point.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dbarlab/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dbarlab::ValidationError("cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted dbar laboratory: exact (s,t)-form calculus, minimal-norm solves and "
               "reproducible experiments on Gaussian-weighted truncations"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::string form_path;
  std::string out_dir;
  unsigned jobs = 0;
  unsigned lempert_p = 0;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_dir, "output directory (overrides io.output)");
  app.add_option("--jobs", jobs, "worker threads (overrides experiment.jobs)");

  auto* verify = app.add_subcommand("verify", "run the exact identity suite on random forms");
  auto* solve = app.add_subcommand("solve", "minimal-norm solve of dbar u = f");
  solve->add_option("--form", form_path, "form literal file")->required();
  auto* sweep = app.add_subcommand("sweep", "solve across a range of truncation dimensions");
  auto* lempert = app.add_subcommand("lempert", "singular closed data via Hermite projection");
  lempert->add_option("--p", lempert_p, "power of the singular numerator");
  auto* mc = app.add_subcommand("mc", "Monte Carlo check of the ambient form norm");
  mc->add_option("--form", form_path, "form literal file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    dbarlab::RunConfig cfg;
    if (!config_path.empty()) cfg = dbarlab::parse_config(read_file(config_path));
    if (verify->parsed()) cfg.command = "verify";
    if (solve->parsed()) cfg.command = "solve";
    if (sweep->parsed()) cfg.command = "sweep";
    if (lempert->parsed()) cfg.command = "lempert";
    if (mc->parsed()) cfg.command = "mc";
    if (!form_path.empty()) cfg.io.input = form_path;
    if (!out_dir.empty()) cfg.io.output = out_dir;
    if (jobs != 0) cfg.experiment.jobs = jobs;
    if (lempert_p != 0) cfg.lempert_p = lempert_p;
    if (const char* env = std::getenv("DBARLAB_OUT")) cfg.io.output = env;
    if (const char* env = std::getenv("DBARLAB_JOBS")) {
      cfg.experiment.jobs = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (cfg.command.empty()) {
      throw dbarlab::ParseError("no command: pass a subcommand or set 'command' in the config");
    }
    return dbarlab::run_command(cfg);
  } catch (const dbarlab::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dbarlab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dbarlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
