#include <iostream>

#include <CLI11.hpp>

#include "acedoe/io.hpp"
#include "acedoe/parallel.hpp"
#include "acedoe/run_spec.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimal design for generalised linear models by approximate coordinate exchange"};
  std::string spec_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t workers = acedoe::default_workers();
  app.add_option("--spec", spec_path, "Run specification (YAML)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Root random seed (overrides the spec)");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory");
  app.set_version_flag("--version", std::string(acedoe::cli::kToolVersion));
  CLI11_PARSE(app, argc, argv);

  acedoe::cli::RunSpec spec;
  try {
    spec = acedoe::cli::parse_run_spec(acedoe::io::read_file(spec_path), spec_path);
  } catch (const acedoe::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  acedoe::cli::RunOptions opt;
  opt.out_dir = out_dir;
  opt.base_dir = std::filesystem::path(spec_path).parent_path();
  if (opt.base_dir.empty()) opt.base_dir = ".";
  if (*seed_opt) opt.seed = seed;
  opt.workers = workers;
  return acedoe::cli::run(spec, opt, std::cerr);
}
