#include <chrono>
#include <ctime>
#include <ostream>

#include <json.hpp>

#include "acedoe/case_studies.hpp"
#include "acedoe/io.hpp"
#include "acedoe/run_spec.hpp"
#include "acedoe/zoo.hpp"

namespace acedoe::cli {
namespace {

using nlohmann::json;

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json design_extras(const RunSpec& spec, const Design& d) {
  json j = json::object();
  j["runs"] = d.runs();
  j["bounds"] = json::array();
  for (const auto& b : d.bounds()) j["bounds"].push_back(interval_json(b));
  if (spec.model == ModelId::Helicopter) {
    j["neglog_pi1"] = json::array();
    for (std::size_t i = 0; i < d.runs(); ++i) j["neglog_pi1"].push_back(helicopter_neglog_pi1(d.row(i)));
  }
  return j;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_json(const std::filesystem::path& p, const json& j) { io::atomic_write(p, j.dump(2) + "\n"); }

void write_manifest(const RunSpec& spec, const RunOptions& opt, std::uint64_t seed, const std::vector<std::string>& files) {
  json m;
  m["tool"] = "acedoe";
  m["version"] = std::string(kToolVersion);
  m["command"] = std::string(to_string(spec.command));
  m["model"] = std::string(to_string(spec.model));
  m["spec_sha256"] = io::sha256_hex(spec.text);
  m["seed"] = seed;
  m["files"] = files;
  m["created_utc"] = utc_now();
  write_json(opt.out_dir / "manifest.json", m);
}

json summary_json(const EvalSummary& s) {
  return {{"design", s.design},   {"loss_kind", std::string(to_string(s.kind))},
          {"mc_size", s.mc_size}, {"replicates", s.estimates.size()},
          {"min", s.min},         {"q1", s.q1},
          {"median", s.median},   {"q3", s.q3},
          {"max", s.max}};
}

int run_optimize(const RunSpec& spec, const RunOptions& opt, std::uint64_t seed, std::ostream& log) {
  const DesignProblem problem = build_problem(spec);
  AceConfig cfg = spec.ace;
  cfg.seed = seed;
  cfg.workers = opt.workers;
  log << "optimizing " << to_string(spec.model) << " (" << to_string(spec.loss) << "), " << cfg.restarts
      << " restarts x " << cfg.sweeps << " sweeps\n";
  const AceResult res = ace_optimize(problem, cfg);

  io::atomic_write(opt.out_dir / "design.csv", io::design_csv(res.design));
  io::atomic_write(opt.out_dir / "trace.csv", io::trace_csv(res.trace));

  json s;
  s["command"] = "optimize";
  s["model"] = std::string(to_string(spec.model));
  s["loss_kind"] = std::string(to_string(spec.loss));
  s["estimate"] = res.estimate;
  s["std_error"] = res.std_error;
  s["best_restart"] = res.best_restart;
  s["restart_estimates"] = res.restart_estimates;
  s["sweeps"] = json::array();
  for (const auto& sw : res.sweeps)
    s["sweeps"].push_back({{"restart", sw.restart}, {"sweep", sw.sweep}, {"estimate", sw.estimate}, {"std_error", sw.std_error}});
  double max_skew = 0.0;
  for (const auto& t : res.trace) max_skew = std::max({max_skew, std::abs(t.skew_proposed), std::abs(t.skew_current)});
  s["max_abs_loss_skewness"] = max_skew;
  s["near_coincident_rows"] = json::array();
  for (const auto& [a, b] : res.near_coincident) s["near_coincident_rows"].push_back({a + 1, b + 1});
  s["design"] = design_extras(spec, res.design);
  write_json(opt.out_dir / "summary.json", s);
  write_manifest(spec, opt, seed, {"design.csv", "trace.csv", "summary.json"});
  log << "final " << to_string(spec.loss) << " estimate " << res.estimate << " (se " << res.std_error << ")\n";
  return 0;
}

int run_evaluate(const RunSpec& spec, const RunOptions& opt, std::uint64_t seed, std::ostream& log) {
  const DesignProblem problem = build_problem(spec);
  std::vector<NamedDesign> designs;
  for (const auto& ref : spec.designs) {
    if (ref.file) {
      const auto path = ref.file->is_absolute() ? *ref.file : opt.base_dir / *ref.file;
      designs.push_back({ref.name, io::read_design_csv(path, problem.bounds)});
    } else {
      designs.push_back({ref.name, construct_design(spec, ref.name, seed)});
    }
  }
  log << "evaluating " << designs.size() << " designs, " << spec.replicates << " replicates at B = " << spec.eval_mc_size
      << "\n";
  const auto summaries = evaluate_designs(designs, problem.model, problem.prior, problem.loss, spec.replicates,
                                          spec.eval_mc_size, seed, opt.workers);
  io::atomic_write(opt.out_dir / "estimates.csv", io::estimates_csv(summaries));
  json s;
  s["command"] = "evaluate";
  s["model"] = std::string(to_string(spec.model));
  s["summaries"] = json::array();
  for (const auto& es : summaries) {
    s["summaries"].push_back(summary_json(es));
    log << es.design << ": median " << es.median << " [" << es.q1 << ", " << es.q3 << "]\n";
  }
  write_json(opt.out_dir / "summary.json", s);
  write_manifest(spec, opt, seed, {"estimates.csv", "summary.json"});
  return 0;
}

int run_construct(const RunSpec& spec, const RunOptions& opt, std::uint64_t seed, std::ostream& log) {
  const Design d = construct_design(spec, spec.construct, seed);
  io::atomic_write(opt.out_dir / "design.csv", io::design_csv(d));
  json s;
  s["command"] = "construct";
  s["model"] = std::string(to_string(spec.model));
  s["name"] = spec.construct;
  s["design"] = design_extras(spec, d);
  if (spec.construct == "mspbd") {
    const MspbdSpec m = mspbd_spec(cases::poisson_prior_means(spec.alpha));
    s["gamma"] = std::vector<double>(m.gamma.data(), m.gamma.data() + m.gamma.size());
  }
  write_json(opt.out_dir / "summary.json", s);
  write_manifest(spec, opt, seed, {"design.csv", "summary.json"});
  log << "wrote " << spec.construct << " design with " << d.runs() << " runs\n";
  return 0;
}

}  // namespace

int run(const RunSpec& spec, const RunOptions& options, std::ostream& log) {
  const std::uint64_t seed = options.seed.value_or(spec.seed);
  try {
    std::filesystem::create_directories(options.out_dir);
    switch (spec.command) {
      case Command::Optimize:
        return run_optimize(spec, options, seed, log);
      case Command::Evaluate:
        return run_evaluate(spec, options, seed, log);
      case Command::Construct:
        return run_construct(spec, options, seed, log);
    }
  } catch (const NumericalError& e) {
    log << "error: numerical failure in " << e.estimator() << ": " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace acedoe::cli
