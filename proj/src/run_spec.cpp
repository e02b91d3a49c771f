#include "acedoe/run_spec.hpp"

#include <set>

#include <yaml-cpp/yaml.h>

#include "acedoe/case_studies.hpp"
#include "acedoe/zoo.hpp"

namespace acedoe::cli {
namespace {

std::size_t line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? static_cast<std::size_t>(n.Mark().line) + 1 : 0; }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    throw SpecError(source_, line_of(at), what);
  }

  void expect_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(n, what + " must be a mapping");
  }

  void only_keys(const YAML::Node& n, std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  template <class T>
  T as(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "cannot read " + what);
    }
  }

  std::size_t count(const YAML::Node& n, const std::string& what, std::size_t min = 1) const {
    const auto v = as<long long>(n, what);
    if (v < static_cast<long long>(min)) fail(n, what + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  double real(const YAML::Node& n, const std::string& what) const { return as<double>(n, what); }

  Interval interval(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, what + " must be a [lo, hi] pair");
    const Interval iv{real(n[0], what), real(n[1], what)};
    if (!(iv.lo < iv.hi)) fail(n, what + " needs lo < hi");
    return iv;
  }

  Marginal marginal(const YAML::Node& n) const {
    expect_map(n, "prior marginal");
    if (n.size() != 1) fail(n, "prior marginal needs exactly one of uniform, normal, point");
    const auto key = n.begin()->first.as<std::string>();
    const YAML::Node v = n.begin()->second;
    if (key == "uniform") {
      const Interval iv = interval(v, "uniform marginal");
      return Uniform{iv.lo, iv.hi};
    }
    if (key == "normal") {
      if (!v.IsSequence() || v.size() != 2) fail(v, "normal marginal must be [mean, variance]");
      const double var = real(v[1], "normal variance");
      if (!(var > 0.0)) fail(v, "normal variance must be positive");
      return Normal{real(v[0], "normal mean"), var};
    }
    if (key == "point") return PointMass{real(v, "point mass")};
    fail(n, "unknown marginal '" + key + "'");
  }

  PointMatrix points(const YAML::Node& n, std::size_t q, const std::string& what) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, what + " must be a nonempty list of points");
    PointMatrix out(static_cast<Eigen::Index>(n.size()), static_cast<Eigen::Index>(q));
    for (std::size_t i = 0; i < n.size(); ++i) {
      const YAML::Node row = n[i];
      if (!row.IsSequence() || row.size() != q) fail(row, what + " points need " + std::to_string(q) + " coordinates");
      for (std::size_t j = 0; j < q; ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = real(row[j], what + " coordinate");
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

Family parse_family(const Reader& r, const YAML::Node& n) {
  const auto s = r.as<std::string>(n, "family");
  if (s == "bernoulli-logit") return Family::BernoulliLogit;
  if (s == "poisson-log") return Family::PoissonLog;
  if (s == "gamma-log") return Family::GammaLog;
  r.fail(n, "unknown family '" + s + "' (bernoulli-logit, poisson-log, gamma-log)");
}

Predictor parse_predictor(const Reader& r, const YAML::Node& n) {
  const auto s = r.as<std::string>(n, "predictor");
  if (s == "first-order") return Predictor::FirstOrder;
  if (s == "second-order") return Predictor::SecondOrder;
  if (s == "helicopter") return Predictor::Helicopter;
  r.fail(n, "unknown predictor '" + s + "' (first-order, second-order, helicopter)");
}

LossKind parse_loss(const Reader& r, const YAML::Node& n) {
  const auto s = r.as<std::string>(n, "loss");
  if (s == "SIL" || s == "sil") return LossKind::SIL;
  if (s == "SEL" || s == "sel") return LossKind::SEL;
  if (s == "PseudoD" || s == "pseudo-d") return LossKind::PseudoD;
  r.fail(n, "unknown loss '" + s + "' (SIL, SEL, PseudoD)");
}

CustomModel parse_custom(const Reader& r, const YAML::Node& n) {
  r.expect_map(n, "custom");
  r.only_keys(n, {"family", "predictor", "vars", "runs", "bounds", "prior", "dispersion", "grid", "geometry"});
  for (const char* k : {"family", "predictor", "vars", "runs", "bounds", "prior"})
    if (!n[k]) r.fail(n, std::string("custom model needs '") + k + "'");
  CustomModel c;
  c.family = parse_family(r, n["family"]);
  c.predictor = parse_predictor(r, n["predictor"]);
  c.vars = r.count(n["vars"], "vars");
  c.runs = r.count(n["runs"], "runs");
  const YAML::Node b = n["bounds"];
  if (!b.IsSequence() || b.size() != c.vars) r.fail(b, "bounds need one [lo, hi] pair per variable");
  for (const auto& iv : b) c.bounds.push_back(r.interval(iv, "bounds"));
  const YAML::Node p = n["prior"];
  if (!p.IsSequence() || p.size() == 0) r.fail(p, "prior must be a list of marginals");
  for (const auto& m : p) c.coefficients.push_back(r.marginal(m));
  if (n["dispersion"]) c.dispersion = r.marginal(n["dispersion"]);
  if (n["grid"]) c.grid = r.points(n["grid"], c.vars, "grid");
  if (n["geometry"]) {
    const YAML::Node g = n["geometry"];
    r.expect_map(g, "geometry");
    r.only_keys(g, {"drop_height", "gravity", "air_density", "paper_density", "body_length", "tail_width"});
    auto set = [&](const char* key, double& field) {
      if (g[key]) field = r.real(g[key], key);
    };
    set("drop_height", c.geometry.drop_height);
    set("gravity", c.geometry.gravity);
    set("air_density", c.geometry.air_density);
    set("paper_density", c.geometry.paper_density);
    set("body_length", c.geometry.body_length);
    set("tail_width", c.geometry.tail_width);
  }
  try {
    GlmModel model(c.family, c.predictor, c.vars, c.geometry);
    model.check_prior(PriorSpec(c.coefficients, c.dispersion));
  } catch (const DomainError& e) {
    r.fail(n, std::string("custom model: ") + e.what());
  }
  return c;
}

}  // namespace

SpecError::SpecError(const std::string& source, std::size_t line, const std::string& what)
    : DomainError(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Optimize:
      return "optimize";
    case Command::Evaluate:
      return "evaluate";
    case Command::Construct:
      return "construct";
  }
  return "?";
}

std::string_view to_string(ModelId m) {
  switch (m) {
    case ModelId::Logistic:
      return "logistic-3var";
    case ModelId::Poisson:
      return "poisson-5var";
    case ModelId::Helicopter:
      return "helicopter";
    case ModelId::Custom:
      return "custom";
  }
  return "?";
}

RunSpec parse_run_spec(std::string_view text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw SpecError(source, static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
  if (!root.IsMap()) throw SpecError(source, 0, "spec must be a mapping of keys to values");
  r.only_keys(root, {"command", "model", "alpha", "loss", "quadrature_nodes", "runs", "seed", "ace", "evaluate",
                     "construct", "custom"});

  RunSpec spec;
  spec.text = std::string(text);
  if (!root["command"]) throw SpecError(source, 1, "missing 'command' (optimize, evaluate, construct)");
  {
    const auto c = r.as<std::string>(root["command"], "command");
    if (c == "optimize")
      spec.command = Command::Optimize;
    else if (c == "evaluate")
      spec.command = Command::Evaluate;
    else if (c == "construct")
      spec.command = Command::Construct;
    else
      r.fail(root["command"], "unknown command '" + c + "' (optimize, evaluate, construct)");
  }
  if (!root["model"]) throw SpecError(source, 1, "missing 'model'");
  {
    const auto m = r.as<std::string>(root["model"], "model");
    if (m == "logistic-3var")
      spec.model = ModelId::Logistic;
    else if (m == "poisson-5var")
      spec.model = ModelId::Poisson;
    else if (m == "helicopter")
      spec.model = ModelId::Helicopter;
    else if (m == "custom")
      spec.model = ModelId::Custom;
    else
      r.fail(root["model"], "unknown model '" + m + "' (logistic-3var, poisson-5var, helicopter, custom)");
  }

  spec.loss = spec.model == ModelId::Helicopter ? LossKind::SEL : LossKind::SIL;
  if (root["loss"]) spec.loss = parse_loss(r, root["loss"]);
  if (root["alpha"]) {
    spec.alpha = r.real(root["alpha"], "alpha");
    if (!(spec.alpha > 0.0)) r.fail(root["alpha"], "alpha must be positive");
  }
  if (root["quadrature_nodes"]) spec.quadrature_nodes = r.count(root["quadrature_nodes"], "quadrature_nodes");
  if (root["runs"]) spec.runs = r.count(root["runs"], "runs");
  if (root["seed"]) spec.seed = r.as<std::uint64_t>(root["seed"], "seed");

  if (const YAML::Node a = root["ace"]) {
    r.expect_map(a, "ace");
    r.only_keys(a, {"B", "Q", "B_tilde", "sweeps", "restarts", "order"});
    if (a["B"]) spec.ace.mc_size = r.count(a["B"], "B", 2);
    if (a["Q"]) spec.ace.candidates = r.count(a["Q"], "Q", 3);
    if (a["B_tilde"]) spec.ace.accept_size = r.count(a["B_tilde"], "B_tilde", 30);
    if (a["sweeps"]) spec.ace.sweeps = r.count(a["sweeps"], "sweeps", 0);
    if (a["restarts"]) spec.ace.restarts = r.count(a["restarts"], "restarts");
    if (a["order"]) {
      const auto o = r.as<std::string>(a["order"], "order");
      if (o == "row-major") spec.ace.order = VisitOrder::RowMajor;
      else if (o == "column-major") spec.ace.order = VisitOrder::ColumnMajor;
      else r.fail(a["order"], "unknown visit order '" + o + "' (row-major, column-major)");
    }
  }
  if (const YAML::Node e = root["evaluate"]) {
    r.expect_map(e, "evaluate");
    r.only_keys(e, {"replicates", "mc_size", "designs"});
    if (e["replicates"]) spec.replicates = r.count(e["replicates"], "replicates");
    if (e["mc_size"]) spec.eval_mc_size = r.count(e["mc_size"], "mc_size", 2);
    if (const YAML::Node ds = e["designs"]) {
      if (!ds.IsSequence()) r.fail(ds, "designs must be a list");
      for (const auto& d : ds) {
        r.expect_map(d, "design entry");
        r.only_keys(d, {"name", "file"});
        if (!d["name"]) r.fail(d, "design entry needs a name");
        DesignRef ref{r.as<std::string>(d["name"], "design name"), std::nullopt};
        if (d["file"]) ref.file = r.as<std::string>(d["file"], "design file");
        spec.designs.push_back(std::move(ref));
      }
    }
  }
  if (const YAML::Node c = root["construct"]) {
    r.expect_map(c, "construct");
    r.only_keys(c, {"design", "restarts"});
    if (c["design"]) spec.construct = r.as<std::string>(c["design"], "construct design");
    if (c["restarts"]) spec.lh_restarts = r.count(c["restarts"], "restarts");
  }
  if (spec.model == ModelId::Custom) {
    if (!root["custom"]) throw SpecError(source, 1, "model 'custom' needs a 'custom' block");
    spec.custom = parse_custom(r, root["custom"]);
    if (spec.loss == LossKind::SEL && spec.custom->grid.rows() == 0)
      r.fail(root["custom"], "SEL with a custom model needs a 'grid'");
  } else if (root["custom"]) {
    r.fail(root["custom"], "'custom' block given but model is not 'custom'");
  }

  if (spec.command == Command::Evaluate && spec.designs.empty())
    throw SpecError(source, 1, "evaluate needs evaluate.designs");
  if (spec.command == Command::Construct && spec.construct.empty())
    throw SpecError(source, 1, "construct needs construct.design");
  return spec;
}

DesignProblem build_problem(const RunSpec& spec) {
  LossSpec loss{spec.loss, spec.ace.mc_size, {}, spec.quadrature_nodes};
  DesignProblem problem = [&]() -> DesignProblem {
    switch (spec.model) {
      case ModelId::Logistic:
        return cases::logistic_problem(loss);
      case ModelId::Poisson:
        return cases::poisson_problem(spec.alpha, loss);
      case ModelId::Helicopter:
        return cases::helicopter_problem(loss);
      case ModelId::Custom: {
        const CustomModel& c = *spec.custom;
        loss.prediction_grid = c.grid;
        return {GlmModel(c.family, c.predictor, c.vars, c.geometry), PriorSpec(c.coefficients, c.dispersion), loss,
                c.bounds, c.runs};
      }
    }
    throw DomainError("unknown model");
  }();
  if (spec.loss == LossKind::SEL && problem.loss.prediction_grid.rows() == 0)
    throw DomainError("SEL loss needs a prediction grid for model " + std::string(to_string(spec.model)));
  if (spec.runs) problem.runs = *spec.runs;
  problem.validate();
  return problem;
}

Design construct_design(const RunSpec& spec, const std::string& name, std::uint64_t seed) {
  const auto need = [&](ModelId m) {
    if (spec.model != m)
      throw DomainError("design '" + name + "' is defined for model " + std::string(to_string(m)));
  };
  if (name == "ccd") {
    need(ModelId::Logistic);
    return ccd_design(3, ccd_orthogonal_axial(8, 16), 2);
  }
  if (name == "mspbd") {
    need(ModelId::Poisson);
    return mspbd_design(cases::poisson_prior_means(spec.alpha));
  }
  if (name == "v-optimal") {
    need(ModelId::Helicopter);
    return v_optimal_helicopter();
  }
  if (name == "ff-plus" || name == "ff-minus") {
    need(ModelId::Helicopter);
    return fractional_factorial_23_1(name == "ff-plus" ? 1 : -1, cases::helicopter_bounds());
  }
  if (name == "maximin-lh") {
    const DesignProblem p = build_problem(spec);
    Rng rng = make_stream(seed, {name_key("maximin-lh")});
    return maximin_lh(p.runs, p.model.num_vars(), spec.lh_restarts, rng, p.bounds);
  }
  throw DomainError("unknown design '" + name + "' (ccd, mspbd, v-optimal, ff-plus, ff-minus, maximin-lh)");
}

}  // namespace acedoe::cli
