#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acedoe/ace.hpp"
#include "acedoe/error.hpp"
#include "acedoe/glm.hpp"
#include "acedoe/loss.hpp"
#include "acedoe/prior.hpp"

namespace acedoe::cli {

/// Spec parse/validation failure carrying the 1-based line it refers to (0 if unknown).
class SpecError : public DomainError {
 public:
  SpecError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Command { Optimize, Evaluate, Construct };
enum class ModelId { Logistic, Poisson, Helicopter, Custom };

std::string_view to_string(Command c);
std::string_view to_string(ModelId m);

struct CustomModel {
  Family family = Family::PoissonLog;
  Predictor predictor = Predictor::FirstOrder;
  std::size_t vars = 1;
  std::size_t runs = 1;
  std::vector<Interval> bounds;
  std::vector<Marginal> coefficients;
  std::optional<Marginal> dispersion;
  PointMatrix grid;
  HelicopterGeometry geometry;
};

struct DesignRef {
  std::string name;
  std::optional<std::filesystem::path> file;  // zoo design when absent
};

struct RunSpec {
  Command command = Command::Optimize;
  ModelId model = ModelId::Logistic;
  double alpha = 0.5;
  LossKind loss = LossKind::SIL;
  std::size_t quadrature_nodes = 5;
  std::optional<std::size_t> runs;
  AceConfig ace;
  std::size_t replicates = 20;
  std::size_t eval_mc_size = 20000;
  std::vector<DesignRef> designs;
  std::string construct;
  std::size_t lh_restarts = 100;
  std::uint64_t seed = 0;
  std::optional<CustomModel> custom;
  std::string text;  // original document, hashed into the manifest
};

RunSpec parse_run_spec(std::string_view text, const std::string& source = "<spec>");

/// Model, prior, loss and design space described by the spec.
DesignProblem build_problem(const RunSpec& spec);

/// Zoo design by name: ccd, mspbd, v-optimal, ff-plus, ff-minus, maximin-lh.
Design construct_design(const RunSpec& spec, const std::string& name, std::uint64_t seed);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::filesystem::path base_dir = ".";  // resolves relative design files
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
};

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Executes the spec and writes its outputs. Returns 0 on success, 2 on invalid
/// input, 3 on numerical failure; diagnostics go to `log`.
int run(const RunSpec& spec, const RunOptions& options, std::ostream& log);

}  // namespace acedoe::cli
