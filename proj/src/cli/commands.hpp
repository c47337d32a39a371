#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "collinear/central_config.hpp"
#include "collinear/geometry.hpp"

namespace collinear::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 1,
  kCloseApproach = 2,
  kSolverFailure = 3,
  kHypothesisViolation = 4,
  kVerificationFailure = 5,
};

// Integrates the scenario and writes the trajectory and diagnostics CSVs. With
// no output paths the trajectory CSV goes to `out`.
int cmd_simulate(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

// Integrates the scenario and runs the matching verification reports. Control
// scenarios succeed when their collinearity check fails.
int cmd_verify(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

struct CcOptions {
  std::vector<double> masses;
  std::vector<PotentialTerm> potential{{-1.0, 1.0}};
  std::vector<std::size_t> ordering;  // empty: identity unless all is set
  bool all = false;
  Normalization normalization;
  bool json = false;
};

int cmd_cc(const CcOptions& options, std::ostream& out, std::ostream& err);

int cmd_geometry_count(std::int64_t n, std::ostream& out, std::ostream& err);

struct IntersectOptions {
  double c_U = 0;
  double c_I = 0;
  std::vector<double> masses{1.0, 1.0, 1.0};
  std::vector<PotentialTerm> potential{{-1.0, 1.0}};
  Ordering3 ordering{0, 1, 2};
  std::optional<DomainBox> box;
  std::size_t resolution = 256;
  std::string dump_path;
  bool json = false;
};

int cmd_geometry_intersect(const IntersectOptions& options, std::ostream& out, std::ostream& err);

struct TangencyOptions {
  std::vector<double> masses{1.0, 1.0, 1.0};
  std::vector<PotentialTerm> potential{{-1.0, 1.0}};
  std::size_t resolution = 256;
  bool json = false;
};

int cmd_geometry_tangency(const TangencyOptions& options, std::ostream& out, std::ostream& err);

// Runs cmd_verify (or cmd_simulate) on every config file using up to `jobs`
// threads; outputs are buffered per config and printed in argument order.
int cmd_batch(const std::vector<std::string>& configs, std::size_t jobs, bool simulate, std::ostream& out,
              std::ostream& err);

// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace collinear::cli
