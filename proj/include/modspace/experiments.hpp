#ifndef MODSPACE_EXPERIMENTS_HPP
#define MODSPACE_EXPERIMENTS_HPP

#include "modspace/extremal.hpp"
#include "modspace/hausdorff.hpp"

namespace modspace {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least-squares line through (log lambda, log value); needs >= 4 points.
FitResult fit_loglog(const std::vector<double>& lambdas, const std::vector<double>& values);

enum class NormPipeline { Box, Stft };

// Discrete-definition norms on an automatically sized grid/partition.
std::vector<double> box_norms_auto(const FunctionModel& f, const std::vector<ExponentPair>& es);

struct SweepConfig {
  std::string experiment = "dilation";
  int dim = 1;
  std::vector<std::string> families = {"g1", "g2", "flam"};
  std::vector<ExponentPair> pairs = {ExponentPair(2, 2)};
  int lambda_steps = 7;                    // shrinking side; the expanding side uses steps - 1
  double lattice_L = 64.0;
  NormPipeline pipeline = NormPipeline::Box;
  double tol_single = 0.05;                // g1 / g2 slope tolerance
  double tol_flam = 0.1;
  double tol_envelope = 0.1;
  std::string out;                         // report path base ("" = stdout only)
  std::string format = "csv";              // csv | json | both

  std::string canonical() const;           // normalized key=value block (hashed)
};

struct SweepRow {
  std::string family;
  ExponentPair e;
  double lambda = 0.0;
  double norm = 0.0;         // ||member(lambda)||
  double dilated_norm = 0.0; // ||D_lambda member(lambda)||
  double ratio = 0.0;
};

struct SweepSummary {
  std::string family; // family name, "<family>-norm", or "envelope-mu1/mu2"
  ExponentPair e;
  double slope = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SweepReport {
  std::string experiment;
  std::string config_hash;
  int dim = 1;
  std::vector<SweepRow> rows;
  std::vector<SweepSummary> summaries;
  double runtime_seconds = 0.0; // console diagnostics only; never serialized

  bool all_pass() const;
  std::string to_csv() const;
  std::string to_json() const;
};

SweepReport run_dilation_sweep(const SweepConfig& config);

// Parses the "key = value" sections config format; section [sweep] feeds
// SweepConfig. Unknown keys are errors (line numbers reported).
SweepConfig parse_sweep_config(const std::string& text, const std::string& origin = "<config>");

struct IdentityResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentitySuiteOptions {
  bool empty_corpus = false;   // run nothing, emit an empty table
  double corrupt_phase = 0.0;  // injected into the d=1 fundamental identity check
};

std::vector<IdentityResult> run_identity_suite(const IdentitySuiteOptions& opts = {});
std::string identity_table_csv(const std::vector<IdentityResult>& rows);

struct HausdorffRow {
  ExponentPair e;
  double well_def = 0.0;
  bool well_def_divergent = false;
  double bound = 0.0;
  bool bound_divergent = false;
  double minkowski_ratio = 0.0;
  bool has_ratio = false;
};

std::vector<HausdorffRow> run_hausdorff_check(const HausdorffKernel& kernel,
                                              const std::vector<ExponentPair>& pairs,
                                              bool with_minkowski);
std::string hausdorff_table_csv(const std::vector<HausdorffRow>& rows,
                                const std::string& config_hash);

// mu1/mu2/Gamma table over a uniform (1/p, 1/q) grid.
std::string gamma_table_csv(int grid_steps, const std::vector<double>& lambdas);

std::vector<ExponentPair> parse_pq_list(const std::string& text);

} // namespace modspace

#endif
