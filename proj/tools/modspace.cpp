// Command-line harness: dilation sweeps with slope fits, identity
// verification, Hausdorff kernel condition checks, and exponent tables.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "modspace/experiments.hpp"

namespace {

using namespace modspace;

int write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  out << content;
  return 0;
}

int run_sweep(const SweepConfig& cfg) {
  SweepReport report = run_dilation_sweep(cfg);
  int rc = 0;
  if (cfg.format == "csv" || cfg.format == "both")
    rc = write_or_print(cfg.out.empty() ? "" : cfg.out + ".csv", report.to_csv());
  if (rc == 0 && (cfg.format == "json" || cfg.format == "both"))
    rc = write_or_print(cfg.out.empty() ? "" : cfg.out + ".json", report.to_json());
  if (rc != 0) return rc;
  std::size_t failed = 0;
  for (const auto& s : report.summaries)
    if (!s.pass) ++failed;
  std::fprintf(stderr, "sweep %s: %zu summaries, %zu failed, %.1f s\n", report.config_hash.c_str(),
               report.summaries.size(), failed, report.runtime_seconds);
  return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"modspace: modulation-space dilation and Hausdorff operator experiments"};
  app.require_subcommand(1);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "dilation-norm sweeps with slope fits");
  std::string cfg_path, exp_name, pq_list, family_list, out_path, format, pipeline;
  int dim = 0, lambda_steps = 0;
  double lambda_min = 0.0, lambda_max = 0.0, lattice = 0.0, tolerance = 0.0;
  sweep->add_option("--config", cfg_path, "config file (key = value, [sweep] section)");
  sweep->add_option("--exp", exp_name, "experiment id");
  sweep->add_option("--pq", pq_list, "exponent pairs, e.g. 2:2,4:2,inf:1");
  sweep->add_option("--dim", dim, "dimension");
  sweep->add_option("--family", family_list, "families: g1,g2,flam");
  sweep->add_option("--lambda-min", lambda_min, "smallest dyadic lambda (snapped to 2^-k)");
  sweep->add_option("--lambda-max", lambda_max, "largest dyadic lambda (snapped to 2^k)");
  sweep->add_option("--lambda-steps", lambda_steps, "number of dyadic lambda points");
  sweep->add_option("--L", lattice, "lattice spacing of the F_{lambda,L} family");
  sweep->add_option("--pipeline", pipeline, "norm pipeline: box | stft");
  sweep->add_option("--out", out_path, "report path base (writes <out>.csv / <out>.json)");
  sweep->add_option("--format", format, "csv | json | both");
  sweep->add_option("--tolerance", tolerance, "slope tolerance override");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run the identity verification suite");
  std::string verify_out;
  bool empty_corpus = false;
  verify->add_option("--out", verify_out, "write the table to a file");
  verify->add_flag("--empty-corpus", empty_corpus, "run with an empty corpus (emit empty table)");

  // ---- hausdorff ----
  auto* hausdorff = app.add_subcommand("hausdorff", "kernel condition checks");
  std::string kernel_path, hd_pq = "2:2", hd_out;
  bool with_minkowski = false;
  hausdorff->add_option("--kernel", kernel_path, "kernel definition file")->required();
  hausdorff->add_option("--pq", hd_pq, "exponent pairs");
  hausdorff->add_flag("--minkowski", with_minkowski, "also report the Minkowski-bound ratio");
  hausdorff->add_option("--out", hd_out, "write the table to a file");

  // ---- gamma ----
  auto* gamma = app.add_subcommand("gamma", "mu1/mu2/Gamma tables over the exponent square");
  int gamma_grid = 21;
  std::string gamma_lambdas = "0.25,0.5,1,2,4", gamma_out;
  gamma->add_option("--grid", gamma_grid, "grid points per axis of (1/p, 1/q)");
  gamma->add_option("--lambda", gamma_lambdas, "comma-separated lambda list");
  gamma->add_option("--out", gamma_out, "write the table to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      SweepConfig cfg;
      if (!cfg_path.empty()) {
        std::ifstream in(cfg_path);
        if (!in) {
          std::cerr << "error: cannot open config " << cfg_path << "\n";
          return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_sweep_config(ss.str(), cfg_path);
      }
      if (!exp_name.empty()) cfg.experiment = exp_name;
      if (!pq_list.empty()) cfg.pairs = parse_pq_list(pq_list);
      if (dim > 0) cfg.dim = dim;
      if (!family_list.empty()) {
        cfg.families.clear();
        std::istringstream fs(family_list);
        std::string f;
        while (std::getline(fs, f, ',')) cfg.families.push_back(f);
      }
      if (lambda_steps > 0) cfg.lambda_steps = lambda_steps;
      if (lambda_min > 0.0)
        cfg.lambda_steps = std::max(cfg.lambda_steps,
                                    static_cast<int>(std::lround(-std::log2(lambda_min))) + 1);
      if (lambda_max > 0.0)
        cfg.lambda_steps = std::max(cfg.lambda_steps,
                                    static_cast<int>(std::lround(std::log2(lambda_max))) + 2);
      if (lattice > 0.0) cfg.lattice_L = lattice;
      if (!pipeline.empty()) {
        if (pipeline == "box")
          cfg.pipeline = NormPipeline::Box;
        else if (pipeline == "stft")
          cfg.pipeline = NormPipeline::Stft;
        else
          throw std::runtime_error("pipeline must be box or stft");
      }
      if (!out_path.empty()) cfg.out = out_path;
      if (!format.empty()) cfg.format = format;
      if (tolerance > 0.0) {
        cfg.tol_envelope = cfg.tol_flam = tolerance;
        cfg.tol_single = std::min(cfg.tol_single, tolerance);
      }
      return run_sweep(cfg);
    }
    if (verify->parsed()) {
      IdentitySuiteOptions opts;
      opts.empty_corpus = empty_corpus;
      auto rows = run_identity_suite(opts);
      int rc = write_or_print(verify_out, identity_table_csv(rows));
      if (rc != 0) return rc;
      for (const auto& r : rows)
        if (!r.pass) return 1;
      return 0;
    }
    if (hausdorff->parsed()) {
      HausdorffKernel kernel = parse_kernel_file(kernel_path);
      auto pairs = parse_pq_list(hd_pq);
      auto rows = run_hausdorff_check(kernel, pairs, with_minkowski);
      std::ifstream in(kernel_path);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string hash = hash_hex(fnv1a(ss.str() + "|" + hd_pq));
      return write_or_print(hd_out, hausdorff_table_csv(rows, hash));
    }
    if (gamma->parsed()) {
      std::vector<double> ls;
      std::istringstream in(gamma_lambdas);
      std::string item;
      while (std::getline(in, item, ',')) ls.push_back(std::stod(item));
      return write_or_print(gamma_out, gamma_table_csv(gamma_grid, ls));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
