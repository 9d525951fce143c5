#ifndef MODSPACE_HAUSDORFF_HPP
#define MODSPACE_HAUSDORFF_HPP

#include "modspace/dilation.hpp"

namespace modspace {

// Weight evaluator on the y-domain (n = 1 or 2; points passed as arrays).
using WeightFn = std::function<cplx(const double*)>;
using MatrixFn = std::function<Mat(const double*)>;

// Quadrature on a product of intervals (0 < lo_i < hi_i), log-spaced midpoint
// panels per octave. The declared domain may touch 0 or infinity; those ends
// are approached by dyadic panel refinement in the condition checkers.
struct YDomain {
  int n = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
};

struct HausdorffKernel {
  int n = 1;          // dimension of the y integration variable
  int d = 1;          // dimension the dilations act on
  WeightFn phi;
  MatrixFn matrix;    // y -> A(y)
  YDomain domain;
  std::size_t nodes = 256;
  bool diagonal = true;

  std::vector<std::vector<double>> node_points; // quadrature nodes (size n each)
  std::vector<double> node_weights;
  std::vector<DilationSpec> node_specs;         // per-node SVD cache
};

// Builds the node set (log-midpoint composite rule over the declared domain,
// lower/upper ends truncated dyadically when open) and caches per-node SVDs.
HausdorffKernel make_kernel(int n, int d, WeightFn phi, MatrixFn matrix, const YDomain& domain,
                            std::size_t nodes = 256);

struct IntegralVerdict {
  double value = 0.0;
  bool divergent = false;
  int refinements = 0;
};

// eq-style condition integrals over |Phi|, evaluated with dyadic domain
// refinement; divergence is declared when the refined estimates keep growing
// (successive ratio above 1.01 at the maximum refinement depth).
IntegralVerdict well_definedness_check(const HausdorffKernel& k);
IntegralVerdict boundedness_condition(const HausdorffKernel& k, const ExponentPair& e);

// H_{Phi,A} f as a function model (quadrature sum over the kernel nodes).
// Refuses kernels whose well-definedness integral diverges.
FunctionModel apply(const HausdorffKernel& k, const FunctionModel& f);

// Phi~(y) = conj(Phi(y)) prod lambda_j(y)^{-1}, matrix map y -> A(y)^{-1}.
HausdorffKernel adjoint_kernel(const HausdorffKernel& k);

// sup-norm lattice error of F_J H f = H' F_J f; proper subsets require a
// diagonal kernel. Grids are sized by `extent`/`npts`.
double fourier_commutation_error(const HausdorffKernel& k, AxisSet axes, const FunctionModel& f,
                                 double extent, std::size_t npts);

struct MinkowskiReport {
  double h_norm = 0.0;
  double condition = 0.0;
  double f_norm = 0.0;
  double ratio = 0.0; // h_norm / (condition * f_norm)
};

MinkowskiReport minkowski_bound_check(const HausdorffKernel& k, const FunctionModel& f,
                                      const ExponentPair& e, const FunctionModel& window,
                                      const NormOptions& opts = {});

// Kernel definition files: "key = value" lines, '#' comments. Keys:
//   n, dim, phi (hardy | power <alpha> | bump <center> <radius> | table:<path>),
//   A (scalar | diag <a_1> ... <a_dim>), domain (<lo> <hi>, hi may be inf),
//   nodes. See README for the exact schema.
HausdorffKernel parse_kernel_file(const std::string& path);
HausdorffKernel parse_kernel_text(const std::string& text, const std::string& origin = "<memory>");

} // namespace modspace

#endif
