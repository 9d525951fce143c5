#ifndef MODSPACE_EXTREMAL_HPP
#define MODSPACE_EXTREMAL_HPP

#include "modspace/norms.hpp"

namespace modspace {

// Smooth bump supported on [-r, r], identically 1 on |x| <= 2r/3 (the plateau
// profile rescaled). Closed-form evaluator; Fourier transform table-backed.
FunctionModel bump_model(double r);

// Inverse Fourier transform of bump_model(r): band-limited with spectrum
// exactly inside [-r, r], table-backed evaluator, closed-form transform.
FunctionModel inv_bump_model(double r, double rel_cut = 1e-8);

// Relative-decay radius of the table profile: |h(x)| < rel * h(0) beyond
// inv_bump_radius(r, rel).
double inv_bump_radius(double r, double rel_cut);

// L^p norm of inv_bump_model(r) (table quadrature; p in [1, inf]).
double inv_bump_lp_norm(double r, double p);

// Band-limited g1 (spectrum in B(0,1)): tensor of inv_bump factors.
FunctionModel make_g1(int dim);
// Smooth g2 supported in B(0,1): tensor of spatial bump factors.
FunctionModel make_g2(int dim);

// Lattice sum F_{lambda,L} = sum_{|k|_inf <= 1/lambda} T_{Lk} M_k h with h the
// inverse transform of a bump supported in [-1/4,1/4]^d, normalized so that
// ||h||_{L^p} = 1. Carries a closed-form Fourier transform.
FunctionModel make_flam(double lambda, double L, int dim, double p_normalization = 2.0);
// Number of lattice terms (2 floor(1/lambda) + 1)^d.
std::size_t flam_term_count(double lambda, int dim);

enum class AxisKind { G1, G2, Gauss };

// Tensor of per-axis extremal factors, each dilated by its own lambda_j.
FunctionModel make_tensor_family(const std::vector<AxisKind>& kinds,
                                 const std::vector<double>& lambdas);

// One factor of the Prop-4.7-style family: (|.|^r chi_{[1/2, 2^{M+1}]}) * eta
// with eta a nonnegative band-limited mollifier, eta(0) = 1.
FunctionModel necessity_factor(double r_exponent, int M);
FunctionModel necessity_eta_1d();

// Full family: axis j carries exponent -1/q for j in J, -1/p otherwise.
FunctionModel make_hausdorff_necessity(AxisSet axes, int M, const ExponentPair& e, int dim);
// Predicted growth exponent |J|/q + (d-|J|)/p of the F_J-modulation norm in (M+2).
double necessity_growth_exponent(AxisSet axes, const ExponentPair& e, int dim);

enum class FamilyKind { BandlimitedG1, CompactG2, LatticeFlam, TensorMixed, HausdorffNecessity };

// A parametrized lower-bound family: generator(lambda) produces the member,
// ratio_exponent the expected slope of ||D_lambda member|| / ||member|| in
// log lambda, norm_exponent the slope of ||member(lambda)|| itself.
struct ExtremalFamily {
  FamilyKind kind = FamilyKind::BandlimitedG1;
  std::string name;
  int dim = 1;
  bool shrinking = true; // natural side: lambda <= 1 (else lambda >= 1)
  double lattice_spacing = 0.0;
  std::vector<double> lambdas;
  std::function<FunctionModel(double)> generator;
  std::function<double(const ExponentPair&, int)> ratio_exponent;
  std::function<double(const ExponentPair&, int)> norm_exponent;
};

std::vector<double> dyadic_lambdas(bool shrinking, int count);

ExtremalFamily g1_family(int dim);
ExtremalFamily g2_family(int dim);
ExtremalFamily flam_family(int dim, double L = 64.0, double p_normalization = 2.0);

} // namespace modspace

#endif
