#ifndef MODSPACE_NORMS_HPP
#define MODSPACE_NORMS_HPP

#include "modspace/tf.hpp"

namespace modspace {

// Lebesgue exponents in [1, infinity]; infinity is representable exactly.
struct ExponentPair {
  double p = 2.0;
  double q = 2.0;

  ExponentPair() = default;
  ExponentPair(double p_, double q_);

  double inv_p() const { return std::isinf(p) ? 0.0 : 1.0 / p; }
  double inv_q() const { return std::isinf(q) ? 0.0 : 1.0 / q; }
  // From reciprocals in [0, 1]; 0 maps to infinity.
  static ExponentPair from_inverse(double a, double b);
  std::string str() const;
};

// Mixed L^{p,q} norm of a TF lattice: inner L^p over the time nodes, outer
// L^q over the frequency nodes, Riemann weights step^{dim/exponent}; the sup
// replaces the sum at exponent infinity.
double mixed_norm(const TFCoefficients& coeffs, const ExponentPair& e);

// Inner integral over the *frequency* slot instead (the axis order of
// V_g f(xi, -x) appearing in the fundamental identity).
double mixed_norm_swapped(const TFCoefficients& coeffs, const ExponentPair& e);

struct NormOptions {
  double x_step = 0.0;   // 0 = 1/8 (d = 1), 1/4 (d = 2)
  double xi_step = 0.0;
  double pad = 2.0;      // lattice margin beyond declared supports
  bool tensor_fastpath = false;
};

// Lattice sized from the support hints of f and the window.
TFGrid default_tf_grid(const FunctionModel& f, const FunctionModel& window,
                       const NormOptions& opts = {});

// ||V_window f||_{L^{p,q}} on the given lattice.
double modulation_norm_stft(const FunctionModel& f, const ExponentPair& e,
                            const FunctionModel& window, const TFGrid& grid);

// Stream many exponent pairs through one STFT pass (fixed-chunk reduction,
// bit-reproducible for any worker count).
std::vector<double> modulation_norms_stft(const FunctionModel& f, const FunctionModel& window,
                                          const TFGrid& grid, const std::vector<ExponentPair>& es,
                                          bool swapped = false);

// Auto-sized variant; with tensor_fastpath set and tensor inputs the norm is
// assembled as the exact product of per-axis one-dimensional norms.
double modulation_norm_auto(const FunctionModel& f, const ExponentPair& e,
                            const FunctionModel& window, const NormOptions& opts = {});

// Discrete-definition norm: l^q over k of ||box_op(f, k)||_{L^p}. Requires the
// spectrum to sit inside the covered box (L^2 tail below leak_tol).
double modulation_norm_box(const SampledGrid& f, const ExponentPair& e,
                           const FrequencyPartition& part, double leak_tol = 1e-6);
std::vector<double> modulation_norms_box(const SampledGrid& f, const FrequencyPartition& part,
                                         const std::vector<ExponentPair>& es,
                                         double leak_tol = 1e-6);

// ||F f||_{L^q} on a grid sized by the arguments; f should be (declared)
// compactly supported.
double local_fl_q_norm(const FunctionModel& f, double q, double extent, std::size_t n);

// L^{q,p}(R^J x R^{d-J}) norm of grid samples: inner L^q over the axes in J,
// outer L^p over the rest.
double lqp_norm(const SampledGrid& g, AxisSet axes, const ExponentPair& e);

// ||F_J^{-1} f||_{M^{p,q}}: the J axes are inverse-transformed (exactly for
// tensors, through a sampled table otherwise), then the modulation norm is
// taken. Tensor inputs are reduced axis by axis.
double partial_fourier_modulation_norm(const FunctionModel& f, AxisSet axes,
                                       const ExponentPair& e, const FunctionModel& window,
                                       const NormOptions& opts = {});

} // namespace modspace

#endif
