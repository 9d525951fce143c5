#ifndef MODSPACE_SPECTRAL_HPP
#define MODSPACE_SPECTRAL_HPP

#include <vector>

#include "modspace/field.hpp"

namespace modspace {

// Axis subset as a bitmask (bit j = axis j selected).
using AxisSet = unsigned;

inline AxisSet all_axes(int dim) { return (1u << dim) - 1u; }
inline bool axis_in(AxisSet j, int axis) { return (j >> axis) & 1u; }
inline int axis_count(AxisSet j) { return __builtin_popcount(j); }

// Partial Fourier transform along the axes in `axes`, continuous convention
// e^{-2 pi i t.xi} carried by Riemann weights: each transformed axis gets the
// dual extent N/(4T). axes = 0 is the identity. Inverse uses e^{+2 pi i ...}.
SampledGrid partial_fourier(const SampledGrid& g, AxisSet axes, bool inverse = false);

inline SampledGrid fourier(const SampledGrid& g) { return partial_fourier(g, all_axes(g.dim)); }

// Partial Fourier transform on function models. Exact for tensors whose
// selected factors carry closed-form transforms; 1-D factors without one are
// transformed through a sampled table (band-limited trigonometric
// interpolation), which requires finite support hints.
FunctionModel partial_fourier(const FunctionModel& f, AxisSet axes, bool inverse = false);

// Band-limited interpolant of 1-D grid samples: evaluates the trigonometric
// polynomial with the grid's DFT coefficients. Bins below `prune` times the
// peak are dropped to keep evaluation cost proportional to the occupied band.
FunctionModel trig_interpolant(const SampledGrid& g, double prune = 1e-14);

// C^infty step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);
// 1-D plateau bump: 1 on |s| <= 1/2, 0 on |s| >= 3/4, smooth in between.
double plateau_bump(double s);

// Smooth partition of unity on unit frequency cubes: sigma_k = rho_k / sum rho_l
// with rho_k(xi) = prod_j plateau_bump(xi_j - k_j). Pieces with |k|_inf <= K are
// enumerated; the normalization makes them sum to 1 everywhere.
struct FrequencyPartition {
  int dim = 1;
  int index_radius = 1;

  double rho(const double* xi) const;
  double sigma(const int* k, const double* xi) const;
  // Number of enumerated indices (2K+1)^d and iteration helpers.
  std::size_t piece_count() const;
  void piece_index(std::size_t flat, int* k) const;
};

FrequencyPartition build_partition(int dim, int index_radius);

// Frequency-uniform decomposition piece: F^{-1}(sigma_k . F f) on the same grid.
SampledGrid box_op(const SampledGrid& f, const int* k, const FrequencyPartition& part);

// L^p norms of every piece box_op(f, k) for each requested exponent, computed
// through one forward transform and per-piece band inverses on a decimated
// grid (the piece spectrum fits far below the original Nyquist rate).
// Result layout: norms[flat_piece_index][p_index].
std::vector<std::vector<double>> box_piece_lp_norms(const SampledGrid& f,
                                                    const FrequencyPartition& part,
                                                    const std::vector<double>& ps);

// Fraction of spectral L^2 mass outside the box |xi|_inf <= radius.
double spectral_tail_fraction(const SampledGrid& spectrum, double radius);

} // namespace modspace

#endif
