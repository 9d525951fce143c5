#ifndef MODSPACE_TF_HPP
#define MODSPACE_TF_HPP

#include <string>

#include "modspace/spectral.hpp"

namespace modspace {

// Uniform lattice nodes lo + i*step, i < count. Steps must be dyadic
// (2^k, k integer) so the FFT engine can align bins with lattice nodes.
struct TFAxis {
  double lo = 0.0;
  std::size_t count = 0;
  double step = 0.0;

  double node(std::size_t i) const { return lo + static_cast<double>(i) * step; }
  double max_abs() const;
  // Same node set mirrored through the origin (again a uniform lattice).
  TFAxis reflected() const { return {-lo - static_cast<double>(count - 1) * step, count, step}; }
  TFAxis scaled(double lambda) const { return {lo * lambda, count, step * lambda}; }
};

bool is_dyadic(double step);

// Time-frequency lattice: per-axis time nodes x and frequency nodes xi.
struct TFGrid {
  int dim = 1;
  std::array<TFAxis, kMaxGridDim> x;
  std::array<TFAxis, kMaxGridDim> xi;

  // Symmetric half-open lattices [-E, E) with power-of-two counts; extents
  // are rounded up so that the requested ranges are covered.
  static TFGrid symmetric(int dim, double x_extent, double x_step, double xi_extent, double xi_step);

  std::size_t x_count() const;
  std::size_t xi_count() const;
  void x_node(std::size_t flat, double* out) const;
  void xi_node(std::size_t flat, double* out) const;
  std::size_t x_flat(const std::size_t* idx) const;
  std::size_t xi_flat(const std::size_t* idx) const;
};

// STFT samples V_g f on a TF lattice, x-major layout:
// values[x_flat * xi_count + xi_flat].
struct TFCoefficients {
  TFGrid grid;
  std::vector<cplx> values;
  std::string window_tag;

  cplx at(std::size_t x_flat, std::size_t xi_flat) const {
    return values[x_flat * grid.xi_count() + xi_flat];
  }
};

// V_g f(x, xi) = int f(t) conj(g(t - x)) e^{-2 pi i t.xi} dt, computed per
// x-node by FFT over a window-length segment of a shared sample table.
// The window must be a tensor model (or 1-D) with a finite time radius.
TFCoefficients stft(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                    const std::string& window_tag = "window");

// Streaming variant: rows are handed to `sink` (possibly from worker threads,
// one call per x-node, disjoint x_flat values).
using StftSink = std::function<void(std::size_t x_flat, const cplx* xi_row)>;
void stft_stream(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                 const StftSink& sink);

// Deterministic parallel reduction support: x-nodes are split into nchunks
// fixed ranges; rows inside a chunk arrive in order from a single thread.
using ChunkedStftSink =
    std::function<void(std::size_t chunk, std::size_t x_flat, const cplx* xi_row)>;
void stft_stream_chunks(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                        std::size_t nchunks, const ChunkedStftSink& sink);

// Direct Riemann-sum evaluation at one phase-space point; the slow reference
// path used by tests and off-lattice checks.
cplx stft_direct(const FunctionModel& f, const FunctionModel& g, const double* x,
                 const double* xi, double dt = 1.0 / 64.0);

// max over the lattice of |V_g f(x,xi) e^{i corrupt} - e^{-2 pi i x.xi} V_{Fg} Ff(xi, -x)|.
double fundamental_identity_error(const FunctionModel& f, const FunctionModel& g,
                                  const TFGrid& grid, double corrupt_phase = 0.0);

// Partial variant: V_g f(x,w) vs e^{-2 pi i x_J.w_J} V_{F_J g} F_J f(w_J + x_Jc, -x_J + w_Jc).
double partial_fundamental_identity_error(const FunctionModel& f, const FunctionModel& g,
                                          const TFGrid& grid, AxisSet axes,
                                          double corrupt_phase = 0.0);

// V_{D_L phi}(D_L f)(x,xi) vs |det L|^{-1} V_phi f(Lx, L^{-T} xi) for diagonal
// positive L with dyadic entries.
double stft_dilation_identity_error(const FunctionModel& f, const FunctionModel& phi,
                                    const std::vector<double>& lambda, const TFGrid& grid);

} // namespace modspace

#endif
