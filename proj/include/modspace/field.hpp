#ifndef MODSPACE_FIELD_HPP
#define MODSPACE_FIELD_HPP

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "modspace/matrix.hpp"
#include "modspace/util.hpp"

namespace modspace {

constexpr int kMaxGridDim = 3;

// Declared effective supports of f and of its Fourier transform. Radii are
// upper bounds in the Euclidean norm; infinity means "unknown".
struct SupportHint {
  double time_radius = std::numeric_limits<double>::infinity();
  double freq_radius = std::numeric_limits<double>::infinity();
};

using Evaluator = std::function<cplx(const double*)>;

// A function on R^d as an exact pointwise evaluator, with an optional exact
// Fourier transform (convention e^{-2 pi i t.xi}). Group operations compose
// evaluators, so no resampling error enters before norm evaluation.
// Immutable after construction; evaluators must be callable concurrently.
struct FunctionModel {
  int dim = 1;
  Evaluator evaluate;
  Evaluator fourier; // may be empty
  SupportHint hint;
  // Retained tensor structure (each factor dim 1); empty if not a tensor.
  std::shared_ptr<const std::vector<FunctionModel>> factors;

  bool has_fourier() const { return static_cast<bool>(fourier); }
  bool is_tensor() const { return factors && static_cast<int>(factors->size()) == dim; }

  cplx operator()(const double* x) const { return evaluate(x); }
  cplx operator()(double x) const { return evaluate(&x); }
  cplx operator()(double x, double y) const {
    double p[2] = {x, y};
    return evaluate(p);
  }
};

// Uniform grid samples on the box prod_j [-T_j, T_j), N_j points per axis
// (powers of two, N >= 8), row-major storage.
struct SampledGrid {
  int dim = 1;
  std::array<double, kMaxGridDim> extent{};
  std::array<std::size_t, kMaxGridDim> npts{};
  std::vector<cplx> values;

  double spacing(int axis) const { return 2.0 * extent[axis] / static_cast<double>(npts[axis]); }
  double coord(int axis, std::size_t i) const { return -extent[axis] + static_cast<double>(i) * spacing(axis); }
  std::size_t size() const {
    std::size_t s = 1;
    for (int j = 0; j < dim; ++j) s *= npts[j];
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int j = 0; j < dim; ++j) v *= spacing(j);
    return v;
  }
  void check_shape() const;
};

// Grid-size guard for sample(); N^d above this is refused.
std::size_t grid_point_cap();
void set_grid_point_cap(std::size_t cap);

FunctionModel constant(int dim, cplx value);
// e^{-pi |t|^2}, self-dual under the Fourier transform.
FunctionModel gaussian(int dim);
// L^2-normalized Gaussian window 2^{d/4} e^{-pi |t|^2}.
FunctionModel gaussian_window(int dim);
// e^{-pi sum_j a_j t_j^2}, a_j > 0; Fourier transform closed form.
FunctionModel gaussian_anisotropic(const std::vector<double>& a);

FunctionModel translate(const FunctionModel& f, const std::vector<double>& x);
FunctionModel modulate(const FunctionModel& f, const std::vector<double>& xi);
FunctionModel dilate(const FunctionModel& f, const Mat& a);
FunctionModel dilate(const FunctionModel& f, double lambda);
FunctionModel scale(const FunctionModel& f, cplx c);
FunctionModel tensor(std::vector<FunctionModel> factors);

SampledGrid sample(const FunctionModel& f, double extent, std::size_t n);
SampledGrid sample(const FunctionModel& f, const std::array<double, kMaxGridDim>& extents,
                   const std::array<std::size_t, kMaxGridDim>& npts);

// L^p norm with Riemann weight Delta^{d/p}; p = infinity takes the grid sup
// (refined by local quadratic interpolation when refine_sup is set).
double grid_lp_norm(const SampledGrid& g, double p, bool refine_sup = false);
// sum f g-bar * cell volume.
cplx grid_inner(const SampledGrid& f, const SampledGrid& g);

} // namespace modspace

#endif
