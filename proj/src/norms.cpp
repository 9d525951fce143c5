#include "modspace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace modspace {

ExponentPair::ExponentPair(double p_, double q_) : p(p_), q(q_) {
  if (!(p >= 1.0) || !(q >= 1.0)) // NaN rejected too
    throw std::invalid_argument("ExponentPair: exponents must lie in [1, infinity]");
}

ExponentPair ExponentPair::from_inverse(double a, double b) {
  if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
    throw std::invalid_argument("ExponentPair: reciprocals must lie in [0, 1]");
  double inf = std::numeric_limits<double>::infinity();
  return ExponentPair(a == 0.0 ? inf : 1.0 / a, b == 0.0 ? inf : 1.0 / b);
}

std::string ExponentPair::str() const {
  auto one = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  return one(p) + ":" + one(q);
}

namespace {

double pow_abs(double base, double e) { return std::pow(base, e); }

// l^p reduction of nonnegative terms with weight w per term.
double weighted_lp(const std::vector<double>& terms, double p, double w) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  std::vector<double> powered(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) powered[i] = pow_abs(terms[i], p);
  return std::pow(pairwise_sum(powered) * w, 1.0 / p);
}

} // namespace

double mixed_norm(const TFCoefficients& coeffs, const ExponentPair& e) {
  const TFGrid& grid = coeffs.grid;
  std::size_t nx = grid.x_count(), nxi = grid.xi_count();
  double wx = 1.0, wxi = 1.0;
  for (int j = 0; j < grid.dim; ++j) {
    wx *= grid.x[j].step;
    wxi *= grid.xi[j].step;
  }
  std::vector<double> inner(nxi);
  std::vector<double> col(nx);
  for (std::size_t m = 0; m < nxi; ++m) {
    for (std::size_t i = 0; i < nx; ++i) col[i] = std::abs(coeffs.values[i * nxi + m]);
    inner[m] = weighted_lp(col, e.p, wx);
  }
  return weighted_lp(inner, e.q, wxi);
}

double mixed_norm_swapped(const TFCoefficients& coeffs, const ExponentPair& e) {
  const TFGrid& grid = coeffs.grid;
  std::size_t nx = grid.x_count(), nxi = grid.xi_count();
  double wx = 1.0, wxi = 1.0;
  for (int j = 0; j < grid.dim; ++j) {
    wx *= grid.x[j].step;
    wxi *= grid.xi[j].step;
  }
  std::vector<double> inner(nx);
  std::vector<double> row(nxi);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t m = 0; m < nxi; ++m) row[m] = std::abs(coeffs.values[i * nxi + m]);
    inner[i] = weighted_lp(row, e.p, wxi);
  }
  return weighted_lp(inner, e.q, wx);
}

TFGrid default_tf_grid(const FunctionModel& f, const FunctionModel& window,
                       const NormOptions& opts) {
  if (!std::isfinite(f.hint.time_radius) || !std::isfinite(f.hint.freq_radius))
    throw std::invalid_argument("default_tf_grid: function needs finite support hints");
  if (!std::isfinite(window.hint.time_radius) || !std::isfinite(window.hint.freq_radius))
    throw std::invalid_argument("default_tf_grid: window needs finite support hints");
  double xs = opts.x_step > 0.0 ? opts.x_step : (f.dim == 1 ? 0.125 : 0.25);
  double ks = opts.xi_step > 0.0 ? opts.xi_step : (f.dim == 1 ? 0.125 : 0.25);
  double w_r = std::ceil(window.hint.time_radius);
  double x_extent = f.hint.time_radius + w_r + opts.pad;
  double xi_extent = f.hint.freq_radius + window.hint.freq_radius + opts.pad;
  return TFGrid::symmetric(f.dim, x_extent, xs, xi_extent, ks);
}

std::vector<double> modulation_norms_stft(const FunctionModel& f, const FunctionModel& window,
                                          const TFGrid& grid, const std::vector<ExponentPair>& es,
                                          bool swapped) {
  std::vector<double> inner_ps;
  for (const auto& e : es)
    if (std::find(inner_ps.begin(), inner_ps.end(), e.p) == inner_ps.end()) inner_ps.push_back(e.p);

  std::size_t nx = grid.x_count(), nxi = grid.xi_count();
  double wx = 1.0, wxi = 1.0;
  for (int j = 0; j < grid.dim; ++j) {
    wx *= grid.x[j].step;
    wxi *= grid.xi[j].step;
  }
  const std::size_t kChunks = 8;
  std::size_t nchunks = std::max<std::size_t>(1, std::min<std::size_t>(kChunks, nx));
  std::size_t np = inner_ps.size();

  if (!swapped) {
    // inner integral runs over x: per-(p, chunk, xi) partial reductions.
    std::vector<std::vector<double>> partial(np, std::vector<double>(nchunks * nxi, 0.0));
    stft_stream_chunks(f, window, grid, nchunks, [&](std::size_t c, std::size_t, const cplx* row) {
      for (std::size_t pi = 0; pi < np; ++pi) {
        double p = inner_ps[pi];
        double* acc = partial[pi].data() + c * nxi;
        if (std::isinf(p)) {
          for (std::size_t m = 0; m < nxi; ++m) acc[m] = std::max(acc[m], std::abs(row[m]));
        } else if (p == 2.0) {
          for (std::size_t m = 0; m < nxi; ++m) acc[m] += std::norm(row[m]);
        } else if (p == 1.0) {
          for (std::size_t m = 0; m < nxi; ++m) acc[m] += std::abs(row[m]);
        } else {
          for (std::size_t m = 0; m < nxi; ++m) acc[m] += std::pow(std::abs(row[m]), p);
        }
      }
    });
    std::vector<std::vector<double>> inner(np, std::vector<double>(nxi));
    for (std::size_t pi = 0; pi < np; ++pi) {
      double p = inner_ps[pi];
      for (std::size_t m = 0; m < nxi; ++m) {
        double v = 0.0;
        if (std::isinf(p)) {
          for (std::size_t c = 0; c < nchunks; ++c) v = std::max(v, partial[pi][c * nxi + m]);
          inner[pi][m] = v;
        } else {
          for (std::size_t c = 0; c < nchunks; ++c) v += partial[pi][c * nxi + m];
          inner[pi][m] = std::pow(v * wx, 1.0 / p);
        }
      }
    }
    std::vector<double> out(es.size());
    for (std::size_t k = 0; k < es.size(); ++k) {
      std::size_t pi = std::find(inner_ps.begin(), inner_ps.end(), es[k].p) - inner_ps.begin();
      out[k] = weighted_lp(inner[pi], es[k].q, wxi);
    }
    return out;
  }

  // swapped: inner over xi per row, outer q over x, chunk-reduced.
  std::vector<std::vector<double>> partial(es.size(), std::vector<double>(nchunks, 0.0));
  stft_stream_chunks(f, window, grid, nchunks, [&](std::size_t c, std::size_t, const cplx* row) {
    thread_local std::vector<double> rabs;
    rabs.resize(nxi);
    for (std::size_t m = 0; m < nxi; ++m) rabs[m] = std::abs(row[m]);
    for (std::size_t k = 0; k < es.size(); ++k) {
      double ival = weighted_lp(rabs, es[k].p, wxi);
      if (std::isinf(es[k].q))
        partial[k][c] = std::max(partial[k][c], ival);
      else
        partial[k][c] += std::pow(ival, es[k].q);
    }
  });
  std::vector<double> out(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    if (std::isinf(es[k].q)) {
      double v = 0.0;
      for (std::size_t c = 0; c < nchunks; ++c) v = std::max(v, partial[k][c]);
      out[k] = v;
    } else {
      double v = 0.0;
      for (std::size_t c = 0; c < nchunks; ++c) v += partial[k][c];
      out[k] = std::pow(v * wx, 1.0 / es[k].q);
    }
  }
  return out;
}

double modulation_norm_stft(const FunctionModel& f, const ExponentPair& e,
                            const FunctionModel& window, const TFGrid& grid) {
  return modulation_norms_stft(f, window, grid, {e}, false)[0];
}

namespace {

double tensor_norm_product(const FunctionModel& f, const ExponentPair& e,
                           const FunctionModel& window, const NormOptions& opts, AxisSet swap_axes) {
  double prod = 1.0;
  NormOptions axis_opts = opts;
  axis_opts.x_step = 0.0;
  axis_opts.xi_step = 0.0;
  axis_opts.tensor_fastpath = false;
  for (int j = 0; j < f.dim; ++j) {
    const FunctionModel& factor = f.dim == 1 ? f : (*f.factors)[j];
    const FunctionModel& wfac = window.dim == 1 ? window : (*window.factors)[j];
    TFGrid g1 = default_tf_grid(factor, wfac, axis_opts);
    bool sw = axis_in(swap_axes, j);
    prod *= modulation_norms_stft(factor, wfac, g1, {e}, sw)[0];
  }
  return prod;
}

} // namespace

double modulation_norm_auto(const FunctionModel& f, const ExponentPair& e,
                            const FunctionModel& window, const NormOptions& opts) {
  if (opts.tensor_fastpath && f.dim > 1 && f.is_tensor() && window.is_tensor())
    return tensor_norm_product(f, e, window, opts, 0);
  TFGrid grid = default_tf_grid(f, window, opts);
  return modulation_norm_stft(f, e, window, grid);
}

std::vector<double> modulation_norms_box(const SampledGrid& f, const FrequencyPartition& part,
                                         const std::vector<ExponentPair>& es, double leak_tol) {
  SampledGrid spec = fourier(f);
  double tail = spectral_tail_fraction(spec, part.index_radius + 0.25);
  if (tail > leak_tol)
    throw std::runtime_error("modulation_norm_box: spectral leakage " + fmt_double(tail) +
                             " outside the covered box (increase the partition radius)");
  std::vector<double> ps;
  for (const auto& e : es)
    if (std::find(ps.begin(), ps.end(), e.p) == ps.end()) ps.push_back(e.p);
  auto piece = box_piece_lp_norms(f, part, ps);
  std::vector<double> out(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    std::size_t pi = std::find(ps.begin(), ps.end(), es[k].p) - ps.begin();
    std::vector<double> terms(piece.size());
    for (std::size_t i = 0; i < piece.size(); ++i) terms[i] = piece[i][pi];
    out[k] = weighted_lp(terms, es[k].q, 1.0);
  }
  return out;
}

double modulation_norm_box(const SampledGrid& f, const ExponentPair& e,
                           const FrequencyPartition& part, double leak_tol) {
  return modulation_norms_box(f, part, {e}, leak_tol)[0];
}

double local_fl_q_norm(const FunctionModel& f, double q, double extent, std::size_t n) {
  if (!(q >= 1.0)) throw std::invalid_argument("local_fl_q_norm: q must lie in [1, infinity]");
  if (std::isfinite(f.hint.time_radius) && f.hint.time_radius > extent)
    std::fprintf(stderr, "local_fl_q_norm: warning: declared support %g exceeds grid extent %g\n",
                 f.hint.time_radius, extent);
  return grid_lp_norm(fourier(sample(f, extent, n)), q, std::isinf(q) && f.dim == 1);
}

double lqp_norm(const SampledGrid& g, AxisSet axes, const ExponentPair& e) {
  g.check_shape();
  if (axes >= (1u << g.dim)) throw std::invalid_argument("lqp_norm: axis out of range");
  double w_in = 1.0, w_out = 1.0;
  std::size_t n_in = 1, n_out = 1;
  for (int j = 0; j < g.dim; ++j) {
    if (axis_in(axes, j)) {
      w_in *= g.spacing(j);
      n_in *= g.npts[j];
    } else {
      w_out *= g.spacing(j);
      n_out *= g.npts[j];
    }
  }
  std::size_t stride[kMaxGridDim];
  std::size_t s = 1;
  for (int j = g.dim - 1; j >= 0; --j) {
    stride[j] = s;
    s *= g.npts[j];
  }
  std::vector<double> outer(n_out);
  std::vector<double> inner(n_in);
  for (std::size_t o = 0; o < n_out; ++o) {
    // base offset from the outer (complement) multi-index
    std::size_t base = 0, rest = o;
    for (int j = g.dim - 1; j >= 0; --j) {
      if (!axis_in(axes, j)) {
        base += (rest % g.npts[j]) * stride[j];
        rest /= g.npts[j];
      }
    }
    for (std::size_t i = 0; i < n_in; ++i) {
      std::size_t off = base, r = i;
      for (int j = g.dim - 1; j >= 0; --j) {
        if (axis_in(axes, j)) {
          off += (r % g.npts[j]) * stride[j];
          r /= g.npts[j];
        }
      }
      inner[i] = std::abs(g.values[off]);
    }
    outer[o] = weighted_lp(inner, e.q, w_in);
  }
  return weighted_lp(outer, e.p, w_out);
}

double partial_fourier_modulation_norm(const FunctionModel& f, AxisSet axes,
                                       const ExponentPair& e, const FunctionModel& window,
                                       const NormOptions& opts) {
  if (axes == 0) return modulation_norm_auto(f, e, window, opts);
  if (f.dim > 1 && f.is_tensor() && window.is_tensor()) {
    double prod = 1.0;
    NormOptions axis_opts = opts;
    axis_opts.x_step = 0.0;
    axis_opts.xi_step = 0.0;
    for (int j = 0; j < f.dim; ++j) {
      const FunctionModel& factor = (*f.factors)[j];
      const FunctionModel& wfac = (*window.factors)[j];
      AxisSet sub = axis_in(axes, j) ? 1u : 0u;
      prod *= partial_fourier_modulation_norm(factor, sub, e, wfac, axis_opts);
    }
    return prod;
  }
  FunctionModel u = partial_fourier(f, axes, true);
  return modulation_norm_auto(u, e, window, opts);
}

} // namespace modspace
