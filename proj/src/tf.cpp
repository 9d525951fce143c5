#include "modspace/tf.hpp"

#include <cmath>

#include "modspace/fft.hpp"

namespace modspace {

double TFAxis::max_abs() const {
  if (count == 0) return 0.0;
  return std::max(std::abs(lo), std::abs(node(count - 1)));
}

bool is_dyadic(double step) {
  if (step <= 0.0) return false;
  double l = std::log2(step);
  return std::abs(l - std::round(l)) < 1e-9;
}

TFGrid TFGrid::symmetric(int dim, double x_extent, double x_step, double xi_extent, double xi_step) {
  if (dim < 1 || dim > kMaxGridDim) throw std::invalid_argument("TFGrid: bad dimension");
  if (!is_dyadic(x_step) || !is_dyadic(xi_step))
    throw std::invalid_argument("TFGrid: lattice steps must be dyadic");
  TFGrid g;
  g.dim = dim;
  auto make = [](double extent, double step) {
    std::size_t count = next_pow2(static_cast<std::size_t>(std::ceil(2.0 * extent / step)));
    count = std::max<std::size_t>(count, 8);
    return TFAxis{-static_cast<double>(count / 2) * step, count, step};
  };
  for (int j = 0; j < dim; ++j) {
    g.x[j] = make(x_extent, x_step);
    g.xi[j] = make(xi_extent, xi_step);
  }
  return g;
}

std::size_t TFGrid::x_count() const {
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= x[j].count;
  return n;
}

std::size_t TFGrid::xi_count() const {
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= xi[j].count;
  return n;
}

void TFGrid::x_node(std::size_t flat, double* out) const {
  for (int j = dim - 1; j >= 0; --j) {
    out[j] = x[j].node(flat % x[j].count);
    flat /= x[j].count;
  }
}

void TFGrid::xi_node(std::size_t flat, double* out) const {
  for (int j = dim - 1; j >= 0; --j) {
    out[j] = xi[j].node(flat % xi[j].count);
    flat /= xi[j].count;
  }
}

std::size_t TFGrid::x_flat(const std::size_t* idx) const {
  std::size_t f = 0;
  for (int j = 0; j < dim; ++j) f = f * x[j].count + idx[j];
  return f;
}

std::size_t TFGrid::xi_flat(const std::size_t* idx) const {
  std::size_t f = 0;
  for (int j = 0; j < dim; ++j) f = f * xi[j].count + idx[j];
  return f;
}

namespace {

constexpr std::size_t kZeroBin = static_cast<std::size_t>(-1);

struct AxisPlan {
  double dt = 0.0;
  std::size_t nfft = 0;
  std::size_t seg_len = 0;     // samples per window segment
  std::size_t table_len = 0;   // samples in the shared f table
  double t_lo = 0.0;
  double w_radius = 0.0;
  std::size_t x_stride = 0;    // table sample offset between consecutive x nodes
  std::vector<double> window;  // window factor samples over the segment
  std::vector<std::size_t> xi_bin;
};

struct StftPlan {
  int dim;
  AxisPlan ax[kMaxGridDim];
  std::vector<cplx> table; // samples of f, row-major
};

const FunctionModel& window_factor(const FunctionModel& g, int j) {
  if (g.dim == 1) return g;
  if (!g.is_tensor()) throw std::invalid_argument("stft: window must be a tensor model");
  return (*g.factors)[j];
}

StftPlan make_plan(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid) {
  if (f.dim != grid.dim || g.dim != grid.dim) throw std::invalid_argument("stft: dimension mismatch");
  if (grid.dim > 2) throw std::invalid_argument("stft: lattice dimension above 2 not supported");
  bool zero_window = true;
  StftPlan plan;
  plan.dim = grid.dim;

  double sum_fr = f.hint.freq_radius + g.hint.freq_radius; // may be inf

  for (int j = 0; j < grid.dim; ++j) {
    const TFAxis& xax = grid.x[j];
    const TFAxis& kax = grid.xi[j];
    if (!is_dyadic(xax.step) || !is_dyadic(kax.step))
      throw std::invalid_argument("stft: lattice steps must be dyadic");
    AxisPlan& ap = plan.ax[j];
    const FunctionModel& wf = window_factor(g, j);
    if (!std::isfinite(wf.hint.time_radius))
      throw std::invalid_argument("stft: window needs a finite time radius");
    double w_radius = std::max(1.0, std::ceil(wf.hint.time_radius));
    ap.w_radius = w_radius;

    // Sampling rate: when the lattice covers the declared band, place the
    // Nyquist edge just past the band so no content folds into kept bins;
    // nodes beyond the band are emitted as exact zeros. On small lattices
    // split the gap so folded content lands outside the lattice.
    double ximax = kax.max_abs();
    double nyq, keep;
    if (!std::isfinite(sum_fr)) {
      nyq = ximax + 2.0;
      keep = ximax + 1.0;
    } else if (sum_fr <= ximax + 2.0) {
      nyq = sum_fr + 1.0;
      keep = sum_fr + 1.0;
    } else {
      nyq = std::min(0.5 * (ximax + sum_fr) + 1.0, ximax + 8.0);
      keep = ximax + 1.0;
    }
    double dt = std::min(0.5, xax.step);
    while (1.0 / (2.0 * dt) < nyq) dt *= 0.5;
    ap.dt = dt;
    ap.seg_len = static_cast<std::size_t>(std::llround(2.0 * w_radius / dt)) + 1;
    std::size_t nfft = next_pow2(ap.seg_len);
    while (1.0 / (static_cast<double>(nfft) * dt) > kax.step + 1e-15) nfft *= 2;
    ap.nfft = nfft;
    ap.t_lo = xax.lo - w_radius;
    double t_hi = xax.node(xax.count - 1) + w_radius;
    ap.table_len = static_cast<std::size_t>(std::llround((t_hi - ap.t_lo) / dt)) + 1;
    ap.x_stride = static_cast<std::size_t>(std::llround(xax.step / dt));

    ap.window.resize(ap.seg_len);
    for (std::size_t i = 0; i < ap.seg_len; ++i) {
      double t = -w_radius + static_cast<double>(i) * dt;
      cplx wv = wf.evaluate(&t);
      ap.window[i] = wv.real();
      if (std::abs(wv.imag()) > 1e-14)
        throw std::invalid_argument("stft: complex windows not supported");
      if (wv != cplx(0.0, 0.0)) zero_window = false;
    }

    ap.xi_bin.resize(kax.count);
    for (std::size_t m = 0; m < kax.count; ++m) {
      double node = kax.node(m);
      if (std::abs(node) > keep || std::abs(node) >= 1.0 / (2.0 * dt)) {
        ap.xi_bin[m] = kZeroBin;
        continue;
      }
      double pos = node * static_cast<double>(nfft) * dt;
      long long bin = std::llround(pos);
      if (std::abs(pos - static_cast<double>(bin)) > 1e-6)
        throw std::invalid_argument("stft: frequency node does not align with an FFT bin");
      long long n = static_cast<long long>(nfft);
      ap.xi_bin[m] = static_cast<std::size_t>(((bin % n) + n) % n);
    }
  }
  if (zero_window) throw std::invalid_argument("stft: window is identically zero");

  // Shared sample table of f.
  std::size_t total = 1;
  for (int j = 0; j < grid.dim; ++j) total *= plan.ax[j].table_len;
  plan.table.resize(total);
  if (grid.dim == 1) {
    const AxisPlan& ap = plan.ax[0];
    parallel_for(total, [&](std::size_t i) {
      double t = ap.t_lo + static_cast<double>(i) * ap.dt;
      plan.table[i] = f.evaluate(&t);
    });
  } else {
    const AxisPlan& a0 = plan.ax[0];
    const AxisPlan& a1 = plan.ax[1];
    parallel_for(a0.table_len, [&](std::size_t i0) {
      double t[2];
      t[0] = a0.t_lo + static_cast<double>(i0) * a0.dt;
      for (std::size_t i1 = 0; i1 < a1.table_len; ++i1) {
        t[1] = a1.t_lo + static_cast<double>(i1) * a1.dt;
        plan.table[i0 * a1.table_len + i1] = f.evaluate(t);
      }
    });
  }
  return plan;
}

void compute_row(const StftPlan& plan, const TFGrid& grid, std::size_t x_flat,
                 std::vector<cplx>& buf, std::vector<cplx>& row) {
  std::size_t nxi = grid.xi_count();
  std::size_t xidx[kMaxGridDim] = {0, 0, 0};
  {
    std::size_t rest = x_flat;
    for (int j = grid.dim - 1; j >= 0; --j) {
      xidx[j] = rest % grid.x[j].count;
      rest /= grid.x[j].count;
    }
  }
  row.resize(nxi);
  {
    if (grid.dim == 1) {
      const AxisPlan& ap = plan.ax[0];
      buf.assign(ap.nfft, cplx(0.0, 0.0));
      std::size_t s0 = xidx[0] * ap.x_stride;
      for (std::size_t i = 0; i < ap.seg_len; ++i) buf[i] = plan.table[s0 + i] * ap.window[i];
      fft(buf.data(), ap.nfft, false);
      double t0 = ap.t_lo + static_cast<double>(s0) * ap.dt;
      for (std::size_t m = 0; m < grid.xi[0].count; ++m) {
        if (ap.xi_bin[m] == kZeroBin) {
          row[m] = 0.0;
          continue;
        }
        double xi = grid.xi[0].node(m);
        row[m] = ap.dt * buf[ap.xi_bin[m]] * unit_phase(-kTwoPi * t0 * xi);
      }
    } else {
      const AxisPlan& a0 = plan.ax[0];
      const AxisPlan& a1 = plan.ax[1];
      buf.assign(a0.nfft * a1.nfft, cplx(0.0, 0.0));
      std::size_t s0 = xidx[0] * a0.x_stride;
      std::size_t s1 = xidx[1] * a1.x_stride;
      for (std::size_t i = 0; i < a0.seg_len; ++i) {
        const cplx* src = &plan.table[(s0 + i) * a1.table_len + s1];
        cplx* dst = &buf[i * a1.nfft];
        double w0 = a0.window[i];
        for (std::size_t l = 0; l < a1.seg_len; ++l) dst[l] = src[l] * (w0 * a1.window[l]);
      }
      for (std::size_t i = 0; i < a0.seg_len; ++i) fft(&buf[i * a1.nfft], a1.nfft, false);
      fft_lines(buf.data(), a0.nfft, a1.nfft, a1.nfft, false);
      double t0 = a0.t_lo + static_cast<double>(s0) * a0.dt;
      double t1 = a1.t_lo + static_cast<double>(s1) * a1.dt;
      double w = a0.dt * a1.dt;
      std::size_t m_flat = 0;
      for (std::size_t m0 = 0; m0 < grid.xi[0].count; ++m0) {
        double xi0 = grid.xi[0].node(m0);
        for (std::size_t m1 = 0; m1 < grid.xi[1].count; ++m1, ++m_flat) {
          if (a0.xi_bin[m0] == kZeroBin || a1.xi_bin[m1] == kZeroBin) {
            row[m_flat] = 0.0;
            continue;
          }
          double xi1 = grid.xi[1].node(m1);
          row[m_flat] = w * buf[a0.xi_bin[m0] * a1.nfft + a1.xi_bin[m1]] *
                        unit_phase(-kTwoPi * (t0 * xi0 + t1 * xi1));
        }
      }
    }
  }
}

} // namespace

void stft_stream(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                 const StftSink& sink) {
  StftPlan plan = make_plan(f, g, grid);
  parallel_for(grid.x_count(), [&](std::size_t x_flat) {
    thread_local std::vector<cplx> buf, row;
    compute_row(plan, grid, x_flat, buf, row);
    sink(x_flat, row.data());
  });
}

void stft_stream_chunks(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                        std::size_t nchunks, const ChunkedStftSink& sink) {
  StftPlan plan = make_plan(f, g, grid);
  std::size_t nx = grid.x_count();
  nchunks = std::max<std::size_t>(1, std::min(nchunks, nx));
  parallel_for(nchunks, [&](std::size_t c) {
    thread_local std::vector<cplx> buf, row;
    std::size_t lo = c * nx / nchunks;
    std::size_t hi = (c + 1) * nx / nchunks;
    for (std::size_t x_flat = lo; x_flat < hi; ++x_flat) {
      compute_row(plan, grid, x_flat, buf, row);
      sink(c, x_flat, row.data());
    }
  });
}

TFCoefficients stft(const FunctionModel& f, const FunctionModel& g, const TFGrid& grid,
                    const std::string& window_tag) {
  TFCoefficients out;
  out.grid = grid;
  out.window_tag = window_tag;
  std::size_t nxi = grid.xi_count();
  out.values.resize(grid.x_count() * nxi);
  stft_stream(f, g, grid, [&](std::size_t x_flat, const cplx* row) {
    std::copy(row, row + nxi, out.values.begin() + x_flat * nxi);
  });
  return out;
}

cplx stft_direct(const FunctionModel& f, const FunctionModel& g, const double* x,
                 const double* xi, double dt) {
  double w_radius = std::max(1.0, std::ceil(g.hint.time_radius));
  int d = f.dim;
  std::size_t n = static_cast<std::size_t>(std::llround(2.0 * w_radius / dt)) + 1;
  cplx acc = 0.0;
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      double t = x[0] - w_radius + static_cast<double>(i) * dt;
      double s = t - x[0];
      acc += f.evaluate(&t) * std::conj(g.evaluate(&s)) * unit_phase(-kTwoPi * t * xi[0]);
    }
    return acc * dt;
  }
  if (d != 2) throw std::invalid_argument("stft_direct: dimension above 2 not supported");
  for (std::size_t i = 0; i < n; ++i) {
    double t[2], s[2];
    t[0] = x[0] - w_radius + static_cast<double>(i) * dt;
    s[0] = t[0] - x[0];
    for (std::size_t l = 0; l < n; ++l) {
      t[1] = x[1] - w_radius + static_cast<double>(l) * dt;
      s[1] = t[1] - x[1];
      acc += f.evaluate(t) * std::conj(g.evaluate(s)) * unit_phase(-kTwoPi * (t[0] * xi[0] + t[1] * xi[1]));
    }
  }
  return acc * dt * dt;
}

double fundamental_identity_error(const FunctionModel& f, const FunctionModel& g,
                                  const TFGrid& grid, double corrupt_phase) {
  return partial_fundamental_identity_error(f, g, grid, all_axes(grid.dim), corrupt_phase);
}

double partial_fundamental_identity_error(const FunctionModel& f, const FunctionModel& g,
                                          const TFGrid& grid, AxisSet axes, double corrupt_phase) {
  TFCoefficients lhs = stft(f, g, grid);
  cplx corrupt = unit_phase(corrupt_phase);
  TFGrid rgrid;
  rgrid.dim = grid.dim;
  for (int j = 0; j < grid.dim; ++j) {
    if (axis_in(axes, j)) {
      rgrid.x[j] = grid.xi[j];
      rgrid.xi[j] = grid.x[j].reflected();
    } else {
      rgrid.x[j] = grid.x[j];
      rgrid.xi[j] = grid.xi[j];
    }
  }
  TFCoefficients rhs = stft(partial_fourier(f, axes), partial_fourier(g, axes), rgrid);

  double err = 0.0;
  std::size_t nxi = grid.xi_count();
  double x[kMaxGridDim], w[kMaxGridDim];
  std::size_t xidx[kMaxGridDim], widx[kMaxGridDim];
  std::size_t ridx_x[kMaxGridDim], ridx_xi[kMaxGridDim];
  for (std::size_t xf = 0; xf < grid.x_count(); ++xf) {
    std::size_t rest = xf;
    for (int j = grid.dim - 1; j >= 0; --j) {
      xidx[j] = rest % grid.x[j].count;
      rest /= grid.x[j].count;
    }
    grid.x_node(xf, x);
    for (std::size_t wf = 0; wf < nxi; ++wf) {
      rest = wf;
      for (int j = grid.dim - 1; j >= 0; --j) {
        widx[j] = rest % grid.xi[j].count;
        rest /= grid.xi[j].count;
      }
      grid.xi_node(wf, w);
      double dot = 0.0;
      for (int j = 0; j < grid.dim; ++j) {
        if (axis_in(axes, j)) {
          dot += x[j] * w[j];
          ridx_x[j] = widx[j];                            // first slot takes w_j
          ridx_xi[j] = grid.x[j].count - 1 - xidx[j];     // second slot takes -x_j
        } else {
          ridx_x[j] = xidx[j];
          ridx_xi[j] = widx[j];
        }
      }
      cplx rhs_v = rhs.at(rgrid.x_flat(ridx_x), rgrid.xi_flat(ridx_xi));
      cplx want = unit_phase(-kTwoPi * dot) * rhs_v;
      err = std::max(err, std::abs(corrupt * lhs.at(xf, wf) - want));
    }
  }
  return err;
}

double stft_dilation_identity_error(const FunctionModel& f, const FunctionModel& phi,
                                    const std::vector<double>& lambda, const TFGrid& grid) {
  if (static_cast<int>(lambda.size()) != grid.dim)
    throw std::invalid_argument("stft_dilation_identity_error: dimension mismatch");
  double absdet = 1.0;
  for (double l : lambda) {
    if (l <= 0.0 || !is_dyadic(l))
      throw std::invalid_argument("stft_dilation_identity_error: entries must be positive dyadic");
    absdet *= l;
  }
  Mat lam(grid.dim);
  for (int j = 0; j < grid.dim; ++j) lam(j, j) = lambda[j];
  TFCoefficients lhs = stft(dilate(f, lam), dilate(phi, lam), grid);

  TFGrid sgrid;
  sgrid.dim = grid.dim;
  for (int j = 0; j < grid.dim; ++j) {
    sgrid.x[j] = grid.x[j].scaled(lambda[j]);
    sgrid.xi[j] = grid.xi[j].scaled(1.0 / lambda[j]);
  }
  TFCoefficients rhs = stft(f, phi, sgrid);
  double err = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    err = std::max(err, std::abs(lhs.values[i] - rhs.values[i] / absdet));
  return err;
}

} // namespace modspace
