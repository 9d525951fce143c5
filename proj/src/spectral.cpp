#include "modspace/spectral.hpp"

#include <cmath>

#include "modspace/fft.hpp"

namespace modspace {

namespace {

// Centered transform along one axis. With N divisible by 4 the continuous
// kernel e^{-2 pi i t xi} on symmetric grids reduces to sign flips around a
// plain DFT; the Riemann weight is the pre-transform spacing.
void axis_transform(SampledGrid& g, int axis, bool inverse) {
  const std::size_t n = g.npts[axis];
  if (n % 4 != 0) throw std::invalid_argument("partial_fourier: axis length must be divisible by 4");
  const double weight = g.spacing(axis);

  std::size_t inner = 1;
  for (int j = axis + 1; j < g.dim; ++j) inner *= g.npts[j];
  std::size_t outer = 1;
  for (int j = 0; j < axis; ++j) outer *= g.npts[j];

  cplx* data = g.values.data();
  for (std::size_t o = 0; o < outer; ++o) {
    cplx* block = data + o * n * inner;
    for (std::size_t k = 1; k < n; k += 2)
      for (std::size_t i = 0; i < inner; ++i) block[k * inner + i] = -block[k * inner + i];
    fft_lines(block, n, inner, inner, inverse);
    for (std::size_t k = 1; k < n; k += 2)
      for (std::size_t i = 0; i < inner; ++i) block[k * inner + i] = -block[k * inner + i];
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < inner; ++i) block[k * inner + i] *= weight;
  }
  g.extent[axis] = static_cast<double>(n) / (4.0 * g.extent[axis]);
}

} // namespace

SampledGrid partial_fourier(const SampledGrid& g, AxisSet axes, bool inverse) {
  g.check_shape();
  if (axes >= (1u << g.dim)) throw std::invalid_argument("partial_fourier: axis out of range");
  SampledGrid out = g;
  for (int j = 0; j < g.dim; ++j)
    if (axis_in(axes, j)) axis_transform(out, j, inverse);
  return out;
}

namespace {

FunctionModel reflect(const FunctionModel& f) {
  FunctionModel g;
  g.dim = f.dim;
  auto base = f.evaluate;
  int d = f.dim;
  g.evaluate = [base, d](const double* x) {
    double y[Mat::kMaxDim];
    for (int j = 0; j < d; ++j) y[j] = -x[j];
    return base(y);
  };
  if (f.has_fourier()) {
    auto four = f.fourier;
    g.fourier = [four, d](const double* xi) {
      double y[Mat::kMaxDim];
      for (int j = 0; j < d; ++j) y[j] = -xi[j];
      return four(y);
    };
  }
  g.hint = f.hint;
  return g;
}

// F f when the closed form is present: evaluate = f.fourier, fourier = f(-x).
FunctionModel fourier_exact(const FunctionModel& f, bool inverse) {
  FunctionModel g;
  g.dim = f.dim;
  if (!inverse) {
    g.evaluate = f.fourier;
    auto base = f.evaluate;
    int d = f.dim;
    g.fourier = [base, d](const double* xi) {
      double y[Mat::kMaxDim];
      for (int j = 0; j < d; ++j) y[j] = -xi[j];
      return base(y);
    };
  } else {
    auto four = f.fourier;
    int d = f.dim;
    g.evaluate = [four, d](const double* x) {
      double y[Mat::kMaxDim];
      for (int j = 0; j < d; ++j) y[j] = -x[j];
      return four(y);
    };
    g.fourier = f.evaluate;
  }
  g.hint.time_radius = f.hint.freq_radius;
  g.hint.freq_radius = f.hint.time_radius;
  return g;
}

// Table route for a 1-D factor without a closed-form transform.
FunctionModel fourier_via_table(const FunctionModel& f, bool inverse) {
  if (f.dim != 1) throw std::invalid_argument("partial_fourier: sampled route is one-dimensional");
  if (!std::isfinite(f.hint.time_radius) || !std::isfinite(f.hint.freq_radius))
    throw std::invalid_argument("partial_fourier: sampled route needs finite support hints");
  double t_need = f.hint.time_radius * 1.05 + 1.0;
  double extent = 1.0;
  while (extent < t_need) extent *= 2.0;
  double dt_max = 1.0 / (2.0 * (f.hint.freq_radius + 2.0));
  std::size_t n = 8;
  while (2.0 * extent / static_cast<double>(n) > dt_max) n *= 2;
  if (n > (std::size_t{1} << 20)) throw std::runtime_error("partial_fourier: table grid too large");
  SampledGrid spec = partial_fourier(sample(f, extent, n), 1u, inverse);
  FunctionModel g = trig_interpolant(spec);
  g.hint.time_radius = f.hint.freq_radius;
  g.hint.freq_radius = f.hint.time_radius;
  if (!inverse) {
    g.fourier = reflect(f).evaluate;
  } else {
    g.fourier = f.evaluate;
  }
  return g;
}

} // namespace

FunctionModel partial_fourier(const FunctionModel& f, AxisSet axes, bool inverse) {
  if (axes >= (1u << f.dim)) throw std::invalid_argument("partial_fourier: axis out of range");
  if (axes == 0) return f;
  if (f.dim == 1) {
    if (f.has_fourier()) return fourier_exact(f, inverse);
    return fourier_via_table(f, inverse);
  }
  if (f.is_tensor()) {
    std::vector<FunctionModel> fs;
    for (int j = 0; j < f.dim; ++j) {
      const FunctionModel& factor = (*f.factors)[j];
      fs.push_back(axis_in(axes, j) ? partial_fourier(factor, 1u, inverse) : factor);
    }
    return tensor(std::move(fs));
  }
  if (axes == all_axes(f.dim) && f.has_fourier()) return fourier_exact(f, inverse);
  throw std::invalid_argument(
      "partial_fourier: proper-subset transforms of non-tensor models are not supported");
}

FunctionModel trig_interpolant(const SampledGrid& g, double prune) {
  if (g.dim != 1) throw std::invalid_argument("trig_interpolant: one-dimensional grids only");
  SampledGrid spec = partial_fourier(g, 1u);
  double peak = 0.0;
  for (const cplx& v : spec.values) peak = std::max(peak, std::abs(v));
  struct Bin {
    double freq;
    cplx coef;
  };
  auto bins = std::make_shared<std::vector<Bin>>();
  double dxi = spec.spacing(0);
  double fmax = 0.0;
  for (std::size_t m = 0; m < spec.values.size(); ++m) {
    if (std::abs(spec.values[m]) > prune * peak) {
      double xi = spec.coord(0, m);
      bins->push_back({xi, spec.values[m] * dxi});
      fmax = std::max(fmax, std::abs(xi));
    }
  }
  double box = g.extent[0];
  FunctionModel out;
  out.dim = 1;
  out.evaluate = [bins, box](const double* x) -> cplx {
    if (std::abs(x[0]) > box) return 0.0;
    cplx s = 0.0;
    for (const auto& b : *bins) s += b.coef * unit_phase(kTwoPi * x[0] * b.freq);
    return s;
  };
  out.hint.time_radius = box;
  out.hint.freq_radius = fmax;
  return out;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double plateau_bump(double s) { return smooth_step(3.0 - 4.0 * std::abs(s)); }

double FrequencyPartition::rho(const double* xi) const {
  double v = 1.0;
  for (int j = 0; j < dim; ++j) v *= plateau_bump(xi[j]);
  return v;
}

namespace {
// sigma factors along one axis: plateau(x - k) / sum_l plateau(x - l).
double sigma_axis(double x, int k) {
  double num = plateau_bump(x - k);
  if (num == 0.0) return 0.0;
  double den = 0.0;
  int lo = static_cast<int>(std::ceil(x - 0.75));
  int hi = static_cast<int>(std::floor(x + 0.75));
  for (int l = lo; l <= hi; ++l) den += plateau_bump(x - l);
  return num / den;
}
} // namespace

double FrequencyPartition::sigma(const int* k, const double* xi) const {
  double v = 1.0;
  for (int j = 0; j < dim; ++j) {
    v *= sigma_axis(xi[j], k[j]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

std::size_t FrequencyPartition::piece_count() const {
  std::size_t side = 2 * static_cast<std::size_t>(index_radius) + 1;
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= side;
  return n;
}

void FrequencyPartition::piece_index(std::size_t flat, int* k) const {
  std::size_t side = 2 * static_cast<std::size_t>(index_radius) + 1;
  for (int j = dim - 1; j >= 0; --j) {
    k[j] = static_cast<int>(flat % side) - index_radius;
    flat /= side;
  }
}

FrequencyPartition build_partition(int dim, int index_radius) {
  if (dim < 1 || dim > kMaxGridDim) throw std::invalid_argument("build_partition: bad dimension");
  if (index_radius < 1) throw std::invalid_argument("build_partition: index radius must be >= 1");
  FrequencyPartition p;
  p.dim = dim;
  p.index_radius = index_radius;
  return p;
}

SampledGrid box_op(const SampledGrid& f, const int* k, const FrequencyPartition& part) {
  if (f.dim != part.dim) throw std::invalid_argument("box_op: dimension mismatch");
  SampledGrid spec = fourier(f);
  for (int j = 0; j < f.dim; ++j) {
    if (std::abs(k[j]) > part.index_radius) throw std::invalid_argument("box_op: index outside partition box");
    if (std::abs(k[j]) + 1.0 >= spec.extent[j])
      throw std::invalid_argument("box_op: index outside resolved frequency band");
  }
  std::size_t inner[kMaxGridDim] = {1, 1, 1};
  for (int j = f.dim - 2; j >= 0; --j) inner[j] = inner[j + 1] * spec.npts[j + 1];
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    double s = 1.0;
    std::size_t rest = i;
    for (int j = 0; j < f.dim; ++j) {
      std::size_t idx = rest / inner[j];
      rest %= inner[j];
      s *= sigma_axis(spec.coord(j, idx), k[j]);
      if (s == 0.0) break;
    }
    spec.values[i] *= s;
  }
  return partial_fourier(spec, all_axes(f.dim), true);
}

namespace {

struct AxisBand {
  std::size_t lo = 0, count = 0;   // fine spectral index range of the band
  std::ptrdiff_t shift = 0;        // fine index -> demodulated coarse index offset
  std::size_t n_coarse = 0;
  std::vector<double> sigma;       // per fine index in the band
};

bool make_axis_band(const SampledGrid& spec, int axis, int k, AxisBand& band) {
  double t_extent = static_cast<double>(spec.npts[axis]) / (4.0 * spec.extent[axis]);
  double two_t = 2.0 * t_extent;
  if (std::abs(two_t - std::round(two_t)) > 1e-9 || two_t < 1.0) return false;
  double dxi = spec.spacing(axis);
  double lo_f = k - 0.75, hi_f = k + 0.75;
  std::ptrdiff_t ilo = static_cast<std::ptrdiff_t>(std::ceil((lo_f + spec.extent[axis]) / dxi));
  std::ptrdiff_t ihi = static_cast<std::ptrdiff_t>(std::floor((hi_f + spec.extent[axis]) / dxi));
  ilo = std::max<std::ptrdiff_t>(ilo, 0);
  ihi = std::min<std::ptrdiff_t>(ihi, static_cast<std::ptrdiff_t>(spec.npts[axis]) - 1);
  band.n_coarse = next_pow2(static_cast<std::size_t>(std::ceil(8.0 * t_extent)));
  band.n_coarse = std::max<std::size_t>(band.n_coarse, 8);
  band.n_coarse = std::min(band.n_coarse, spec.npts[axis]);
  if (ihi < ilo) {
    band.lo = 0;
    band.count = 0;
    return true;
  }
  band.lo = static_cast<std::size_t>(ilo);
  band.count = static_cast<std::size_t>(ihi - ilo + 1);
  // coarse index = fine index - N/2 - k*2T + Nc/2
  band.shift = -static_cast<std::ptrdiff_t>(spec.npts[axis] / 2) -
               static_cast<std::ptrdiff_t>(std::llround(k * two_t)) +
               static_cast<std::ptrdiff_t>(band.n_coarse / 2);
  band.sigma.resize(band.count);
  for (std::size_t i = 0; i < band.count; ++i)
    band.sigma[i] = sigma_axis(spec.coord(axis, band.lo + i), k);
  return true;
}

} // namespace

std::vector<std::vector<double>> box_piece_lp_norms(const SampledGrid& f,
                                                    const FrequencyPartition& part,
                                                    const std::vector<double>& ps) {
  if (f.dim != part.dim) throw std::invalid_argument("box_piece_lp_norms: dimension mismatch");
  SampledGrid spec = fourier(f);
  std::size_t pieces = part.piece_count();
  std::vector<std::vector<double>> norms(pieces, std::vector<double>(ps.size(), 0.0));

  parallel_for(pieces, [&](std::size_t flat) {
    int k[kMaxGridDim] = {0, 0, 0};
    part.piece_index(flat, k);
    AxisBand bands[kMaxGridDim];
    std::size_t total = 1;
    bool empty = false;
    for (int j = 0; j < f.dim; ++j) {
      if (!make_axis_band(spec, j, k[j], bands[j]))
        throw std::runtime_error("box_piece_lp_norms: grid extent must be a multiple of 1/2");
      if (bands[j].count == 0) empty = true;
      total *= bands[j].n_coarse;
    }
    if (empty) return;

    // Demodulated coarse spectrum: same spectral spacing, small extent.
    SampledGrid coarse;
    coarse.dim = f.dim;
    for (int j = 0; j < f.dim; ++j) {
      coarse.npts[j] = bands[j].n_coarse;
      double t_extent = static_cast<double>(spec.npts[j]) / (4.0 * spec.extent[j]);
      coarse.extent[j] = static_cast<double>(bands[j].n_coarse) / (4.0 * t_extent);
    }
    coarse.values.assign(total, cplx(0.0, 0.0));

    std::size_t fine_inner[kMaxGridDim] = {1, 1, 1};
    for (int j = f.dim - 2; j >= 0; --j) fine_inner[j] = fine_inner[j + 1] * spec.npts[j + 1];
    std::size_t coarse_inner[kMaxGridDim] = {1, 1, 1};
    for (int j = f.dim - 2; j >= 0; --j) coarse_inner[j] = coarse_inner[j + 1] * coarse.npts[j + 1];

    std::size_t band_total = 1;
    for (int j = 0; j < f.dim; ++j) band_total *= bands[j].count;
    for (std::size_t b = 0; b < band_total; ++b) {
      std::size_t rest = b;
      std::size_t fine_idx = 0, coarse_idx = 0;
      double sig = 1.0;
      for (int j = f.dim - 1; j >= 0; --j) {
        std::size_t bj = rest % bands[j].count;
        rest /= bands[j].count;
        std::size_t fi = bands[j].lo + bj;
        sig *= bands[j].sigma[bj];
        fine_idx += fi * fine_inner[j];
        coarse_idx += static_cast<std::size_t>(static_cast<std::ptrdiff_t>(fi) + bands[j].shift) *
                      coarse_inner[j];
      }
      coarse.values[coarse_idx] = spec.values[fine_idx] * sig;
    }
    SampledGrid piece = partial_fourier(coarse, all_axes(f.dim), true);
    for (std::size_t pi = 0; pi < ps.size(); ++pi)
      norms[flat][pi] = grid_lp_norm(piece, ps[pi], std::isinf(ps[pi]) && f.dim == 1);
  });
  return norms;
}

double spectral_tail_fraction(const SampledGrid& spectrum, double radius) {
  double inside = 0.0, total = 0.0;
  std::size_t inner[kMaxGridDim] = {1, 1, 1};
  for (int j = spectrum.dim - 2; j >= 0; --j) inner[j] = inner[j + 1] * spectrum.npts[j + 1];
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    double m = std::norm(spectrum.values[i]);
    total += m;
    std::size_t rest = i;
    bool in = true;
    for (int j = 0; j < spectrum.dim; ++j) {
      std::size_t idx = rest / inner[j];
      rest %= inner[j];
      if (std::abs(spectrum.coord(j, idx)) > radius) in = false;
    }
    if (in) inside += m;
  }
  if (total == 0.0) return 0.0;
  return (total - inside) / total;
}

} // namespace modspace
