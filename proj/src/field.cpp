#include "modspace/field.hpp"

#include <atomic>
#include <cmath>

namespace modspace {

void SampledGrid::check_shape() const {
  if (dim < 1 || dim > kMaxGridDim) throw std::invalid_argument("SampledGrid: bad dimension");
  std::size_t expect = 1;
  for (int j = 0; j < dim; ++j) {
    if (extent[j] <= 0.0) throw std::invalid_argument("SampledGrid: extent must be positive");
    if (npts[j] < 8 || !is_pow2(npts[j]))
      throw std::invalid_argument("SampledGrid: points per axis must be a power of two >= 8");
    expect *= npts[j];
  }
  if (values.size() != expect) throw std::invalid_argument("SampledGrid: value count mismatch");
}

namespace {
std::atomic<std::size_t> g_grid_cap{std::size_t{1} << 22};

void check_dim(const FunctionModel& f, std::size_t n, const char* op) {
  if (static_cast<std::size_t>(f.dim) != n)
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
} // namespace

std::size_t grid_point_cap() { return g_grid_cap.load(); }
void set_grid_point_cap(std::size_t cap) { g_grid_cap.store(cap); }

FunctionModel constant(int dim, cplx value) {
  FunctionModel f;
  f.dim = dim;
  f.evaluate = [value](const double*) { return value; };
  f.hint.freq_radius = 0.0; // delta at the origin, below any grid resolution
  if (dim > 1) {
    std::vector<FunctionModel> fs;
    fs.push_back(constant(1, value));
    for (int j = 1; j < dim; ++j) fs.push_back(constant(1, 1.0));
    f.factors = std::make_shared<const std::vector<FunctionModel>>(std::move(fs));
  }
  return f;
}

namespace {
FunctionModel gaussian_1d(double amp) {
  FunctionModel f;
  f.dim = 1;
  f.evaluate = [amp](const double* t) { return cplx(amp * std::exp(-kPi * t[0] * t[0]), 0.0); };
  f.fourier = f.evaluate;
  f.hint.time_radius = 4.75; // e^{-pi r^2} < 1e-30 beyond this
  f.hint.freq_radius = 4.75;
  return f;
}
} // namespace

FunctionModel gaussian(int dim) {
  if (dim == 1) return gaussian_1d(1.0);
  std::vector<FunctionModel> fs;
  for (int j = 0; j < dim; ++j) fs.push_back(gaussian_1d(1.0));
  return tensor(std::move(fs));
}

FunctionModel gaussian_window(int dim) {
  std::vector<FunctionModel> fs;
  for (int j = 0; j < dim; ++j) fs.push_back(gaussian_1d(std::pow(2.0, 0.25)));
  if (dim == 1) return fs[0];
  return tensor(std::move(fs));
}

FunctionModel gaussian_anisotropic(const std::vector<double>& a) {
  std::vector<FunctionModel> fs;
  for (double aj : a) {
    if (aj <= 0.0) throw std::invalid_argument("gaussian_anisotropic: coefficients must be positive");
    FunctionModel f;
    f.dim = 1;
    f.evaluate = [aj](const double* t) { return cplx(std::exp(-kPi * aj * t[0] * t[0]), 0.0); };
    double inv = 1.0 / aj;
    f.fourier = [aj, inv](const double* xi) {
      return cplx(std::sqrt(inv) * std::exp(-kPi * inv * xi[0] * xi[0]), 0.0);
    };
    f.hint.time_radius = 4.75 / std::sqrt(aj);
    f.hint.freq_radius = 4.75 * std::sqrt(aj);
    fs.push_back(std::move(f));
  }
  if (fs.size() == 1) return fs[0];
  return tensor(std::move(fs));
}

FunctionModel translate(const FunctionModel& f, const std::vector<double>& x) {
  check_dim(f, x.size(), "translate");
  if (f.is_tensor()) {
    std::vector<FunctionModel> fs;
    for (int j = 0; j < f.dim; ++j) fs.push_back(translate((*f.factors)[j], {x[j]}));
    return tensor(std::move(fs));
  }
  FunctionModel g;
  g.dim = f.dim;
  auto base = f.evaluate;
  auto shift = x;
  g.evaluate = [base, shift](const double* t) {
    double s[Mat::kMaxDim];
    for (std::size_t j = 0; j < shift.size(); ++j) s[j] = t[j] - shift[j];
    return base(s);
  };
  if (f.has_fourier()) {
    auto four = f.fourier;
    g.fourier = [four, shift](const double* xi) {
      double dot = 0.0;
      for (std::size_t j = 0; j < shift.size(); ++j) dot += shift[j] * xi[j];
      return four(xi) * unit_phase(-kTwoPi * dot);
    };
  }
  g.hint.time_radius = f.hint.time_radius + norm2(x);
  g.hint.freq_radius = f.hint.freq_radius;
  return g;
}

FunctionModel modulate(const FunctionModel& f, const std::vector<double>& xi) {
  check_dim(f, xi.size(), "modulate");
  if (f.is_tensor()) {
    std::vector<FunctionModel> fs;
    for (int j = 0; j < f.dim; ++j) fs.push_back(modulate((*f.factors)[j], {xi[j]}));
    return tensor(std::move(fs));
  }
  FunctionModel g;
  g.dim = f.dim;
  auto base = f.evaluate;
  auto freq = xi;
  g.evaluate = [base, freq](const double* t) {
    double dot = 0.0;
    for (std::size_t j = 0; j < freq.size(); ++j) dot += freq[j] * t[j];
    return base(t) * unit_phase(kTwoPi * dot);
  };
  if (f.has_fourier()) {
    auto four = f.fourier;
    g.fourier = [four, freq](const double* w) {
      double s[Mat::kMaxDim];
      for (std::size_t j = 0; j < freq.size(); ++j) s[j] = w[j] - freq[j];
      return four(s);
    };
  }
  g.hint.time_radius = f.hint.time_radius;
  g.hint.freq_radius = f.hint.freq_radius + norm2(xi);
  return g;
}

FunctionModel dilate(const FunctionModel& f, const Mat& a) {
  check_dim(f, static_cast<std::size_t>(a.d), "dilate");
  double adet = det(a);
  double scale = std::pow(a.max_abs(), a.d);
  if (std::abs(adet) <= 1e-12 * scale)
    throw std::invalid_argument("dilate: matrix is singular or nearly singular");
  if (f.is_tensor() && a.is_diagonal()) {
    std::vector<FunctionModel> fs;
    for (int j = 0; j < f.dim; ++j) fs.push_back(dilate((*f.factors)[j], a(j, j)));
    return tensor(std::move(fs));
  }
  FunctionModel g;
  g.dim = f.dim;
  auto base = f.evaluate;
  Mat m = a;
  g.evaluate = [base, m](const double* x) {
    double y[Mat::kMaxDim];
    mat_apply(m, x, y);
    return base(y);
  };
  Mat ainv = inverse(a);
  if (f.has_fourier()) {
    auto four = f.fourier;
    Mat adj = ainv.transpose(); // (A^T)^{-1}
    double invdet = 1.0 / std::abs(adet);
    g.fourier = [four, adj, invdet](const double* xi) {
      double y[Mat::kMaxDim];
      mat_apply(adj, xi, y);
      return invdet * four(y);
    };
  }
  // Frobenius norms bound the operator norms, so these radii stay safe.
  g.hint.time_radius = f.hint.time_radius * ainv.frobenius();
  g.hint.freq_radius = f.hint.freq_radius * a.frobenius();
  return g;
}

FunctionModel dilate(const FunctionModel& f, double lambda) {
  if (f.dim == 1 && f.is_tensor() == false) {
    if (lambda == 0.0) throw std::invalid_argument("dilate: zero scale");
    FunctionModel g;
    g.dim = 1;
    auto base = f.evaluate;
    g.evaluate = [base, lambda](const double* x) {
      double y = lambda * x[0];
      return base(&y);
    };
    if (f.has_fourier()) {
      auto four = f.fourier;
      double inv = 1.0 / lambda, absinv = std::abs(inv);
      g.fourier = [four, inv, absinv](const double* xi) {
        double y = inv * xi[0];
        return absinv * four(&y);
      };
    }
    g.hint.time_radius = f.hint.time_radius / std::abs(lambda);
    g.hint.freq_radius = f.hint.freq_radius * std::abs(lambda);
    return g;
  }
  return dilate(f, Mat::scalar(f.dim, lambda));
}

FunctionModel scale(const FunctionModel& f, cplx c) {
  FunctionModel g;
  g.dim = f.dim;
  auto base = f.evaluate;
  g.evaluate = [base, c](const double* x) { return c * base(x); };
  if (f.has_fourier()) {
    auto four = f.fourier;
    g.fourier = [four, c](const double* xi) { return c * four(xi); };
  }
  g.hint = f.hint;
  if (f.is_tensor()) {
    std::vector<FunctionModel> fs = *f.factors;
    fs[0] = scale(fs[0], c);
    g.factors = std::make_shared<const std::vector<FunctionModel>>(std::move(fs));
  }
  return g;
}

FunctionModel tensor(std::vector<FunctionModel> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  for (const auto& f : factors)
    if (f.dim != 1) throw std::invalid_argument("tensor: factors must be one-dimensional");
  if (factors.size() == 1) return factors[0];
  FunctionModel g;
  g.dim = static_cast<int>(factors.size());
  auto fs = std::make_shared<const std::vector<FunctionModel>>(std::move(factors));
  g.factors = fs;
  g.evaluate = [fs](const double* x) {
    cplx v = 1.0;
    for (std::size_t j = 0; j < fs->size(); ++j) v *= (*fs)[j].evaluate(&x[j]);
    return v;
  };
  bool all_fourier = true;
  double tr = 0.0, fr = 0.0;
  for (const auto& f : *fs) {
    all_fourier = all_fourier && f.has_fourier();
    tr += f.hint.time_radius * f.hint.time_radius;
    fr += f.hint.freq_radius * f.hint.freq_radius;
  }
  if (all_fourier) {
    g.fourier = [fs](const double* xi) {
      cplx v = 1.0;
      for (std::size_t j = 0; j < fs->size(); ++j) v *= (*fs)[j].fourier(&xi[j]);
      return v;
    };
  }
  g.hint.time_radius = std::sqrt(tr);
  g.hint.freq_radius = std::sqrt(fr);
  return g;
}

SampledGrid sample(const FunctionModel& f, double extent, std::size_t n) {
  std::array<double, kMaxGridDim> es{};
  std::array<std::size_t, kMaxGridDim> ns{};
  for (int j = 0; j < f.dim; ++j) {
    es[j] = extent;
    ns[j] = n;
  }
  return sample(f, es, ns);
}

SampledGrid sample(const FunctionModel& f, const std::array<double, kMaxGridDim>& extents,
                   const std::array<std::size_t, kMaxGridDim>& npts) {
  if (f.dim > kMaxGridDim) throw std::invalid_argument("sample: dimension too large for grids");
  SampledGrid g;
  g.dim = f.dim;
  g.extent = extents;
  g.npts = npts;
  std::size_t total = 1;
  for (int j = 0; j < f.dim; ++j) {
    if (extents[j] <= 0.0) throw std::invalid_argument("sample: extent must be positive");
    if (npts[j] < 8 || !is_pow2(npts[j]))
      throw std::invalid_argument("sample: points per axis must be a power of two >= 8");
    total *= npts[j];
  }
  if (total > grid_point_cap())
    throw std::runtime_error("sample: grid size " + std::to_string(total) +
                             " exceeds configured cap " + std::to_string(grid_point_cap()));
  g.values.resize(total);
  std::size_t inner = (f.dim >= 2) ? total / g.npts[0] : 1;
  if (f.dim == 1) {
    const double lo = -g.extent[0], dx = g.spacing(0);
    parallel_for(total, [&](std::size_t i) {
      double t = lo + static_cast<double>(i) * dx;
      g.values[i] = f.evaluate(&t);
    });
    return g;
  }
  parallel_for(g.npts[0], [&](std::size_t i0) {
    double x[kMaxGridDim];
    x[0] = g.coord(0, i0);
    std::size_t base = i0 * inner;
    if (f.dim == 2) {
      for (std::size_t i1 = 0; i1 < g.npts[1]; ++i1) {
        x[1] = g.coord(1, i1);
        g.values[base + i1] = f.evaluate(x);
      }
    } else {
      for (std::size_t i1 = 0; i1 < g.npts[1]; ++i1) {
        x[1] = g.coord(1, i1);
        for (std::size_t i2 = 0; i2 < g.npts[2]; ++i2) {
          x[2] = g.coord(2, i2);
          g.values[base + i1 * g.npts[2] + i2] = f.evaluate(x);
        }
      }
    }
  });
  return g;
}

namespace {
// Vertex value of the parabola through (-1,ym) (0,y0) (1,yp); y0 is the max.
double parabola_peak(double ym, double y0, double yp) {
  double denom = ym - 2.0 * y0 + yp;
  if (denom >= 0.0) return y0;
  double num = ym - yp;
  return y0 - num * num / (8.0 * denom);
}
} // namespace

double grid_lp_norm(const SampledGrid& g, double p, bool refine_sup) {
  if (p < 1.0) throw std::invalid_argument("grid_lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      double v = std::abs(g.values[i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (!refine_sup || g.dim != 1 || arg == 0 || arg + 1 >= g.values.size()) return best;
    double sq = parabola_peak(std::norm(g.values[arg - 1]), std::norm(g.values[arg]),
                              std::norm(g.values[arg + 1]));
    return std::sqrt(std::max(sq, best * best));
  }
  std::vector<double> terms(g.values.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < g.values.size(); ++i) terms[i] = std::norm(g.values[i]);
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < g.values.size(); ++i) terms[i] = std::abs(g.values[i]);
  } else {
    for (std::size_t i = 0; i < g.values.size(); ++i) terms[i] = std::pow(std::abs(g.values[i]), p);
  }
  double s = pairwise_sum(terms) * g.cell_volume();
  return std::pow(s, 1.0 / p);
}

cplx grid_inner(const SampledGrid& f, const SampledGrid& g) {
  if (f.dim != g.dim || f.values.size() != g.values.size())
    throw std::invalid_argument("grid_inner: shape mismatch");
  std::vector<double> re(f.values.size()), im(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    cplx v = f.values[i] * std::conj(g.values[i]);
    re[i] = v.real();
    im[i] = v.imag();
  }
  return cplx(pairwise_sum(re), pairwise_sum(im)) * f.cell_volume();
}

} // namespace modspace
