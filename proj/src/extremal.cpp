#include "modspace/extremal.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace modspace {

namespace {

// Master table of h_unit = F^{-1}[plateau_bump], built once by a large
// centered FFT (spectral spacing 1/2048, spatial spacing 1/1024). h_unit is
// real and even; only x >= 0 is stored.
struct UnitTable {
  std::vector<double> values; // h_unit(i / kStep)
  double peak = 0.0;
  static constexpr double kStep = 1024.0;
};

const UnitTable& unit_table() {
  static UnitTable table = [] {
    const double xi_extent = 512.0;
    const std::size_t n = std::size_t{1} << 21;
    SampledGrid spec;
    spec.dim = 1;
    spec.extent[0] = xi_extent;
    spec.npts[0] = n;
    spec.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) spec.values[i] = plateau_bump(spec.coord(0, i));
    SampledGrid h = partial_fourier(spec, 1u, true);
    // h grid: extent 1024, spacing 1/1024; keep x in [0, 256].
    UnitTable t;
    std::size_t zero = h.npts[0] / 2;
    std::size_t keep = static_cast<std::size_t>(256.0 * UnitTable::kStep);
    t.values.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) t.values[i] = h.values[zero + i].real();
    t.peak = t.values[0];
    return t;
  }();
  return table;
}

// Catmull-Rom on the even-symmetric table.
double unit_eval(double x) {
  const UnitTable& t = unit_table();
  double ax = std::abs(x) * UnitTable::kStep;
  std::size_t n = t.values.size();
  if (ax >= static_cast<double>(n - 3)) return 0.0;
  std::size_t i = static_cast<std::size_t>(ax);
  double u = ax - static_cast<double>(i);
  double ym = i == 0 ? t.values[1] : t.values[i - 1];
  double y0 = t.values[i];
  double yp = t.values[i + 1];
  double y2 = t.values[i + 2];
  double a = -0.5 * ym + 1.5 * y0 - 1.5 * yp + 0.5 * y2;
  double b = ym - 2.5 * y0 + 2.0 * yp - 0.5 * y2;
  double c = 0.5 * (yp - ym);
  return ((a * u + b) * u + c) * u + y0;
}

double unit_radius(double rel_cut) {
  const UnitTable& t = unit_table();
  double thr = rel_cut * t.peak;
  std::size_t last = 0;
  for (std::size_t i = 0; i < t.values.size(); ++i)
    if (std::abs(t.values[i]) >= thr) last = i;
  return static_cast<double>(last + 2) / UnitTable::kStep;
}

double unit_lp(double p) {
  const UnitTable& t = unit_table();
  if (std::isinf(p)) return t.peak;
  double s = std::pow(std::abs(t.values[0]), p);
  for (std::size_t i = 1; i < t.values.size(); ++i) s += 2.0 * std::pow(std::abs(t.values[i]), p);
  return std::pow(s / UnitTable::kStep, 1.0 / p);
}

} // namespace

double inv_bump_radius(double r, double rel_cut) { return unit_radius(rel_cut) / (4.0 * r / 3.0); }

FunctionModel bump_model(double r) {
  if (r <= 0.0) throw std::invalid_argument("bump_model: radius must be positive");
  FunctionModel f;
  f.dim = 1;
  double s = 4.0 * r / 3.0;
  f.evaluate = [s](const double* x) { return cplx(plateau_bump(x[0] / s), 0.0); };
  f.fourier = [s](const double* xi) { return cplx(s * unit_eval(s * xi[0]), 0.0); };
  f.hint.time_radius = r;
  f.hint.freq_radius = unit_radius(1e-8) / s;
  return f;
}

FunctionModel inv_bump_model(double r, double rel_cut) {
  if (r <= 0.0) throw std::invalid_argument("inv_bump_model: radius must be positive");
  FunctionModel f;
  f.dim = 1;
  double s = 4.0 * r / 3.0;
  double cut = unit_radius(rel_cut);
  f.evaluate = [s, cut](const double* x) -> cplx {
    double u = s * x[0];
    if (std::abs(u) > cut) return 0.0;
    return cplx(s * unit_eval(u), 0.0);
  };
  f.fourier = [s](const double* xi) { return cplx(plateau_bump(xi[0] / s), 0.0); };
  f.hint.time_radius = cut / s;
  f.hint.freq_radius = r;
  return f;
}

double inv_bump_lp_norm(double r, double p) {
  double s = 4.0 * r / 3.0;
  if (std::isinf(p)) return s * unit_lp(p);
  // ||s h(s x)||_p = s^{1 - 1/p} ||h||_p
  return std::pow(s, 1.0 - 1.0 / p) * unit_lp(p);
}

FunctionModel make_g1(int dim) {
  double r = 0.7 / std::sqrt(static_cast<double>(dim));
  std::vector<FunctionModel> fs;
  for (int j = 0; j < dim; ++j) fs.push_back(inv_bump_model(r));
  return tensor(std::move(fs));
}

FunctionModel make_g2(int dim) {
  double r = 0.95 / std::sqrt(static_cast<double>(dim));
  std::vector<FunctionModel> fs;
  for (int j = 0; j < dim; ++j) fs.push_back(bump_model(r));
  return tensor(std::move(fs));
}

std::size_t flam_term_count(double lambda, int dim) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("flam_term_count: lambda must lie in (0, 1]");
  std::size_t side = 2 * static_cast<std::size_t>(std::floor(1.0 / lambda + 1e-9)) + 1;
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= side;
  return n;
}

FunctionModel make_flam(double lambda, double L, int dim, double p_normalization) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("make_flam: lambda must lie in (0, 1]");
  if (L <= 0.0) throw std::invalid_argument("make_flam: lattice spacing must be positive");
  if (dim > 2) throw std::invalid_argument("make_flam: dimensions above 2 not supported");
  const double r = 0.25;
  const double s = 4.0 * r / 3.0;
  const double cut = unit_radius(1e-9);
  const double h_radius = cut / s;
  const int kmax = static_cast<int>(std::floor(1.0 / lambda + 1e-9));
  const double axis_scale = 1.0 / inv_bump_lp_norm(r, p_normalization);

  FunctionModel f;
  f.dim = dim;
  f.evaluate = [dim, kmax, L, s, cut, axis_scale](const double* x) {
    // Per axis, only lattice sites with |x_j - L k| inside the h support
    // contribute; accumulate the separable product over those windows.
    int lo[kMaxGridDim], hi[kMaxGridDim];
    for (int j = 0; j < dim; ++j) {
      lo[j] = std::max(-kmax, static_cast<int>(std::ceil((x[j] - cut / s) / L)));
      hi[j] = std::min(kmax, static_cast<int>(std::floor((x[j] + cut / s) / L)));
      if (lo[j] > hi[j]) return cplx(0.0, 0.0);
    }
    cplx total = 0.0;
    int k[kMaxGridDim];
    for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0]) {
      if (dim == 1) {
        double t = x[0] - L * k[0];
        total += axis_scale * s * unit_eval(s * t) * unit_phase(kTwoPi * t * k[0]);
      } else {
        for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1]) {
          cplx v = 1.0;
          for (int j = 0; j < 2; ++j) {
            double t = x[j] - L * k[j];
            v *= axis_scale * s * unit_eval(s * t) * unit_phase(kTwoPi * t * k[j]);
          }
          total += v;
        }
      }
    }
    return total;
  };
  f.fourier = [dim, kmax, L, s, axis_scale](const double* xi) {
    // Spectral patches are disjoint: at most one k contributes.
    cplx v = 1.0;
    for (int j = 0; j < dim; ++j) {
      int k = static_cast<int>(std::lround(xi[j]));
      if (std::abs(k) > kmax) return cplx(0.0, 0.0);
      double u = xi[j] - k;
      double b = plateau_bump(u / s);
      if (b == 0.0) return cplx(0.0, 0.0);
      v *= axis_scale * b * unit_phase(-kTwoPi * L * k * xi[j]);
    }
    return v;
  };
  double root_d = std::sqrt(static_cast<double>(dim));
  f.hint.time_radius = (L * kmax + h_radius) * root_d;
  f.hint.freq_radius = (kmax + r) * root_d;
  return f;
}

FunctionModel make_tensor_family(const std::vector<AxisKind>& kinds,
                                 const std::vector<double>& lambdas) {
  if (kinds.size() != lambdas.size() || kinds.empty())
    throw std::invalid_argument("make_tensor_family: kinds and lambdas must match");
  std::vector<FunctionModel> fs;
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    FunctionModel base;
    switch (kinds[j]) {
      case AxisKind::G1: base = make_g1(1); break;
      case AxisKind::G2: base = make_g2(1); break;
      case AxisKind::Gauss: base = gaussian(1); break;
    }
    fs.push_back(lambdas[j] == 1.0 ? base : dilate(base, lambdas[j]));
  }
  return tensor(std::move(fs));
}

FunctionModel necessity_eta_1d() {
  // eta = (F^{-1} bump)^2 / peak: nonnegative, eta(0) = 1, spectrum in [-0.6, 0.6].
  static const FunctionModel eta = [] {
    FunctionModel base = inv_bump_model(0.3, 1e-5);
    double peak = base.evaluate(std::array<double, 1>{0.0}.data()).real();
    FunctionModel f;
    f.dim = 1;
    auto ev = base.evaluate;
    double inv2 = 1.0 / (peak * peak);
    f.evaluate = [ev, inv2](const double* x) {
      cplx v = ev(x);
      return cplx(v.real() * v.real() * inv2, 0.0);
    };
    f.hint.time_radius = base.hint.time_radius;
    f.hint.freq_radius = 0.6;
    return f;
  }();
  return eta;
}

FunctionModel necessity_factor(double r_exponent, int M) {
  if (M < 0 || M > 8) throw std::invalid_argument("necessity_factor: M must lie in [0, 8]");
  FunctionModel eta = necessity_eta_1d();
  double eta_radius = eta.hint.time_radius;
  double hi = std::pow(2.0, M + 1);
  auto eta_eval = eta.evaluate;
  FunctionModel f;
  f.dim = 1;
  // ((|.|^r chi_{[1/2, hi]}) * eta)(x) by composite Simpson over the window
  // where both factors live.
  f.evaluate = [r_exponent, hi, eta_radius, eta_eval](const double* x) -> cplx {
    double a = std::max(0.5, x[0] - eta_radius);
    double b = std::min(hi, x[0] + eta_radius);
    if (a >= b) return 0.0;
    int n = std::max(32, static_cast<int>(std::ceil((b - a) * 16.0)));
    n += n % 2; // Simpson needs an even interval count
    double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      double t = a + i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      double arg = x[0] - t;
      acc += w * std::pow(t, r_exponent) * eta_eval(&arg).real();
    }
    return cplx(acc * h / 3.0, 0.0);
  };
  f.hint.time_radius = hi + eta_radius;
  f.hint.freq_radius = eta.hint.freq_radius;
  return f;
}

FunctionModel make_hausdorff_necessity(AxisSet axes, int M, const ExponentPair& e, int dim) {
  if (axes >= (1u << dim)) throw std::invalid_argument("make_hausdorff_necessity: axis out of range");
  std::vector<FunctionModel> fs;
  for (int j = 0; j < dim; ++j) {
    double r = axis_in(axes, j) ? -e.inv_q() : -e.inv_p();
    fs.push_back(necessity_factor(r, M));
  }
  return tensor(std::move(fs));
}

double necessity_growth_exponent(AxisSet axes, const ExponentPair& e, int dim) {
  int j = axis_count(axes);
  return j * e.inv_q() + (dim - j) * e.inv_p();
}

std::vector<double> dyadic_lambdas(bool shrinking, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k)
    out.push_back(shrinking ? std::pow(2.0, -k) : std::pow(2.0, k));
  return out;
}

ExtremalFamily g1_family(int dim) {
  ExtremalFamily fam;
  fam.kind = FamilyKind::BandlimitedG1;
  fam.name = "g1";
  fam.dim = dim;
  fam.shrinking = true;
  fam.lambdas = dyadic_lambdas(true, 7);
  fam.generator = [dim](double) { return make_g1(dim); };
  fam.ratio_exponent = [](const ExponentPair& e, int d) { return -d * e.inv_p(); };
  fam.norm_exponent = [](const ExponentPair&, int) { return 0.0; };
  return fam;
}

ExtremalFamily g2_family(int dim) {
  ExtremalFamily fam;
  fam.kind = FamilyKind::CompactG2;
  fam.name = "g2";
  fam.dim = dim;
  fam.shrinking = false;
  fam.lambdas = dyadic_lambdas(false, 6);
  fam.generator = [dim](double) { return make_g2(dim); };
  fam.ratio_exponent = [](const ExponentPair& e, int d) { return d * (e.inv_q() - 1.0); };
  fam.norm_exponent = [](const ExponentPair&, int) { return 0.0; };
  return fam;
}

ExtremalFamily flam_family(int dim, double L, double p_normalization) {
  ExtremalFamily fam;
  fam.kind = FamilyKind::LatticeFlam;
  fam.name = "flam";
  fam.dim = dim;
  fam.shrinking = true;
  fam.lattice_spacing = L;
  fam.lambdas = dyadic_lambdas(true, 7);
  fam.generator = [dim, L, p_normalization](double lambda) {
    return make_flam(lambda, L, dim, p_normalization);
  };
  fam.ratio_exponent = [](const ExponentPair& e, int d) {
    return d * (-2.0 * e.inv_p() + e.inv_q());
  };
  fam.norm_exponent = [](const ExponentPair& e, int d) { return -d * e.inv_q(); };
  return fam;
}

} // namespace modspace
