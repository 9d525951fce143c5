#include "modspace/hausdorff.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace modspace {

namespace {

void singular_values_of(const Mat& a, double* lam) {
  if (a.is_diagonal(0.0)) {
    for (int j = 0; j < a.d; ++j) lam[j] = std::abs(a(j, j));
    std::sort(lam, lam + a.d, std::greater<double>());
    for (int j = 0; j < a.d; ++j)
      if (!(lam[j] > 0.0)) throw std::invalid_argument("Hausdorff kernel: singular matrix node");
    return;
  }
  DilationSpec spec = DilationSpec::from(a);
  for (int j = 0; j < a.d; ++j) lam[j] = spec.lambda[j];
}

} // namespace

HausdorffKernel make_kernel(int n, int d, WeightFn phi, MatrixFn matrix, const YDomain& domain,
                            std::size_t nodes) {
  if (n < 1 || n > 2) throw std::invalid_argument("make_kernel: y-dimension must be 1 or 2");
  if (d < 1 || d > Mat::kMaxDim) throw std::invalid_argument("make_kernel: bad dilation dimension");
  if (nodes < 2) throw std::invalid_argument("make_kernel: too few nodes");
  HausdorffKernel k;
  k.n = n;
  k.d = d;
  k.phi = std::move(phi);
  k.matrix = std::move(matrix);
  k.domain = domain;
  k.nodes = nodes;

  // Log-spaced midpoint nodes per axis; open ends are truncated dyadically
  // (30 octaves) since the integrand is weighted by decaying quadrature cells.
  std::array<std::vector<double>, 2> axis_nodes, axis_weights;
  std::size_t per_axis = (n == 1) ? nodes : static_cast<std::size_t>(std::lround(std::sqrt(double(nodes))));
  per_axis = std::max<std::size_t>(per_axis, 2);
  for (int ax = 0; ax < n; ++ax) {
    double hi = domain.hi[ax];
    double lo = domain.lo[ax];
    if (!(hi > 0.0)) throw std::invalid_argument("make_kernel: upper bound must be positive");
    if (lo < 0.0) throw std::invalid_argument("make_kernel: lower bound must be >= 0");
    if (!std::isfinite(hi)) hi = std::max(lo, 1.0) * std::pow(2.0, 30);
    double lo_eff = lo > 0.0 ? lo : hi * std::pow(2.0, -30);
    double ulo = std::log(lo_eff), uhi = std::log(hi);
    double du = (uhi - ulo) / static_cast<double>(per_axis);
    if (!(du > 0.0)) throw std::invalid_argument("make_kernel: empty domain");
    for (std::size_t i = 0; i < per_axis; ++i) {
      double y = std::exp(ulo + (static_cast<double>(i) + 0.5) * du);
      axis_nodes[ax].push_back(y);
      axis_weights[ax].push_back(y * du);
    }
  }
  std::size_t total = axis_nodes[0].size() * (n == 2 ? axis_nodes[1].size() : 1);
  k.node_points.reserve(total);
  k.node_weights.reserve(total);
  k.node_specs.reserve(total);
  bool diag = true;
  for (std::size_t i = 0; i < axis_nodes[0].size(); ++i) {
    for (std::size_t l = 0; l < (n == 2 ? axis_nodes[1].size() : 1); ++l) {
      std::vector<double> y{axis_nodes[0][i]};
      double w = axis_weights[0][i];
      if (n == 2) {
        y.push_back(axis_nodes[1][l]);
        w *= axis_weights[1][l];
      }
      Mat a = k.matrix(y.data());
      if (a.d != d) throw std::invalid_argument("make_kernel: matrix map has wrong dimension");
      if (!a.is_diagonal(0.0)) diag = false;
      k.node_specs.push_back(DilationSpec::from(a));
      k.node_points.push_back(std::move(y));
      k.node_weights.push_back(w);
    }
  }
  k.diagonal = diag;
  return k;
}

namespace {

// Monotone dyadic refinement of int integrand(y) dy over the declared domain.
IntegralVerdict refine_integral(const HausdorffKernel& k,
                                const std::function<double(const double*)>& integrand) {
  const int kMaxDepth = 48;
  const int kPerOctave = k.n == 1 ? 32 : 8;

  auto estimate = [&](int depth) {
    // Octave list per axis at this refinement depth.
    std::array<std::vector<std::pair<double, double>>, 2> octs;
    for (int ax = 0; ax < k.n; ++ax) {
      double lo = k.domain.lo[ax], hi = k.domain.hi[ax];
      double hi_eff = std::isfinite(hi) ? hi : std::max(lo, 1.0) * std::pow(2.0, depth);
      double lo_eff = lo > 0.0 ? lo : hi_eff * std::pow(2.0, -depth);
      double u = std::log(lo_eff);
      double utop = std::log(hi_eff);
      while (u < utop - 1e-12) {
        double unext = std::min(u + std::log(2.0), utop);
        octs[ax].push_back({u, unext});
        u = unext;
      }
    }
    auto axis_sum = [&](int ax, const std::function<double(double, double)>& fn) {
      double s = 0.0;
      for (const auto& oct : octs[ax]) {
        double du = (oct.second - oct.first) / kPerOctave;
        for (int i = 0; i < kPerOctave; ++i) {
          double y = std::exp(oct.first + (i + 0.5) * du);
          s += fn(y, y * du);
        }
      }
      return s;
    };
    if (k.n == 1) {
      return axis_sum(0, [&](double y, double w) { return w * integrand(&y); });
    }
    return axis_sum(0, [&](double y0, double w0) {
      return axis_sum(1, [&](double y1, double w1) {
        double y[2] = {y0, y1};
        return w0 * w1 * integrand(y);
      });
    });
  };

  bool lower_open = false, upper_open = false;
  for (int ax = 0; ax < k.n; ++ax) {
    lower_open = lower_open || k.domain.lo[ax] == 0.0;
    upper_open = upper_open || !std::isfinite(k.domain.hi[ax]);
  }
  IntegralVerdict v;
  if (!lower_open && !upper_open) {
    v.value = estimate(0);
    v.refinements = 0;
    return v;
  }
  double prev = estimate(4);
  int depth = 4;
  int max_depth = k.n == 1 ? kMaxDepth : 24;
  while (depth < max_depth) {
    depth += 1;
    double cur = estimate(depth);
    if (cur - prev <= 1e-9 * std::max(cur, 1e-300)) {
      v.value = cur;
      v.refinements = depth;
      return v;
    }
    prev = cur;
  }
  double cur = estimate(max_depth);
  v.value = cur;
  v.refinements = max_depth;
  v.divergent = prev > 0.0 && cur / prev > 1.01;
  return v;
}

double node_lambda_product(const Mat& a, int d, bool min_with_one, bool gamma_weight,
                           const ExponentPair* e) {
  double lam[Mat::kMaxDim];
  singular_values_of(a, lam);
  double prod = 1.0;
  for (int j = 0; j < d; ++j) {
    if (gamma_weight)
      prod *= gamma_pq(*e, lam[j]);
    else if (min_with_one)
      prod *= std::min(1.0, 1.0 / lam[j]);
  }
  return prod;
}

} // namespace

IntegralVerdict well_definedness_check(const HausdorffKernel& k) {
  return refine_integral(k, [&](const double* y) {
    double phi = std::abs(k.phi(y));
    if (phi == 0.0) return 0.0;
    return phi * node_lambda_product(k.matrix(y), k.d, true, false, nullptr);
  });
}

IntegralVerdict boundedness_condition(const HausdorffKernel& k, const ExponentPair& e) {
  return refine_integral(k, [&](const double* y) {
    double phi = std::abs(k.phi(y));
    if (phi == 0.0) return 0.0;
    return phi * node_lambda_product(k.matrix(y), k.d, false, true, &e);
  });
}

FunctionModel apply(const HausdorffKernel& k, const FunctionModel& f) {
  if (f.dim != k.d) throw std::invalid_argument("apply: dimension mismatch");
  IntegralVerdict wd = well_definedness_check(k);
  if (wd.divergent)
    throw std::runtime_error(
        "apply: well-definedness integral diverges (estimate " + fmt_double(wd.value) + " after " +
        std::to_string(wd.refinements) + " refinements); the kernel action is not defined");

  struct Term {
    cplx coef;
    Mat a;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  double lam_min = std::numeric_limits<double>::infinity();
  double lam_max = 0.0;
  for (std::size_t i = 0; i < k.node_points.size(); ++i) {
    cplx c = k.node_weights[i] * k.phi(k.node_points[i].data());
    if (c == cplx(0.0, 0.0)) continue;
    terms->push_back({c, k.node_specs[i].a});
    lam_min = std::min(lam_min, k.node_specs[i].lambda[k.d - 1]);
    lam_max = std::max(lam_max, k.node_specs[i].lambda[0]);
  }
  FunctionModel out;
  out.dim = k.d;
  int d = k.d;
  auto base = f.evaluate;
  out.evaluate = [terms, base, d](const double* x) {
    cplx acc = 0.0;
    double y[Mat::kMaxDim];
    for (const auto& t : *terms) {
      mat_apply(t.a, x, y);
      acc += t.coef * base(y);
    }
    return acc;
  };
  if (terms->empty()) {
    out.hint.time_radius = 0.0;
    out.hint.freq_radius = 0.0;
  } else {
    out.hint.time_radius = f.hint.time_radius / lam_min;
    out.hint.freq_radius = f.hint.freq_radius * lam_max;
  }
  return out;
}

HausdorffKernel adjoint_kernel(const HausdorffKernel& k) {
  WeightFn phi = k.phi;
  MatrixFn matrix = k.matrix;
  WeightFn adj_phi = [phi, matrix](const double* y) {
    return std::conj(phi(y)) / std::abs(det(matrix(y)));
  };
  MatrixFn adj_matrix = [matrix](const double* y) { return inverse(matrix(y)); };
  return make_kernel(k.n, k.d, std::move(adj_phi), std::move(adj_matrix), k.domain, k.nodes);
}

double fourier_commutation_error(const HausdorffKernel& k, AxisSet axes, const FunctionModel& f,
                                 double extent, std::size_t npts) {
  if (axes >= (1u << k.d)) throw std::invalid_argument("fourier_commutation_error: axis out of range");
  bool full = axes == all_axes(k.d);
  if (!full && axes != 0 && !k.diagonal)
    throw std::invalid_argument(
        "fourier_commutation_error: proper subsets need a diagonal kernel");

  SampledGrid lhs = partial_fourier(sample(apply(k, f), extent, npts), axes);

  WeightFn phi = k.phi;
  MatrixFn matrix = k.matrix;
  int d = k.d;
  WeightFn phi_j;
  MatrixFn matrix_j;
  if (axes == 0) {
    phi_j = phi;
    matrix_j = matrix;
  } else if (full && !k.diagonal) {
    phi_j = [phi, matrix](const double* y) { return phi(y) / std::abs(det(matrix(y))); };
    matrix_j = [matrix](const double* y) { return inverse(matrix(y)).transpose(); };
  } else {
    phi_j = [phi, matrix, axes, d](const double* y) {
      Mat a = matrix(y);
      double prod = 1.0;
      for (int j = 0; j < d; ++j)
        if (axis_in(axes, j)) prod *= std::abs(a(j, j));
      return phi(y) / prod;
    };
    matrix_j = [matrix, axes, d](const double* y) {
      Mat a = matrix(y);
      for (int j = 0; j < d; ++j)
        if (axis_in(axes, j)) a(j, j) = 1.0 / a(j, j);
      return a;
    };
  }
  HausdorffKernel kj = make_kernel(k.n, k.d, std::move(phi_j), std::move(matrix_j), k.domain, k.nodes);

  FunctionModel ff = partial_fourier(f, axes);
  std::array<double, kMaxGridDim> exts{};
  std::array<std::size_t, kMaxGridDim> ns{};
  for (int j = 0; j < k.d; ++j) {
    exts[j] = axis_in(axes, j) ? static_cast<double>(npts) / (4.0 * extent) : extent;
    ns[j] = npts;
  }
  SampledGrid rhs = sample(apply(kj, ff), exts, ns);

  double err = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    err = std::max(err, std::abs(lhs.values[i] - rhs.values[i]));
  return err;
}

MinkowskiReport minkowski_bound_check(const HausdorffKernel& k, const FunctionModel& f,
                                      const ExponentPair& e, const FunctionModel& window,
                                      const NormOptions& opts) {
  IntegralVerdict cond = boundedness_condition(k, e);
  if (cond.divergent)
    throw std::runtime_error("minkowski_bound_check: boundedness condition diverges");
  MinkowskiReport rep;
  rep.condition = cond.value;
  rep.f_norm = modulation_norm_auto(f, e, window, opts);

  FunctionModel hf = apply(k, f);
  // The kernel output can spread slowly (a 1/x tail for Hardy-type kernels);
  // cap the lattice instead of trusting the worst-case node hint.
  FunctionModel capped = hf;
  capped.hint.time_radius = std::min(hf.hint.time_radius, 48.0);
  capped.hint.freq_radius = std::min(hf.hint.freq_radius, 64.0);
  TFGrid grid = default_tf_grid(capped, window, opts);
  rep.h_norm = modulation_norm_stft(capped, e, window, grid);
  rep.ratio = rep.h_norm / (rep.condition * rep.f_norm);
  return rep;
}

namespace {

struct KernelFileData {
  int n = 1;
  int dim = 1;
  std::string phi_kind;
  std::vector<double> phi_args;
  std::string phi_table_path;
  std::string a_kind;
  std::vector<double> a_args;
  double dom_lo = 0.0, dom_hi = 1.0;
  std::size_t nodes = 256;
  bool have_phi = false, have_a = false;
};

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

} // namespace

HausdorffKernel parse_kernel_text(const std::string& text, const std::string& origin) {
  KernelFileData kd;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    auto notspace = [](char c) { return !std::isspace(static_cast<unsigned char>(c)); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(origin, lineno, "expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [&](std::string s) {
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
      return s;
    };
    key = trim(key);
    value = trim(value);
    std::istringstream vs(value);
    if (key == "n") {
      if (!(vs >> kd.n) || kd.n != 1) parse_fail(origin, lineno, "kernel files support n = 1");
    } else if (key == "dim") {
      if (!(vs >> kd.dim) || kd.dim < 1 || kd.dim > Mat::kMaxDim)
        parse_fail(origin, lineno, "bad dim");
    } else if (key == "phi") {
      std::string kind;
      vs >> kind;
      if (kind.rfind("table:", 0) == 0) {
        kd.phi_kind = "table";
        kd.phi_table_path = kind.substr(6);
      } else if (kind == "hardy" || kind == "power" || kind == "bump") {
        kd.phi_kind = kind;
        double x;
        while (vs >> x) kd.phi_args.push_back(x);
        if (kind == "power" && kd.phi_args.size() != 1)
          parse_fail(origin, lineno, "phi = power needs one exponent");
        if (kind == "bump" && kd.phi_args.size() != 2)
          parse_fail(origin, lineno, "phi = bump needs center and radius");
      } else {
        parse_fail(origin, lineno, "unknown phi '" + kind + "'");
      }
      kd.have_phi = true;
    } else if (key == "A") {
      std::string kind;
      vs >> kind;
      if (kind == "scalar") {
        kd.a_kind = "scalar";
      } else if (kind == "diag") {
        kd.a_kind = "diag";
        double x;
        while (vs >> x) kd.a_args.push_back(x);
        if (kd.a_args.empty()) parse_fail(origin, lineno, "A = diag needs power-law exponents");
      } else {
        parse_fail(origin, lineno, "unknown A '" + kind + "'");
      }
      kd.have_a = true;
    } else if (key == "domain") {
      std::string lo_s, hi_s;
      if (!(vs >> lo_s >> hi_s)) parse_fail(origin, lineno, "domain needs two bounds");
      try {
        kd.dom_lo = std::stod(lo_s);
        kd.dom_hi = (hi_s == "inf") ? std::numeric_limits<double>::infinity() : std::stod(hi_s);
      } catch (const std::exception&) {
        parse_fail(origin, lineno, "bad domain bound");
      }
      if (kd.dom_lo < 0.0 || kd.dom_hi <= kd.dom_lo) parse_fail(origin, lineno, "empty domain");
    } else if (key == "nodes") {
      long long v = 0;
      if (!(vs >> v) || v < 2) parse_fail(origin, lineno, "nodes must be >= 2");
      kd.nodes = static_cast<std::size_t>(v);
    } else {
      parse_fail(origin, lineno, "unknown key '" + key + "'");
    }
  }
  if (!kd.have_phi) parse_fail(origin, lineno, "missing phi");
  if (!kd.have_a) parse_fail(origin, lineno, "missing A");

  WeightFn phi;
  double dom_lo = kd.dom_lo, dom_hi = kd.dom_hi;
  if (kd.phi_kind == "hardy") {
    phi = [](const double* y) { return cplx(y[0] > 0.0 && y[0] < 1.0 ? 1.0 : 0.0, 0.0); };
  } else if (kd.phi_kind == "power") {
    double alpha = kd.phi_args[0];
    phi = [alpha, dom_lo, dom_hi](const double* y) {
      if (y[0] <= dom_lo || y[0] >= dom_hi) return cplx(0.0, 0.0);
      return cplx(std::pow(y[0], alpha), 0.0);
    };
  } else if (kd.phi_kind == "bump") {
    double c = kd.phi_args[0], r = kd.phi_args[1];
    if (r <= 0.0) throw std::runtime_error(origin + ": bump radius must be positive");
    double s = 4.0 * r / 3.0;
    double mass = 1.25 * s; // integral of the plateau profile at scale s
    phi = [c, s, mass](const double* y) { return cplx(plateau_bump((y[0] - c) / s) / mass, 0.0); };
  } else { // table
    std::ifstream tf(kd.phi_table_path);
    if (!tf) throw std::runtime_error(origin + ": cannot open phi table '" + kd.phi_table_path + "'");
    auto pts = std::make_shared<std::vector<std::pair<double, double>>>();
    std::string row;
    int tline = 0;
    while (std::getline(tf, row)) {
      ++tline;
      if (row.empty() || row[0] == '#') continue;
      std::replace(row.begin(), row.end(), ',', ' ');
      std::istringstream rs(row);
      double y, v;
      if (!(rs >> y >> v)) parse_fail(kd.phi_table_path, tline, "expected 'y, value'");
      pts->push_back({y, v});
    }
    if (pts->size() < 2) throw std::runtime_error(kd.phi_table_path + ": need at least two rows");
    std::sort(pts->begin(), pts->end());
    phi = [pts](const double* y) -> cplx {
      if (y[0] <= pts->front().first || y[0] >= pts->back().first) return 0.0;
      auto it = std::lower_bound(pts->begin(), pts->end(), std::make_pair(y[0], -1e308));
      auto lo = it - 1;
      double t = (y[0] - lo->first) / (it->first - lo->first);
      return cplx(lo->second + t * (it->second - lo->second), 0.0);
    };
  }

  MatrixFn matrix;
  int dim = kd.dim;
  if (kd.a_kind == "scalar") {
    matrix = [dim](const double* y) { return Mat::scalar(dim, y[0]); };
  } else {
    if (static_cast<int>(kd.a_args.size()) != dim)
      throw std::runtime_error(origin + ": A = diag needs exactly dim exponents");
    auto powers = kd.a_args;
    matrix = [dim, powers](const double* y) {
      Mat m(dim);
      for (int j = 0; j < dim; ++j) m(j, j) = std::pow(y[0], powers[j]);
      return m;
    };
  }

  YDomain dom;
  dom.n = 1;
  dom.lo[0] = kd.dom_lo;
  dom.hi[0] = kd.dom_hi;
  return make_kernel(1, dim, std::move(phi), std::move(matrix), dom, kd.nodes);
}

HausdorffKernel parse_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open kernel file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_kernel_text(ss.str(), path);
}

} // namespace modspace
