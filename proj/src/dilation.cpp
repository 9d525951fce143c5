#include "modspace/dilation.hpp"

#include <cmath>

namespace modspace {

namespace {
void branches(const ExponentPair& e, double out[3]) {
  double a = e.inv_p(), b = e.inv_q();
  out[0] = -a;
  out[1] = b - 1.0;
  out[2] = -2.0 * a + b;
}
} // namespace

double mu1(const ExponentPair& e) {
  double v[3];
  branches(e, v);
  return std::max(v[0], std::max(v[1], v[2]));
}

double mu2(const ExponentPair& e) {
  double v[3];
  branches(e, v);
  return std::min(v[0], std::min(v[1], v[2]));
}

double gamma_pq(const ExponentPair& e, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gamma_pq: lambda must be positive");
  double v[3];
  branches(e, v);
  return std::max(std::pow(lambda, v[0]), std::max(std::pow(lambda, v[1]), std::pow(lambda, v[2])));
}

RegionLabel classify_region(const ExponentPair& e) {
  double v[3];
  branches(e, v);
  const double tie = 1e-12;
  RegionLabel label;
  int ai = 0, bi = 0;
  for (int i = 1; i < 3; ++i) {
    if (v[i] > v[ai]) ai = i;
    if (v[i] < v[bi]) bi = i;
  }
  label.a_branch = static_cast<Branch>(ai);
  label.b_branch = static_cast<Branch>(bi);
  for (int i = 0; i < 3; ++i) {
    if (i != ai && std::abs(v[i] - v[ai]) < tie) label.a_boundary = true;
    if (i != bi && std::abs(v[i] - v[bi]) < tie) label.b_boundary = true;
  }
  return label;
}

Mat DilationSpec::lambda_mat() const {
  Mat m(a.d);
  for (int j = 0; j < a.d; ++j) m(j, j) = lambda[j];
  return m;
}

DilationSpec DilationSpec::from(const Mat& a) {
  const int d = a.d;
  double adet = det(a);
  double scale = std::pow(std::max(a.max_abs(), 1e-300), d);
  if (std::abs(adet) <= 1e-12 * scale)
    throw std::invalid_argument("DilationSpec: matrix is singular or nearly singular");

  // Jacobi eigenvalue iteration on the symmetric S = A^T A.
  Mat s = a.transpose() * a;
  Mat v = Mat::identity(d);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int r = 0; r < d; ++r)
      for (int c = r + 1; c < d; ++c) off = std::max(off, std::abs(s(r, c)));
    if (off < 1e-15 * std::max(1.0, s.max_abs())) break;
    for (int r = 0; r < d; ++r) {
      for (int c = r + 1; c < d; ++c) {
        if (s(r, c) == 0.0) continue;
        double theta = 0.5 * std::atan2(2.0 * s(r, c), s(c, c) - s(r, r));
        double co = std::cos(theta), si = std::sin(theta);
        for (int k = 0; k < d; ++k) {
          double srk = s(r, k), sck = s(c, k);
          s(r, k) = co * srk - si * sck;
          s(c, k) = si * srk + co * sck;
        }
        for (int k = 0; k < d; ++k) {
          double skr = s(k, r), skc = s(k, c);
          s(k, r) = co * skr - si * skc;
          s(k, c) = si * skr + co * skc;
          double vkr = v(k, r), vkc = v(k, c);
          v(k, r) = co * vkr - si * vkc;
          v(k, c) = si * vkr + co * vkc;
        }
      }
    }
  }

  // Descending order, ties by original column index.
  std::array<int, Mat::kMaxDim> order{};
  for (int j = 0; j < d; ++j) order[j] = j;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (s(order[j], order[j]) > s(order[i], order[i])) std::swap(order[i], order[j]);

  DilationSpec spec;
  spec.a = a;
  spec.det_a = adet;
  spec.q = Mat(d);
  spec.p = Mat(d);
  for (int j = 0; j < d; ++j) {
    double eig = s(order[j], order[j]);
    if (eig <= 0.0) throw std::invalid_argument("DilationSpec: nonpositive eigenvalue of A^T A");
    spec.lambda[j] = std::sqrt(eig);
  }
  // Q = V^T (rows are the eigenvectors), P = A V Lambda^{-1}.
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) spec.q(r, c) = v(c, order[r]);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += a(r, k) * v(k, order[c]);
      spec.p(r, c) = acc / spec.lambda[c];
    }
  }
  return spec;
}

double predicted_bound(const DilationSpec& spec, const ExponentPair& e) {
  double prod = 1.0;
  for (int j = 0; j < spec.dim(); ++j) prod *= gamma_pq(e, spec.lambda[j]);
  return prod;
}

double empirical_ratio(const DilationSpec& spec, const FunctionModel& f, const ExponentPair& e,
                       const FunctionModel& window, const NormOptions& opts) {
  double denom = modulation_norm_auto(f, e, window, opts);
  if (denom < 1e-12) throw std::invalid_argument("empirical_ratio: function norm is numerically zero");
  double numer = modulation_norm_auto(dilate(f, spec.a), e, window, opts);
  return numer / denom;
}

} // namespace modspace
