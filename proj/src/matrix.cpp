#include "modspace/matrix.hpp"

#include <cmath>

namespace modspace {

Mat Mat::rotation(int dim, int i, int j, double theta) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j)
    throw std::invalid_argument("Mat::rotation: bad plane");
  Mat m = identity(dim);
  double c = std::cos(theta), s = std::sin(theta);
  m(i, i) = c;
  m(j, j) = c;
  m(i, j) = -s;
  m(j, i) = s;
  return m;
}

Mat Mat::transpose() const {
  Mat t(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Mat::is_diagonal(double tol) const {
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (r != c && std::abs((*this)(r, c)) > tol) return false;
  return true;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m = std::max(m, std::abs((*this)(r, c)));
  return m;
}

double Mat::frobenius() const {
  double s = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) s += (*this)(r, c) * (*this)(r, c);
  return std::sqrt(s);
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.d != y.d) throw std::invalid_argument("Mat product: dimension mismatch");
  Mat z(x.d);
  for (int r = 0; r < x.d; ++r)
    for (int c = 0; c < x.d; ++c) {
      double s = 0.0;
      for (int k = 0; k < x.d; ++k) s += x(r, k) * y(k, c);
      z(r, c) = s;
    }
  return z;
}

void mat_apply(const Mat& m, const double* x, double* y) {
  for (int r = 0; r < m.d; ++r) {
    double s = 0.0;
    for (int c = 0; c < m.d; ++c) s += m(r, c) * x[c];
    y[r] = s;
  }
}

namespace {

// In-place LU with partial pivoting; returns permutation sign, 0 on singularity.
int lu_decompose(Mat& m, std::array<int, Mat::kMaxDim>& perm) {
  int d = m.d, sign = 1;
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    double best = std::abs(m(col, col));
    for (int r = col + 1; r < d; ++r) {
      double v = std::abs(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0;
    if (piv != col) {
      for (int c = 0; c < d; ++c) std::swap(m(piv, c), m(col, c));
      std::swap(perm[piv], perm[col]);
      sign = -sign;
    }
    for (int r = col + 1; r < d; ++r) {
      double f = m(r, col) / m(col, col);
      m(r, col) = f;
      for (int c = col + 1; c < d; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return sign;
}

} // namespace

double det(const Mat& m) {
  Mat lu = m;
  std::array<int, Mat::kMaxDim> perm;
  int sign = lu_decompose(lu, perm);
  if (sign == 0) return 0.0;
  double p = sign;
  for (int i = 0; i < m.d; ++i) p *= lu(i, i);
  return p;
}

Mat inverse(const Mat& m) {
  Mat lu = m;
  std::array<int, Mat::kMaxDim> perm;
  int sign = lu_decompose(lu, perm);
  if (sign == 0) throw std::invalid_argument("Mat inverse: singular matrix");
  int d = m.d;
  Mat inv(d);
  for (int col = 0; col < d; ++col) {
    std::array<double, Mat::kMaxDim> b{};
    for (int i = 0; i < d; ++i) b[i] = (perm[i] == col) ? 1.0 : 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < i; ++j) b[i] -= lu(i, j) * b[j];
    for (int i = d - 1; i >= 0; --i) {
      for (int j = i + 1; j < d; ++j) b[i] -= lu(i, j) * b[j];
      b[i] /= lu(i, i);
    }
    for (int i = 0; i < d; ++i) inv(i, col) = b[i];
  }
  return inv;
}

} // namespace modspace
