#ifndef MODSPACE_MATRIX_HPP
#define MODSPACE_MATRIX_HPP

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace modspace {

// Dense square matrix, d <= kMaxDim. Value type for all dilation matrices.
struct Mat {
  static constexpr int kMaxDim = 8;

  int d = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int dim) : d(dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Mat: dimension out of range");
  }
  Mat(int dim, std::initializer_list<double> entries) : Mat(dim) {
    if (static_cast<int>(entries.size()) != dim * dim)
      throw std::invalid_argument("Mat: wrong number of entries");
    int i = 0;
    for (double v : entries) {
      a[(i / dim) * kMaxDim + (i % dim)] = v;
      ++i;
    }
  }

  double& operator()(int r, int c) { return a[r * kMaxDim + c]; }
  double operator()(int r, int c) const { return a[r * kMaxDim + c]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(int dim, const double* entries) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = entries[i];
    return m;
  }
  static Mat scalar(int dim, double lambda) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = lambda;
    return m;
  }
  // Rotation by theta in the (i, j) coordinate plane.
  static Mat rotation(int dim, int i, int j, double theta);

  Mat transpose() const;
  bool is_diagonal(double tol = 0.0) const;
  double max_abs() const;
  double frobenius() const;
};

Mat operator*(const Mat& x, const Mat& y);

// y = A x for a point of length A.d.
void mat_apply(const Mat& m, const double* x, double* y);

// LU with partial pivoting.
double det(const Mat& m);
Mat inverse(const Mat& m);

} // namespace modspace

#endif
