#ifndef MODSPACE_DILATION_HPP
#define MODSPACE_DILATION_HPP

#include "modspace/norms.hpp"

namespace modspace {

// mu1 = max, mu2 = min of the three affine branches -1/p, 1/q - 1, -2/p + 1/q.
double mu1(const ExponentPair& e);
double mu2(const ExponentPair& e);

// Gamma_{p,q}(lambda) = max{lambda^{-1/p}, lambda^{1/q-1}, lambda^{-2/p+1/q}};
// equals lambda^{mu1} on [1, inf) and lambda^{mu2} on (0, 1].
double gamma_pq(const ExponentPair& e, double lambda);

// Which branch attains mu1 / mu2 on the (1/p, 1/q) square.
enum class Branch { InvP = 0, InvQMinusOne = 1, Mixed = 2 };

struct RegionLabel {
  Branch a_branch = Branch::InvP; // region A_i, i = branch index + 1
  Branch b_branch = Branch::InvP; // region B_i
  bool a_boundary = false;        // two branches tie within 1e-12
  bool b_boundary = false;
};

RegionLabel classify_region(const ExponentPair& e);

// Singular value decomposition A = P Lambda Q with descending positive
// singular values and orthogonal P, Q (two-sided Jacobi on A^T A, d <= 8).
struct DilationSpec {
  Mat a;
  Mat p;
  Mat q;
  std::array<double, Mat::kMaxDim> lambda{};
  double det_a = 0.0;

  int dim() const { return a.d; }
  Mat lambda_mat() const;
  static DilationSpec from(const Mat& a);
};

// prod_j Gamma_{p,q}(lambda_j): the operator-norm equivalence class of D_A.
double predicted_bound(const DilationSpec& spec, const ExponentPair& e);

// ||D_A f||_{M^{p,q}} / ||f||_{M^{p,q}} with a fixed window; lattices are
// auto-sized from the support hints on both sides.
double empirical_ratio(const DilationSpec& spec, const FunctionModel& f, const ExponentPair& e,
                       const FunctionModel& window, const NormOptions& opts = {});

} // namespace modspace

#endif
