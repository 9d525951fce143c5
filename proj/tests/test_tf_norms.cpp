#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modspace/experiments.hpp"
#include "modspace/extremal.hpp"
#include "modspace/norms.hpp"

using namespace modspace;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

cplx l2_inner(const FunctionModel& f, const FunctionModel& g, double extent, std::size_t n) {
  return grid_inner(sample(f, extent, n), sample(g, extent, n));
}

} // namespace

TEST_CASE("exponent pairs validate and print") {
  CHECK_THROWS_AS(ExponentPair(0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ExponentPair(2.0, 0.0), std::invalid_argument);
  ExponentPair e(2.0, kInf);
  CHECK(e.inv_q() == 0.0);
  CHECK(e.str() == "2:inf");
  ExponentPair r = ExponentPair::from_inverse(0.0, 0.25);
  CHECK(std::isinf(r.p));
  CHECK(r.q == doctest::Approx(4.0));
}

TEST_CASE("stft matches the closed form for the Gaussian pair") {
  FunctionModel phi = gaussian(1); // e^{-pi t^2}
  TFGrid grid = TFGrid::symmetric(1, 6.0, 0.25, 6.0, 0.25);
  TFCoefficients c = stft(phi, phi, grid);
  double worst_mod = 0.0, worst_full = 0.0;
  for (std::size_t i = 0; i < grid.x[0].count; ++i) {
    double x = grid.x[0].node(i);
    for (std::size_t m = 0; m < grid.xi[0].count; ++m) {
      double xi = grid.xi[0].node(m);
      double mod = std::pow(2.0, -0.5) * std::exp(-kPi * (x * x + xi * xi) / 2.0);
      cplx want = mod * unit_phase(-kPi * x * xi);
      worst_mod = std::max(worst_mod, std::abs(std::abs(c.at(i, m)) - mod));
      worst_full = std::max(worst_full, std::abs(c.at(i, m) - want));
    }
  }
  CHECK(worst_mod < 1e-6);
  CHECK(worst_full < 1e-9);
}

TEST_CASE("stft at the origin is the inner product") {
  FunctionModel f = modulate(translate(gaussian(1), {0.4}), {1.2});
  FunctionModel g = gaussian_window(1);
  TFGrid grid = TFGrid::symmetric(1, 4.0, 0.5, 4.0, 0.5);
  TFCoefficients c = stft(f, g, grid);
  cplx v00 = c.at(grid.x[0].count / 2, grid.xi[0].count / 2);
  CHECK(std::abs(v00 - l2_inner(f, g, 16.0, 2048)) < 1e-8);
}

TEST_CASE("stft agrees with direct quadrature off the fast path") {
  FunctionModel f = modulate(translate(gaussian(1), {-0.6}), {0.9});
  FunctionModel g = gaussian_window(1);
  TFGrid grid = TFGrid::symmetric(1, 4.0, 0.25, 4.0, 0.25);
  TFCoefficients c = stft(f, g, grid);
  for (std::size_t i : {3u, 17u, 24u}) {
    for (std::size_t m : {5u, 16u, 30u}) {
      double x = grid.x[0].node(i), xi = grid.xi[0].node(m);
      cplx direct = stft_direct(f, g, &x, &xi, 1.0 / 256.0);
      CHECK(std::abs(c.at(i, m) - direct) < 1e-9);
    }
  }
}

TEST_CASE("fundamental identity, d = 1 and d = 2") {
  FunctionModel f1 = modulate(translate(gaussian(1), {0.75}), {-1.25});
  FunctionModel w1 = gaussian_window(1);
  TFGrid grid1 = TFGrid::symmetric(1, 6.0, 0.25, 6.0, 0.25);
  CHECK(fundamental_identity_error(f1, w1, grid1) < 1e-6);

  FunctionModel f2 = tensor({modulate(gaussian(1), {0.5}), translate(gaussian(1), {0.5})});
  FunctionModel w2 = gaussian_window(2);
  TFGrid grid2 = TFGrid::symmetric(2, 3.0, 0.5, 3.0, 0.5);
  CHECK(fundamental_identity_error(f2, w2, grid2) < 1e-6);

  SUBCASE("phase corruption is detected") {
    CHECK(fundamental_identity_error(f1, w1, grid1, kPi / 8.0) > 1e-3);
  }
}

TEST_CASE("partial fundamental identity") {
  FunctionModel f2 = tensor({modulate(gaussian(1), {0.5}), translate(gaussian(1), {0.5})});
  FunctionModel w2 = gaussian_window(2);
  TFGrid grid2 = TFGrid::symmetric(2, 3.0, 0.5, 3.0, 0.5);
  CHECK(partial_fundamental_identity_error(f2, w2, grid2, 0u) < 1e-12);
  CHECK(partial_fundamental_identity_error(f2, w2, grid2, 1u) < 1e-6);
  CHECK(partial_fundamental_identity_error(f2, w2, grid2, 2u) < 1e-6);
  CHECK(partial_fundamental_identity_error(f2, w2, grid2, 3u) < 1e-6);
}

TEST_CASE("stft dilation identity") {
  FunctionModel f = modulate(translate(gaussian(1), {0.3}), {0.7});
  FunctionModel w = gaussian_window(1);
  TFGrid grid = TFGrid::symmetric(1, 4.0, 0.25, 4.0, 0.25);
  CHECK(stft_dilation_identity_error(f, w, {1.0}, grid) < 1e-12);
  CHECK(stft_dilation_identity_error(f, w, {2.0}, grid) < 1e-6);

  FunctionModel f2 = tensor({gaussian(1), translate(gaussian(1), {0.25})});
  FunctionModel w2 = gaussian_window(2);
  TFGrid grid2 = TFGrid::symmetric(2, 3.0, 0.5, 3.0, 0.5);
  CHECK(stft_dilation_identity_error(f2, w2, {2.0, 0.5}, grid2) < 1e-5);
}

TEST_CASE("mixed norm: unit cell, Gaussian, separable") {
  TFGrid grid;
  grid.dim = 1;
  grid.x[0] = {-2.0, 32, 0.125};
  grid.xi[0] = {-2.0, 32, 0.125};

  SUBCASE("indicator of a unit cell has norm 1 for every exponent pair") {
    TFCoefficients c;
    c.grid = grid;
    c.values.assign(32 * 32, 0.0);
    for (std::size_t i = 8; i < 16; ++i)
      for (std::size_t m = 8; m < 16; ++m) c.values[i * 32 + m] = 1.0;
    for (double p : {1.0, 2.0, 4.0, kInf})
      for (double q : {1.0, 1.5, 3.0, kInf})
        CHECK(mixed_norm(c, ExponentPair(p, q)) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("Gaussian lattice norm at (2,2)") {
    TFGrid g = TFGrid::symmetric(1, 8.0, 0.125, 8.0, 0.125);
    TFCoefficients c;
    c.grid = g;
    c.values.resize(g.x_count() * g.xi_count());
    for (std::size_t i = 0; i < g.x_count(); ++i) {
      double x = g.x[0].node(i);
      for (std::size_t m = 0; m < g.xi_count(); ++m) {
        double xi = g.xi[0].node(m);
        c.values[i * g.xi_count() + m] = std::exp(-kPi * (x * x + xi * xi));
      }
    }
    CHECK(std::abs(mixed_norm(c, ExponentPair(2, 2)) - std::pow(2.0, -0.5)) < 1e-6);
  }

  SUBCASE("separable values at (1, inf) factor into L1 and sup") {
    TFCoefficients c;
    c.grid = grid;
    c.values.resize(32 * 32);
    std::vector<double> a(32), b(32);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    for (std::size_t i = 0; i < 32; ++i)
      for (std::size_t m = 0; m < 32; ++m) c.values[i * 32 + m] = a[i] * b[m];
    double a_l1 = 0.0, b_sup = 0.0;
    for (double v : a) a_l1 += v * 0.125;
    for (double v : b) b_sup = std::max(b_sup, v);
    CHECK(mixed_norm(c, ExponentPair(1, kInf)) == doctest::Approx(a_l1 * b_sup).epsilon(1e-8));
  }
}

TEST_CASE("norm homogeneity is exact") {
  FunctionModel f = modulate(gaussian(1), {1.0});
  FunctionModel w = gaussian_window(1);
  cplx c(-1.5, 2.0);
  double mag = std::abs(c);
  ExponentPair e(3.0, 1.5);
  double n1 = modulation_norm_auto(f, e, w);
  double n2 = modulation_norm_auto(scale(f, c), e, w);
  CHECK(n2 == doctest::Approx(mag * n1).epsilon(1e-12));

  SampledGrid g = sample(f, 16.0, 512);
  SampledGrid gs = g;
  for (auto& v : gs.values) v *= c;
  FrequencyPartition part = build_partition(1, 8);
  CHECK(modulation_norm_box(gs, e, part) ==
        doctest::Approx(mag * modulation_norm_box(g, e, part)).epsilon(1e-12));
  CHECK(lqp_norm(gs, 1u, e) == doctest::Approx(mag * lqp_norm(g, 1u, e)).epsilon(1e-12));
}

TEST_CASE("modulation norm via stft: M^{2,2} equals L^2") {
  FunctionModel w = gaussian_window(1);
  ExponentPair e(2, 2);
  std::vector<FunctionModel> corpus = {gaussian(1), modulate(translate(gaussian(1), {0.7}), {-1.3}),
                                       make_g1(1), dilate(gaussian(1), 1.5),
                                       translate(make_g2(1), {0.3})};
  for (const auto& f : corpus) {
    double m = modulation_norm_auto(f, e, w);
    double l2 = grid_lp_norm(sample(f, 96.0, 8192), 2.0);
    CHECK(std::abs(m - l2) / l2 < 1e-4);
  }
}

TEST_CASE("tensor factorization of the modulation norm (d = 2)") {
  FunctionModel a = modulate(gaussian(1), {1.0});
  FunctionModel b = translate(gaussian(1), {0.5});
  FunctionModel f = tensor({a, b});
  FunctionModel w2 = gaussian_window(2);
  std::vector<ExponentPair> es = {ExponentPair(2, 2), ExponentPair(4, 2), ExponentPair(1, kInf)};
  TFGrid grid = default_tf_grid(f, w2);
  std::vector<double> full = modulation_norms_stft(f, w2, grid, es);
  for (std::size_t i = 0; i < es.size(); ++i) {
    double prod = modulation_norm_auto(f, es[i], w2, {0.0, 0.0, 2.0, true});
    CHECK(std::abs(full[i] - prod) / prod < 1e-6);
  }
}

TEST_CASE("modulation norm via box pieces") {
  SUBCASE("band-limited functions reduce to L^p") {
    FunctionModel f = translate(inv_bump_model(0.25), {1.0});
    SampledGrid g = sample(f, 256.0, 4096);
    FrequencyPartition part = build_partition(1, 4);
    for (double p : {1.0, 2.0, kInf}) {
      double lp = grid_lp_norm(g, p, std::isinf(p));
      for (double q : {1.0, 2.0, kInf}) {
        double m = modulation_norm_box(g, ExponentPair(p, q), part);
        CHECK(std::abs(m - lp) / lp < 0.05);
      }
    }
  }

  SUBCASE("zero function") {
    SampledGrid g = sample(constant(1, 0.0), 16.0, 256);
    FrequencyPartition part = build_partition(1, 4);
    CHECK(modulation_norm_box(g, ExponentPair(2, 2), part) == 0.0);
  }

  SUBCASE("spectral leakage is rejected") {
    FunctionModel f = modulate(gaussian(1), {9.0}); // spectrum near 9
    SampledGrid g = sample(f, 16.0, 1024);
    FrequencyPartition part = build_partition(1, 4); // covered box far too small
    CHECK_THROWS_AS(modulation_norm_box(g, ExponentPair(2, 2), part), std::runtime_error);
  }
}

TEST_CASE("local FL^q norms") {
  FunctionModel g2 = make_g2(1);

  SUBCASE("dilation scaling is exact on matched grids") {
    for (double q : {1.0, 2.0, 4.0}) {
      double lambda = 4.0;
      double n_dil = local_fl_q_norm(dilate(g2, lambda), q, 2.0, 4096);
      double n_base = local_fl_q_norm(g2, q, 8.0, 16384);
      double want = std::pow(lambda, 1.0 / q - 1.0);
      CHECK(std::abs(n_dil / n_base - want) / want < 1e-6);
    }
  }

  SUBCASE("q = 2 is Parseval") {
    double n = local_fl_q_norm(g2, 2.0, 4.0, 4096);
    double l2 = grid_lp_norm(sample(g2, 4.0, 4096), 2.0);
    CHECK(std::abs(n - l2) < 1e-8);
  }

  SUBCASE("q = inf is the spectral sup") {
    double n = local_fl_q_norm(g2, kInf, 4.0, 4096);
    SampledGrid spec = fourier(sample(g2, 4.0, 4096));
    double sup = 0.0;
    for (const auto& v : spec.values) sup = std::max(sup, std::abs(v));
    CHECK(n >= sup);
    CHECK(n <= sup * 1.01);
  }
}

TEST_CASE("mixed L^{q,p} norms on grids") {
  FunctionModel f = tensor({translate(gaussian(1), {0.5}), modulate(gaussian(1), {1.0})});
  SampledGrid g = sample(f, 8.0, 128);
  ExponentPair e(3.0, 1.5);

  SUBCASE("separable factorization") {
    SampledGrid a = sample(translate(gaussian(1), {0.5}), 8.0, 128);
    SampledGrid b = sample(modulate(gaussian(1), {1.0}), 8.0, 128);
    double want = grid_lp_norm(a, e.q) * grid_lp_norm(b, e.p);
    CHECK(std::abs(lqp_norm(g, 1u, e) - want) / want < 1e-8);
  }

  SUBCASE("exponent collapse: J = all or empty with p = q") {
    ExponentPair pp(2.5, 2.5);
    CHECK(lqp_norm(g, 3u, pp) == doctest::Approx(grid_lp_norm(g, 2.5)).epsilon(1e-12));
    CHECK(lqp_norm(g, 0u, pp) == doctest::Approx(grid_lp_norm(g, 2.5)).epsilon(1e-12));
  }
}

TEST_CASE("partial Fourier modulation norms") {
  FunctionModel w = gaussian_window(1);
  FunctionModel f = modulate(translate(gaussian(1), {0.7}), {-1.3});
  ExponentPair e(2.0, 1.0);

  SUBCASE("J = empty is the plain norm") {
    CHECK(partial_fourier_modulation_norm(f, 0u, e, w) ==
          doctest::Approx(modulation_norm_auto(f, e, w)).epsilon(1e-12));
  }

  SUBCASE("J = all on the transform recovers the norm of f") {
    FunctionModel fhat = partial_fourier(f, 1u);
    double lhs = partial_fourier_modulation_norm(fhat, 1u, e, w);
    double rhs = modulation_norm_auto(f, e, w);
    CHECK(std::abs(lhs - rhs) / rhs < 1e-6);
  }

  SUBCASE("swapped mixed norm agrees with the direct inverse-transform route") {
    FunctionModel v = modulate(translate(gaussian(1), {1.1}), {0.6});
    for (ExponentPair ee : {ExponentPair(2, 1), ExponentPair(3, kInf)}) {
      TFGrid grid = default_tf_grid(v, w);
      double swap_norm = modulation_norms_stft(v, w, grid, {ee}, true)[0];
      double direct = modulation_norm_auto(partial_fourier(v, 1u, true), ee, w);
      CHECK(std::abs(swap_norm - direct) / direct < 1e-5);
    }
  }

  SUBCASE("tensor route, d = 2, J = {1}") {
    FunctionModel f2 = tensor({modulate(gaussian(1), {0.8}), translate(gaussian(1), {0.4})});
    FunctionModel w2 = gaussian_window(2);
    double n = partial_fourier_modulation_norm(f2, 1u, e, w2);
    double want =
        modulation_norm_auto(partial_fourier(modulate(gaussian(1), {0.8}), 1u, true), e, w) *
        modulation_norm_auto(translate(gaussian(1), {0.4}), e, w);
    CHECK(std::abs(n - want) / want < 1e-12);
  }
}

TEST_CASE("two-definition consistency on a quick dilation family") {
  // Definition-2.4 (stft) and definition-2.5 (box) pipelines must produce the
  // same scaling exponent.
  FunctionModel w = gaussian_window(1);
  ExponentPair e(2.0, 2.0);
  FunctionModel g1 = make_g1(1);
  std::vector<double> lambdas = dyadic_lambdas(true, 5);
  std::vector<double> stft_ratio, box_ratio;
  auto box_norm_of = [&](const FunctionModel& f) {
    double t_extent = std::ceil(std::max(2.0, f.hint.time_radius * 1.02 + 1.0));
    std::size_t n = std::max<std::size_t>(next_pow2(static_cast<std::size_t>(16.0 * t_extent)), 64);
    SampledGrid g = sample(f, t_extent, n);
    return modulation_norm_box(g, e, build_partition(1, 2));
  };
  for (double lam : lambdas) {
    FunctionModel dil = dilate(g1, lam);
    stft_ratio.push_back(modulation_norm_auto(dil, e, w) / modulation_norm_auto(g1, e, w));
    box_ratio.push_back(box_norm_of(dil) / box_norm_of(g1));
  }
  double s1 = fit_loglog(lambdas, stft_ratio).slope;
  double s2 = fit_loglog(lambdas, box_ratio).slope;
  CHECK(std::abs(s1 - s2) < 0.05);
  CHECK(std::abs(s1 - (-0.5)) < 0.05);
}
