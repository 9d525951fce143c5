#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modspace/dilation.hpp"
#include "modspace/extremal.hpp"
#include "modspace/fft.hpp"
#include "modspace/spectral.hpp"

using namespace modspace;

namespace {

// Slow reference DFT used as the independent oracle for the FFT paths.
std::vector<cplx> dft_reference(const std::vector<cplx>& in, bool inverse) {
  std::size_t n = in.size();
  std::vector<cplx> out(n, 0.0);
  double sign = inverse ? 1.0 : -1.0;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      out[m] += in[k] * unit_phase(sign * kTwoPi * double(k) * double(m) / double(n));
  return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// FFT oracle: closed-form transform sampled on the dual grid vs the grid FFT.
double fourier_consistency_error(const FunctionModel& f, double extent, std::size_t n) {
  SampledGrid spatial = sample(f, extent, n);
  SampledGrid via_fft = fourier(spatial);
  FunctionModel ft;
  ft.dim = f.dim;
  ft.evaluate = f.fourier;
  std::array<double, kMaxGridDim> exts{};
  std::array<std::size_t, kMaxGridDim> ns{};
  for (int j = 0; j < f.dim; ++j) {
    exts[j] = via_fft.extent[j];
    ns[j] = n;
  }
  SampledGrid direct = sample(ft, exts, ns);
  return max_abs_diff(via_fft.values, direct.values);
}

} // namespace

TEST_CASE("matrix determinant, inverse, product") {
  Mat a(2, {0.0, 2.0, 1.0, 0.0});
  CHECK(det(a) == doctest::Approx(-2.0).epsilon(1e-14));
  Mat ai = inverse(a);
  Mat prod = a * ai;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(prod(r, c) - (r == c ? 1.0 : 0.0)) < 1e-14);
  Mat rot = Mat::rotation(3, 0, 2, 0.7);
  CHECK(det(rot) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fft matches the reference DFT") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {8u, 64u, 256u}) {
    std::vector<cplx> data(n);
    for (auto& v : data) v = cplx(u(rng), u(rng));
    std::vector<cplx> want = dft_reference(data, false);
    std::vector<cplx> got = data;
    fft(got.data(), n, false);
    CHECK(max_abs_diff(got, want) < 1e-10);
    std::vector<cplx> inv_want = dft_reference(data, true);
    std::vector<cplx> inv_got = data;
    fft(inv_got.data(), n, true);
    CHECK(max_abs_diff(inv_got, inv_want) < 1e-10);
  }
}

TEST_CASE("translate: identity, peak shift, FFT oracle") {
  FunctionModel g = gaussian(1);
  FunctionModel same = translate(g, {0.0});
  for (double t : {-1.3, 0.0, 2.7}) CHECK(std::abs(same(t) - g(t)) < 1e-15);

  FunctionModel moved = translate(g, {1.5});
  CHECK(std::abs(moved(1.5) - g(0.0)) < 1e-15);

  CHECK(fourier_consistency_error(translate(g, {2.25}), 32.0, 4096) < 1e-8);
  CHECK_THROWS_AS(translate(g, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("modulate: identity, modulus, FFT oracle") {
  FunctionModel g = gaussian(1);
  FunctionModel same = modulate(g, {0.0});
  for (double t : {-0.4, 1.1}) CHECK(std::abs(same(t) - g(t)) < 1e-15);

  FunctionModel mod = modulate(g, {3.0});
  for (double t : {-2.0, 0.3, 1.9}) CHECK(std::abs(std::abs(mod(t)) - std::abs(g(t))) < 1e-14);

  // F(M_xi f) = T_xi Ff
  CHECK(fourier_consistency_error(modulate(g, {3.0}), 32.0, 4096) < 1e-8);
  FunctionModel lhs = partial_fourier(modulate(g, {3.0}), 1u);
  FunctionModel rhs = translate(partial_fourier(g, 1u), {3.0});
  for (double xi : {-1.0, 0.5, 3.2}) CHECK(std::abs(lhs(xi) - rhs(xi)) < 1e-14);
}

TEST_CASE("dilate: identity matrix, scalar Gaussian, FFT oracle") {
  FunctionModel g = gaussian(1);
  FunctionModel same = dilate(g, Mat::identity(1));
  for (double t : {-1.0, 0.6}) CHECK(std::abs(same(t) - g(t)) < 1e-15);

  double lambda = 1.75;
  FunctionModel dg = dilate(g, lambda);
  for (double t : {-0.9, 0.4, 1.3})
    CHECK(std::abs(dg(t) - std::exp(-kPi * lambda * lambda * t * t)) < 1e-14);

  FunctionModel g2d = gaussian(2);
  Mat a(2, {2.0, 0.0, 0.0, 1.0 / 3.0});
  CHECK(fourier_consistency_error(dilate(g2d, a), 16.0, 512) < 1e-6);

  Mat singular(2, {1.0, 2.0, 0.5, 1.0});
  CHECK_THROWS_AS(dilate(g2d, singular), std::invalid_argument);
}

TEST_CASE("dilate composes: D_B D_A = D_{BA}") {
  FunctionModel g = gaussian_anisotropic({1.0, 2.5});
  Mat a(2, {2.0, 1.0, 0.0, 0.5});
  Mat b(2, {1.0, 0.0, -0.5, 1.0});
  FunctionModel lhs = dilate(dilate(g, a), b);
  FunctionModel rhs = dilate(g, a * b); // (D_B D_A f)(x) = f(A B x)
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    double x[2] = {u(rng), u(rng)};
    CHECK(std::abs(lhs(x[0], x[1]) - rhs(x[0], x[1])) < 1e-12);
  }
}

TEST_CASE("translate/modulate commutation phase is exact") {
  FunctionModel g = gaussian(1);
  std::vector<double> xs{1.25}, xis{0.75};
  FunctionModel tm = translate(modulate(g, xis), xs);
  FunctionModel mt = modulate(translate(g, xs), xis);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  cplx phase = unit_phase(-kTwoPi * xs[0] * xis[0]); // T_x M_xi = e^{-2 pi i x.xi} M_xi T_x
  for (int i = 0; i < 100; ++i) {
    double t = u(rng);
    CHECK(std::abs(tm(t) - phase * mt(t)) < 1e-12);
  }
}

TEST_CASE("tensor products") {
  FunctionModel one = tensor({constant(1, 1.0), constant(1, 1.0)});
  CHECK(std::abs(one(0.3, -2.0) - cplx(1.0)) < 1e-15);

  FunctionModel gg = tensor({gaussian(1), gaussian(1)});
  CHECK(std::abs(gg(1.0, 1.0) - std::exp(-2.0 * kPi)) < 1e-14);

  CHECK(fourier_consistency_error(gg, 16.0, 512) < 1e-8);
  CHECK_THROWS_AS(tensor({gaussian(2)}), std::invalid_argument);
}

TEST_CASE("sample: constants, Gaussian mass, grid cap") {
  SampledGrid ones = sample(constant(1, 1.0), 4.0, 64);
  for (const auto& v : ones.values) CHECK(std::abs(v - cplx(1.0)) < 1e-15);

  // int |e^{-pi t^2}|^2 dt = 2^{-1/2}
  SampledGrid g = sample(gaussian(1), 8.0, 1024);
  double mass = 0.0;
  for (const auto& v : g.values) mass += std::norm(v);
  mass *= g.spacing(0);
  CHECK(std::abs(mass - std::pow(2.0, -0.5)) < 1e-10);

  std::size_t old_cap = grid_point_cap();
  set_grid_point_cap(1024);
  CHECK_THROWS_AS(sample(gaussian(1), 8.0, 2048), std::runtime_error);
  set_grid_point_cap(old_cap);
}

TEST_CASE("Nyquist reconstruction of a band-limited model") {
  FunctionModel g1 = make_g1(1); // spectrum inside [-0.7, 0.7]
  SampledGrid samples = sample(g1, 64.0, 256); // spacing 1/2 <= 1/(2 freq_radius)
  FunctionModel interp = trig_interpolant(samples);
  for (double x : {0.3, -7.77, 12.21, 33.9}) {
    CHECK(std::abs(interp(x) - g1(x)) < 1e-6);
  }
}

TEST_CASE("Fourier-consistency contract across the model corpus") {
  CHECK(fourier_consistency_error(gaussian(1), 32.0, 4096) < 1e-6);
  CHECK(fourier_consistency_error(make_g1(1), 128.0, 2048) < 1e-6);
  CHECK(fourier_consistency_error(make_g2(1), 32.0, 16384) < 1e-6);
  CHECK(fourier_consistency_error(make_flam(0.5, 16.0, 1), 512.0, 32768) < 1e-6);
  CHECK(fourier_consistency_error(gaussian_anisotropic({2.0, 0.5}), 16.0, 512) < 1e-6);
}

TEST_CASE("support hint invariant: declared transform decay") {
  for (const FunctionModel& f : {make_g1(1), gaussian(1), make_g2(1)}) {
    REQUIRE(f.has_fourier());
    double scale = std::abs(f.fourier(std::array<double, 1>{0.0}.data()));
    for (double mult : {1.01, 1.5, 3.0}) {
      double xi = f.hint.freq_radius * mult;
      CHECK(std::abs(f.fourier(&xi)) < 1e-6 * scale);
    }
  }
}

TEST_CASE("partial Fourier on grids: conventions and involution") {
  FunctionModel f = tensor({modulate(gaussian(1), {1.0}), translate(gaussian(1), {0.5})});
  SampledGrid g = sample(f, 16.0, 256);

  SampledGrid same = partial_fourier(g, 0u);
  CHECK(max_abs_diff(same.values, g.values) == 0.0);

  SampledGrid full = partial_fourier(g, 3u);
  SampledGrid axis_by_axis = partial_fourier(partial_fourier(g, 1u), 2u);
  CHECK(max_abs_diff(full.values, axis_by_axis.values) < 1e-12);

  SampledGrid other_order = partial_fourier(partial_fourier(g, 2u), 1u);
  CHECK(max_abs_diff(axis_by_axis.values, other_order.values) < 1e-12);

  SampledGrid round = partial_fourier(partial_fourier(g, 2u), 2u, true);
  CHECK(max_abs_diff(round.values, g.values) < 1e-12);
  CHECK(round.extent[1] == doctest::Approx(g.extent[1]));
}

TEST_CASE("grid Parseval") {
  FunctionModel f = modulate(translate(gaussian(1), {1.0}), {-2.0});
  SampledGrid g = sample(f, 16.0, 1024);
  CHECK(std::abs(grid_lp_norm(g, 2.0) - grid_lp_norm(fourier(g), 2.0)) < 1e-10);
}

TEST_CASE("smooth partition of unity") {
  FrequencyPartition part = build_partition(1, 6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    double xi = u(rng);
    double sum = 0.0;
    for (int k = -6; k <= 6; ++k) sum += part.sigma(&k, &xi);
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  // sigma_0 = 1 on |xi| <= 1/4 (neighbor bumps vanish there)
  int zero = 0;
  for (double xi : {-0.25, -0.1, 0.0, 0.2, 0.25}) CHECK(part.sigma(&zero, &xi) == doctest::Approx(1.0).epsilon(1e-15));
  // translation structure sigma_k(xi) = sigma_0(xi - k)
  for (int i = 0; i < 200; ++i) {
    double xi = u(rng);
    int k = static_cast<int>(i % 7) - 3;
    double shifted = xi - k;
    CHECK(std::abs(part.sigma(&k, &xi) - part.sigma(&zero, &shifted)) < 1e-12);
  }
}

TEST_CASE("box operators: support geometry and telescoping") {
  // spectrum of f inside [-1/4, 1/4]
  FunctionModel f = inv_bump_model(0.25);
  SampledGrid g = sample(f, 256.0, 8192);
  FrequencyPartition part = build_partition(1, 4);

  int zero = 0;
  SampledGrid piece0 = box_op(g, &zero, part);
  CHECK(max_abs_diff(piece0.values, g.values) < 1e-8);

  for (int k : {2, -2, 3}) {
    SampledGrid piece = box_op(g, &k, part);
    double m = 0.0;
    for (const auto& v : piece.values) m = std::max(m, std::abs(v));
    CHECK(m < 1e-8);
  }

  SampledGrid sum = box_op(g, &zero, part);
  for (int k = -4; k <= 4; ++k) {
    if (k == 0) continue;
    SampledGrid piece = box_op(g, &k, part);
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += piece.values[i];
  }
  CHECK(max_abs_diff(sum.values, g.values) < 1e-8);

  int far = 100;
  CHECK_THROWS_AS(box_op(g, &far, part), std::invalid_argument);
}

TEST_CASE("box operator reproduces a pure lattice mode") {
  // box_k(T_{Lk} M_k h) = T_{Lk} M_k h for spec(h) inside [-1/4,1/4]
  FunctionModel h = inv_bump_model(0.25, 1e-9);
  int k = 3;
  double L = 16.0;
  FunctionModel mode = translate(modulate(h, {double(k)}), {L * k});
  SampledGrid g = sample(mode, 512.0, 16384);
  FrequencyPartition part = build_partition(1, 5);
  SampledGrid piece = box_op(g, &k, part);
  CHECK(max_abs_diff(piece.values, g.values) < 1e-8);
}

TEST_CASE("banded piece norms agree with the full-size path") {
  FunctionModel f = modulate(translate(make_g1(1), {3.0}), {2.0});
  SampledGrid g = sample(f, 128.0, 4096);
  FrequencyPartition part = build_partition(1, 4);
  std::vector<double> ps{1.0, 2.0, std::numeric_limits<double>::infinity()};
  auto fast = box_piece_lp_norms(g, part, ps);
  for (int k = -4; k <= 4; ++k) {
    SampledGrid piece = box_op(g, &k, part);
    std::size_t flat = static_cast<std::size_t>(k + 4);
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      double slow = grid_lp_norm(piece, ps[pi], std::isinf(ps[pi]));
      if (slow > 1e-9)
        CHECK(fast[flat][pi] == doctest::Approx(slow).epsilon(2e-3));
      else
        CHECK(fast[flat][pi] < 1e-8);
    }
  }
}

TEST_CASE("spectral tail fraction") {
  SampledGrid spec;
  spec.dim = 1;
  spec.extent[0] = 4.0;
  spec.npts[0] = 64;
  spec.values.assign(64, 0.0);
  spec.values[32] = 1.0; // frequency 0
  spec.values[63] = 1.0; // frequency near +4
  CHECK(spectral_tail_fraction(spec, 2.0) == doctest::Approx(0.5));
}
