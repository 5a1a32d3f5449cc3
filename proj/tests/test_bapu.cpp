#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nsgf/bapu.hpp"
#include "test_configs.hpp"

using namespace nsgf;
using Catch::Approx;

namespace {

CVec random_signal(std::size_t L, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  CVec f(L);
  for (auto& v : f) v = {u(), u()};
  return f;
}

double energy(const CVec& f) {
  double e = 0.0;
  for (const auto& v : f) e += std::norm(v);
  return e;
}

}  // namespace

TEST_CASE("smooth step and plateau bump", "[bapu]") {
  CHECK(smooth_step(0.5) == 0.5);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(-3.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(7.0) == 1.0);
  CHECK(smooth_step(0.3) + smooth_step(0.7) == Approx(1.0).epsilon(1e-15));

  const PlateauBump bump(0.2, 2);
  // ramp midpoint of the first coordinate, second in the plateau
  CHECK(plateau_value(bump, RVec{0.1, 0.5}) == 0.5);
  CHECK(plateau_value(bump, RVec{0.5, 0.5}) == 1.0);
  CHECK(plateau_value(bump, RVec{0.21, 0.79}) == 1.0);
  CHECK(plateau_value(bump, RVec{-0.1, 0.5}) == 0.0);
  CHECK(plateau_value(bump, RVec{0.5, 1.0}) == 0.0);
  CHECK(plateau_value(bump, RVec{0.5, 3.0}) == 0.0);
  for (double x = -0.5; x <= 1.5; x += 0.01) {
    const double v = bump(RVec{x, 0.5});
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(PlateauBump(0.5, 1), Error);
  CHECK_THROWS_AS(PlateauBump(0.0, 1), Error);
  CHECK_THROWS_AS(bump(RVec{0.5}), Error);
}

TEST_CASE("partition of unity for standard coverings", "[bapu]") {
  const auto mod = modulation_covering(1, 1.5, 10);
  const auto b1 = build_bapu(mod, bump_for(mod), {2048, -4.0, 4.0, false});
  CHECK(partition_defect(b1) <= 1e-12);
  CHECK(max_overlap(b1) <= validate_structured(mod, Box{{-8.0, 8.0}}).n0);

  const auto bes = besov_covering(1, 2.5, 4);
  const auto b2 = build_bapu(bes, bump_for(bes), {4096, -40.0, 40.0, false});
  CHECK(partition_defect(b2) <= 1e-12);
  CHECK(max_overlap(b2) <= validate_structured(bes, Box{{-40.0, 40.0}}).n0);

  for (std::size_t L : {512, 1024}) {
    for (const auto& sys : {testing::flat_two_channel(L), testing::dyadic_six_channel(L),
                            testing::irregular_eight_channel(L)}) {
      const auto cov = sys.covering();
      const auto b = build_bapu(cov, bump_for(cov), FrequencyGrid::dft(L));
      CHECK(partition_defect(b) <= 1e-12);
      CHECK(max_overlap(b) <= validate_structured(cov, Box{{0.0, 1.0}}).n0);
    }
  }
}

TEST_CASE("single-map and single-cover bins", "[bapu]") {
  const Covering one(Box{{0.0, 1.0}}, Box{{0.2, 0.8}}, {AffineMap({2.0}, {-0.5})}, {{0.5}});
  // plateau (0.2, 0.8) maps to (-0.1, 1.1), which contains the whole band
  const auto b = build_bapu(one, PlateauBump(0.2, 1), {100, 0.0, 1.0, false});
  for (double v : b.psi(0)) CHECK(v == 1.0);

  const auto mod = modulation_covering(1, 1.5, 3);
  const auto bm = build_bapu(mod, bump_for(mod), {64, -0.5, 0.5, false});
  // near 0 only Q_{T_0} = (-0.75, 0.75) reaches: boxes of k = +-1 start at +-0.25
  const std::size_t k0 = 32;  // xi = 0
  CHECK(bm.grid().point(k0) == 0.0);
  CHECK(bm.psi(3)[k0] == 1.0);
}

TEST_CASE("covering gaps are reported by bin", "[bapu]") {
  const Covering gap(Box{{0.0, 1.0}}, Box{{0.25, 0.75}},
                     {AffineMap::identity(1), AffineMap({1.0}, {2.0})}, {{0.5}, {2.5}});
  try {
    build_bapu(gap, PlateauBump(0.25, 1), {30, 0.0, 3.0, false});
    FAIL("expected a covering gap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::frame);
    CHECK(std::string(e.what()).find("covering gap at bin 0") != std::string::npos);
  }
  const auto mod = modulation_covering(1, 1.5, 3);
  CHECK_THROWS_AS(build_bapu(mod, PlateauBump(0.4, 1), {64, -1.0, 1.0, false}), Error);
  CHECK_THROWS_AS(build_bapu(modulation_covering(2, 1.5, 1), PlateauBump(0.2, 2), {8, 0.0, 1.0, false}),
                  Error);
}

TEST_CASE("support and smoothness of the partition", "[bapu][property]") {
  const auto sys = testing::dyadic_six_channel(1024);
  const auto cov = sys.covering();
  const auto b = build_bapu(cov, bump_for(cov), FrequencyGrid::dft(1024));
  const auto d = derivative_bounds(b);
  CHECK(d.vanishes_off_support);
  CHECK(std::isfinite(d.first));
  CHECK(std::isfinite(d.second));
  for (std::size_t t = 0; t < b.size(); ++t)
    for (std::size_t k = 0; k < 1024; ++k) {
      CHECK(b.psi(t)[k] >= 0.0);
      if (!detail::contains_mod(cov.image(t)[0], b.grid().point(k), 1.0)) CHECK(b.psi(t)[k] == 0.0);
    }

  // Finite-difference bounds converge under grid refinement.
  const auto mod = modulation_covering(1, 1.5, 10);
  const auto coarse = derivative_bounds(build_bapu(mod, bump_for(mod), {2048, -4.0, 4.0, false}));
  const auto fine = derivative_bounds(build_bapu(mod, bump_for(mod), {4096, -4.0, 4.0, false}));
  CHECK(coarse.vanishes_off_support);
  CHECK(fine.first == Approx(coarse.first).epsilon(0.05));
  CHECK(fine.second == Approx(coarse.second).epsilon(0.05));
}

TEST_CASE("multiplier L1 norms are uniformly bounded", "[bapu][property]") {
  const auto bes = besov_covering(1, 2.5, 4);
  const auto b = build_bapu(bes, bump_for(bes), {4096, -40.0, 40.0, false});
  const auto n1 = multiplier_l1_norms(b, 1024);
  const auto n2 = multiplier_l1_norms(b, 2048);
  double m1 = 0.0, m2 = 0.0;
  for (double v : n1) m1 = std::max(m1, v);
  for (double v : n2) m2 = std::max(m2, v);
  CHECK(std::isfinite(m1));
  CHECK(m1 >= 1.0 - 1e-9);  // psi_T(0)-level values force ||F^-1 psi||_1 >= max psi
  CHECK(std::abs(m1 - m2) <= 0.1 * m2);

  const auto mod = modulation_covering(1, 1.5, 10);
  const auto bm = build_bapu(mod, bump_for(mod), {2048, -4.0, 4.0, false});
  const auto nm = multiplier_l1_norms(bm, 1024);
  // interior translates are translates of one function
  CHECK(nm[10] == Approx(nm[9]).epsilon(1e-9));
}

TEST_CASE("multiplier application", "[bapu]") {
  const std::size_t L = 256;
  const CVec f = random_signal(L, 3);
  const RVec ones(L, 1.0);
  const CVec g = multiplier_apply(ones, f);
  for (std::size_t x = 0; x < L; ++x) CHECK(std::abs(g[x] - f[x]) <= 1e-14);

  // spectrum confined to bins [0, 64), multiplier on [128, 256)
  CVec spec(L, cd(0.0, 0.0));
  for (std::size_t k = 0; k < 64; ++k) spec[k] = {1.0, static_cast<double>(k)};
  const CVec band = fft::backward(spec);
  RVec upper(L, 0.0);
  for (std::size_t k = 128; k < L; ++k) upper[k] = 1.0;
  for (const auto& v : multiplier_apply(upper, band)) CHECK(std::abs(v) <= 1e-10);

  // Parseval on the masked bins
  RVec half(L, 0.0);
  for (std::size_t k = 0; k < L; k += 2) half[k] = 1.0;
  const CVec fhat = fft::forward(f);
  double masked = 0.0;
  for (std::size_t k = 0; k < L; k += 2) masked += std::norm(fhat[k]);
  CHECK(energy(multiplier_apply(half, f)) == Approx(masked / L).epsilon(1e-12));

  // applying psi twice equals applying psi^2 once
  const auto sys = testing::dyadic_six_channel(L * 4);
  const auto cov = sys.covering();
  const auto b = build_bapu(cov, bump_for(cov), FrequencyGrid::dft(L * 4));
  const CVec h = random_signal(L * 4, 5);
  for (std::size_t t = 0; t < b.size(); ++t) {
    RVec sq(b.psi(t));
    for (auto& v : sq) v *= v;
    const CVec twice = multiplier_apply(b.psi(t), multiplier_apply(b.psi(t), h));
    const CVec once = multiplier_apply(sq, h);
    for (std::size_t x = 0; x < h.size(); ++x) CHECK(std::abs(twice[x] - once[x]) <= 1e-13);
  }

  // linearity
  const CVec f2 = random_signal(L, 9);
  CVec comb(L);
  const cd alpha(0.3, -1.2);
  for (std::size_t x = 0; x < L; ++x) comb[x] = alpha * f[x] + f2[x];
  const CVec lhs = multiplier_apply(half, comb);
  const CVec r1 = multiplier_apply(half, f);
  const CVec r2 = multiplier_apply(half, f2);
  for (std::size_t x = 0; x < L; ++x) CHECK(std::abs(lhs[x] - alpha * r1[x] - r2[x]) <= 1e-13);

  CHECK_THROWS_AS(multiplier_apply(RVec(L - 1, 1.0), f), Error);
}

TEST_CASE("naive DFT agrees with the FFT", "[bapu][oracle]") {
  for (std::size_t n : {1u, 2u, 7u, 16u, 45u}) {
    const CVec x = random_signal(n, n);
    const CVec X = fft::forward(x);
    const CVec back = fft::backward(X);
    for (std::size_t k = 0; k < n; ++k) {
      cd acc(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double ph = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
        acc += x[j] * cd(std::cos(ph), std::sin(ph));
      }
      CHECK(std::abs(acc - X[k]) <= 1e-12);
      CHECK(std::abs(back[k] / static_cast<double>(n) - x[k]) <= 1e-14);
    }
  }
}
