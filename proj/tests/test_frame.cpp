#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "nsgf/frame.hpp"
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

double rel_error(const CVec& a, const CVec& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

Eigen::VectorXcd as_vector(const CVec& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i];
  return v;
}

std::vector<System> test_systems(std::size_t L) {
  return {testing::flat_two_channel(L), testing::dyadic_six_channel(L),
          testing::irregular_eight_channel(L), testing::flat_irregular_basis(L)};
}

}  // namespace

TEST_CASE("window generation", "[frame]") {
  const auto sys = testing::flat_two_channel(64);
  for (double s : sys.frame_multiplier()) CHECK(s == Approx(1.0).epsilon(1e-15));
  CHECK(sys.lower_bound() == Approx(1.0).epsilon(1e-15));
  CHECK(sys.upper_bound() == Approx(1.0).epsilon(1e-15));

  const auto full = make_windows(16, {{0.0, 1.0}}, 0.25, Prototype{0.0});
  for (double s : full.frame_multiplier()) CHECK(s == 1.0);

  const auto dyadic = testing::dyadic_six_channel(1024);
  for (const auto& ch : dyadic.channels()) {
    double peak = 0.0;
    for (const auto& v : ch.window_hat) peak = std::max(peak, std::abs(v));
    CHECK(peak == Approx(std::sqrt(ch.a)).epsilon(1e-15));
    CHECK(ch.support_len == ch.n_shifts);
    for (std::size_t k = 0; k < 1024; ++k) {
      const std::size_t rel = (k + 1024 - ch.support_start) % 1024;
      if (rel >= ch.support_len) CHECK(ch.window_hat[k] == cd(0.0, 0.0));
    }
  }

  // dyadic bin ranges at L = 1024
  const auto dy = testing::dyadic_six_channel(1024);
  const std::size_t starts[] = {992, 16, 112, 336, 656, 880};
  for (std::size_t m = 0; m < 6; ++m) CHECK(dy.channels()[m].support_start == starts[m]);

  try {
    make_windows(100, {{0.0, 3.0}}, 0.25, Prototype{0.0});
    FAIL("expected a divisibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("time step must divide signal length") != std::string::npos);
  }
  try {
    make_windows(64, {{0.0, 4.0}, {0.5, 4.0}}, 0.25, Prototype{0.0});
    FAIL("expected a frame error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::frame);
    CHECK(std::string(e.what()) == "not a frame: covering gap");
  }
  CHECK_THROWS_AS(make_windows(64, {{0.0, 2.0}}, 0.25, Prototype{0.7}), Error);
}

TEST_CASE("dual and tight windows", "[frame]") {
  // s == 2: two copies of the full-band window at a = 1
  CVec w(32, cd(1.0, 0.0));
  const auto sys = system_from_windows(32, {{0.0, 1.0, w}, {0.5, 1.0, w}}, 0.25);
  for (double s : sys.frame_multiplier()) CHECK(s == 2.0);
  for (const auto& v : sys.window(0, WindowKind::dual)) CHECK(v == cd(0.5, 0.0));

  CVec w2(32, cd(2.0, 0.0));
  const auto sys4 = system_from_windows(32, {{0.0, 1.0, w2}}, 0.25);
  const auto tight4 = dual_windows(sys4, WindowKind::tight);
  for (const auto& v : tight4[0]) CHECK(v == cd(1.0, 0.0));

  for (const auto& s : test_systems(1024)) {
    for (std::size_t k = 0; k < 1024; ++k) {
      cd acc(0.0, 0.0);
      double tight = 0.0;
      for (std::size_t m = 0; m < s.size(); ++m) {
        const double a = s.channels()[m].a;
        acc += s.channels()[m].window_hat[k] * std::conj(s.window(m, WindowKind::dual)[k]) / a;
        tight += std::norm(s.window(m, WindowKind::tight)[k]) / a;
        if (s.channels()[m].window_hat[k] == cd(0.0, 0.0)) {
          CHECK(s.window(m, WindowKind::dual)[k] == cd(0.0, 0.0));
          CHECK(s.window(m, WindowKind::tight)[k] == cd(0.0, 0.0));
        }
      }
      CHECK(std::abs(acc - 1.0) <= 1e-12);
      CHECK(std::abs(tight - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("analysis matches the dense oracle", "[frame][oracle]") {
  for (const auto& sys : {testing::small_redundant(32), testing::toy_sixteen(), testing::flat_two_channel(32),
                          make_windows(32, {{0.0, 4.0}, {0.25, 2.0}, {0.75, 4.0}}, 0.25, Prototype{0.0})}) {
    const auto M = dense_frame_matrix(sys);
    CHECK(static_cast<std::size_t>(M.rows()) == sys.coefficient_count());
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const CVec f = random_signal(sys.length(), seed);
      const Eigen::VectorXcd dense = M * as_vector(f);
      const auto c = analyze(sys, f);
      Eigen::Index row = 0;
      double err = 0.0, ref = 0.0;
      for (const auto& ch : c.entries)
        for (const auto& v : ch) {
          err = std::max(err, std::abs(v - dense(row)));
          ref = std::max(ref, std::abs(dense(row)));
          ++row;
        }
      CHECK(err <= 1e-10 * ref);

      // synthesis is the adjoint of analysis
      const CVec y = synthesize(sys, c, WindowKind::original);
      const Eigen::VectorXcd yd = M.adjoint() * dense;
      for (std::size_t x = 0; x < sys.length(); ++x)
        CHECK(std::abs(y[x] - yd(static_cast<Eigen::Index>(x))) <= 1e-10 * yd.norm());
    }
  }
  CHECK_THROWS_AS(dense_frame_matrix(testing::flat_two_channel(512)), Error);
}

TEST_CASE("time windows by FFT agree with direct summation", "[frame][oracle]") {
  const auto sys = testing::small_redundant(32);
  for (std::size_t m = 0; m < sys.size(); ++m)
    for (auto kind : {WindowKind::original, WindowKind::dual, WindowKind::tight}) {
      const CVec a = time_window(sys, m, kind);
      const CVec b = time_window_direct(sys, m, kind);
      for (std::size_t x = 0; x < a.size(); ++x) CHECK(std::abs(a[x] - b[x]) <= 1e-13);
    }
}

TEST_CASE("frame operator is diagonalized by the DFT", "[frame][oracle]") {
  const auto sys = testing::small_redundant(32);
  const auto M = dense_frame_matrix(sys);
  const Eigen::MatrixXcd S = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(S);
  std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + 32);
  std::vector<double> s = sys.frame_multiplier();
  std::sort(eig.begin(), eig.end());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(eig[i] - s[i]) <= 1e-8);
  CHECK(std::abs(eig.front() - sys.lower_bound()) <= 1e-8);
  CHECK(std::abs(eig.back() - sys.upper_bound()) <= 1e-8);

  // tight system: M^H M = I
  const auto flat = testing::flat_two_channel(32);
  const auto Mf = dense_frame_matrix(flat);
  const Eigen::MatrixXcd I = Mf.adjoint() * Mf;
  CHECK((I - Eigen::MatrixXcd::Identity(32, 32)).norm() <= 1e-12);
}

TEST_CASE("perfect reconstruction and frame operator consistency", "[frame][property]") {
  for (std::size_t L : {512, 1024}) {
    for (const auto& sys : test_systems(L)) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const CVec f = random_signal(L, seed * 31 + L);
        const auto c = analyze(sys, f);
        CHECK(rel_error(synthesize(sys, c, WindowKind::dual), f) <= 1e-10);
        CHECK(rel_error(synthesize(sys, c, WindowKind::original), frame_apply(sys, f)) <= 1e-10);
        const auto ct = analyze(sys, f, WindowKind::tight);
        CHECK(rel_error(synthesize(sys, ct, WindowKind::tight), f) <= 1e-10);
        double e = 0.0, ef = 0.0;
        for (const auto& ch : ct.entries)
          for (const auto& v : ch) e += std::norm(v);
        for (const auto& v : f) ef += std::norm(v);
        CHECK(e == Approx(ef).epsilon(1e-10));
      }
      CHECK(sys.lower_bound() > 0.0);
    }
  }
}

TEST_CASE("analysis examples and linearity", "[frame]") {
  const auto sys = testing::dyadic_six_channel(512);
  // f = h_{2,3}: coefficient equals the window energy
  auto c = sys.zero_coefficients();
  CHECK(rel_error(synthesize(sys, c), CVec(512, cd(1.0, 0.0))) == 1.0);  // zero coefficients, zero signal
  c.entries[2][3] = 1.0;
  const CVec atom = synthesize(sys, c, WindowKind::original);
  double norm2 = 0.0;
  for (const auto& v : time_window(sys, 2)) norm2 += std::norm(v);
  CHECK(std::abs(analyze(sys, atom).entries[2][3] - norm2) <= 1e-12 * norm2);

  // spectrally disjoint from channel 0 (bins [-16, 16) at L = 512)
  CVec spec(512, cd(0.0, 0.0));
  for (std::size_t k = 100; k < 200; ++k) spec[k] = {1.0, -0.5};
  const CVec band = fft::backward(spec);
  const auto cband = analyze(sys, band);
  for (const auto& v : cband.entries[0]) CHECK(std::abs(v) <= 1e-12);

  const CVec f = random_signal(512, 1), g = random_signal(512, 2);
  const cd alpha(1.5, -0.25);
  CVec comb(512);
  for (std::size_t x = 0; x < 512; ++x) comb[x] = alpha * f[x] + g[x];
  const auto cf = analyze(sys, f), cg = analyze(sys, g), cc = analyze(sys, comb);
  for (std::size_t m = 0; m < sys.size(); ++m)
    for (std::size_t n = 0; n < cc.entries[m].size(); ++n)
      CHECK(std::abs(cc.entries[m][n] - alpha * cf.entries[m][n] - cg.entries[m][n]) <= 1e-12);

  CHECK_THROWS_AS(analyze(sys, CVec(100)), Error);
  auto bad = sys.zero_coefficients();
  bad.entries[1].pop_back();
  CHECK_THROWS_AS(synthesize(sys, bad), Error);
  bad.entries.pop_back();
  CHECK_THROWS_AS(synthesize(sys, bad), Error);
  CHECK_THROWS_AS(frame_apply(sys, CVec(3)), Error);
}

TEST_CASE("painless validation", "[frame]") {
  for (const auto& sys : test_systems(1024)) {
    const auto rep = validate_painless(sys);
    CHECK(rep.ok());
    CHECK(rep.covering.covers_domain);
    CHECK(rep.c_beta0 == Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(rep.c_beta1));
  }

  // the enlarged cubes reach two octaves away, and every ratio appears with its inverse
  const auto rep = validate_painless(testing::dyadic_six_channel(1024));
  CHECK(rep.overlap_ratio_max == 4.0);
  CHECK(rep.overlap_ratio_min * rep.overlap_ratio_max == 1.0);
  CHECK(rep.max_a == 16.0);

  // duplicate offsets: delta = 0
  CVec w(64, cd(0.0, 0.0));
  for (std::size_t k = 0; k < 32; ++k) w[k] = std::sqrt(2.0);
  CVec hi(64, cd(0.0, 0.0));
  for (std::size_t k = 32; k < 64; ++k) hi[k] = std::sqrt(2.0);
  const auto dup = system_from_windows(64, {{0.0, 2.0, w}, {0.0, 2.0, w}, {0.5, 2.0, hi}}, 0.25);
  const auto r2 = validate_painless(dup);
  CHECK(r2.covering.delta == 0.0);
  CHECK_FALSE(r2.ok());

  // 33 bins on the closed interval [0, 1/2] but only 32 time shifts
  CVec wide(64, cd(0.0, 0.0));
  for (std::size_t k = 0; k <= 32; ++k) wide[k] = 1.0;
  CVec rest(64, cd(0.0, 0.0));
  for (std::size_t k = 32; k < 64; ++k) rest[k] = 1.0;
  const auto np = system_from_windows(64, {{0.0, 2.0, wide}, {0.5, 2.0, rest}}, 0.25);
  const auto r3 = validate_painless(np);
  CHECK(np.channels()[0].support_len == 33);
  CHECK_FALSE(r3.channel_painless[0]);
  CHECK(r3.channel_painless[1]);
  CHECK_FALSE(r3.ok());
  CHECK_THROWS_AS(analyze(np, CVec(64)), Error);

  // spectrum outside [b, b + 1/a] is a hard error
  const auto outside = system_from_windows(64, {{0.25, 2.0, wide}, {0.5, 2.0, rest}}, 0.25);
  CHECK_THROWS_AS(validate_painless(outside), Error);
}

TEST_CASE("atom decay", "[frame]") {
  const auto sys = testing::dyadic_six_channel(1024);
  const auto rep = decay_check(sys, 2);
  double lo = INFINITY, hi = 0.0;
  for (double c : rep.c_n) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi <= 2.0 * lo);
  // p = 2 ratios are the window norms, the same prototype up to sampling of the ramp
  for (double r : rep.lp_ratio[1]) CHECK(r == Approx(rep.lp_ratio[1][0]).epsilon(1e-5));
  CHECK_THROWS_AS(decay_check(sys, 0), Error);

  // l^p norms of shifted atoms do not depend on the shift
  const CVec h = time_window(sys, 3);
  const auto a = static_cast<std::size_t>(sys.channels()[3].a);
  for (double p : {1.0, 4.0}) {
    double n0 = 0.0, n5 = 0.0;
    for (std::size_t x = 0; x < 1024; ++x) {
      n0 += std::pow(std::abs(h[x]), p);
      n5 += std::pow(std::abs(h[(x + 1024 - 5 * a) % 1024]), p);
    }
    CHECK(n0 == Approx(n5).epsilon(1e-12));
  }
}
