#pragma once

// Painless nonstationary Gabor frames on a length-L periodic grid.
//
// Conventions. Frequencies are in cycles/sample, bins xi_k = k/L. A window is
// stored by its spectrum w_hat (the unnormalized DFT of the time-domain
// window), so that h[x] = (1/L) sum_k w_hat[k] e^{2 pi i k x / L}. Atoms are
// h_{m,n}[x] = h_m[x - n a_m] and inner products are plain sums. With these
// conventions the frame operator is the Fourier multiplier
//   s[k] = sum_m (1/a_m) |h_hat_m[k]|^2.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nsgf/bapu.hpp"
#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/fft.hpp"

namespace nsgf {

struct ChannelSpec {
  double b = 0.0;  // frequency offset, cycles/sample
  double a = 1.0;  // time step, samples
};

/// Prototype window phi on [0,1]. ramp_width == 0 selects the flat
/// indicator of [0,1); otherwise the smooth plateau bump with that ramp.
struct Prototype {
  double ramp_width = 0.0;

  double operator()(double t) const {
    if (ramp_width == 0.0) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    return PlateauBump(ramp_width, 1)(t);
  }

  void check() const {
    if (!(ramp_width == 0.0 || (ramp_width > 0.0 && ramp_width < 0.5)))
      throw config_error("prototype: ramp width must be 0 (flat) or lie in (0, 1/2)");
  }
};

enum class WindowKind { original, dual, tight };

struct Channel {
  double b = 0.0;
  double a = 1.0;
  std::size_t n_shifts = 0;       // N_m = L / a_m
  std::size_t support_start = 0;  // first bin of the wrapped support interval
  std::size_t support_len = 0;    // B_m
  CVec window_hat;

  std::size_t support_bin(std::size_t i, std::size_t length) const {
    return (support_start + i) % length;
  }
  bool painless() const { return support_len <= n_shifts; }
};

struct CoefficientSet {
  std::vector<CVec> entries;              // entries[m][n]
  std::vector<std::size_t> channel_to_T;  // covering index of channel m

  std::size_t channels() const { return entries.size(); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.size();
    return n;
  }
};

namespace detail {

inline std::size_t checked_shift_count(std::size_t length, double a) {
  const double n = static_cast<double>(length) / a;
  const double a_round = std::round(a);
  const double n_round = std::round(n);
  if (!(a >= 1.0) || std::abs(a - a_round) > 1e-9 || std::abs(n - n_round) > 1e-9 ||
      static_cast<std::size_t>(a_round) * static_cast<std::size_t>(n_round) != length)
    throw config_error("time step must divide signal length (L = " + std::to_string(length) +
                       ", a = " + std::to_string(a) + ")");
  return static_cast<std::size_t>(n_round);
}

inline double wrap_unit(double b) { return b - std::floor(b); }

// Smallest circular interval of bins holding every nonzero entry.
inline std::pair<std::size_t, std::size_t> circular_support(const CVec& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < n; ++k)
    if (w[k] != cd(0.0, 0.0)) nz.push_back(k);
  if (nz.empty()) return {0, 0};
  std::size_t best_gap = 0, start = nz.front();
  for (std::size_t i = 0; i < nz.size(); ++i) {
    const std::size_t cur = nz[i];
    const std::size_t next = (i + 1 < nz.size()) ? nz[i + 1] : nz.front() + n;
    const std::size_t gap = next - cur - 1;
    if (gap > best_gap) {
      best_gap = gap;
      start = next % n;
    }
  }
  return {start, n - best_gap};
}

}  // namespace detail

class System {
 public:
  System(std::size_t length, std::vector<Channel> channels, double c_star, Prototype prototype)
      : length_(length), channels_(std::move(channels)), c_star_(c_star), prototype_(prototype) {
    if (length_ == 0) throw config_error("system: signal length must be positive");
    if (channels_.empty()) throw config_error("system: no channels");
    if (!(c_star_ > 0.0)) throw config_error("system: c_star must be positive");
    multiplier_.assign(length_, 0.0);
    for (const auto& ch : channels_) {
      if (ch.window_hat.size() != length_)
        throw config_error("system: window length differs from signal length");
      for (std::size_t k = 0; k < length_; ++k)
        multiplier_[k] += std::norm(ch.window_hat[k]) / ch.a;
    }
    lower_ = *std::min_element(multiplier_.begin(), multiplier_.end());
    upper_ = *std::max_element(multiplier_.begin(), multiplier_.end());
    if (!(lower_ > 1e-12 * upper_)) throw frame_error("not a frame: covering gap");

    duals_.resize(channels_.size());
    tights_.resize(channels_.size());
    for (std::size_t m = 0; m < channels_.size(); ++m) {
      const auto& w = channels_[m].window_hat;
      duals_[m].resize(length_);
      tights_[m].resize(length_);
      for (std::size_t k = 0; k < length_; ++k) {
        duals_[m][k] = w[k] / multiplier_[k];
        tights_[m][k] = w[k] / std::sqrt(multiplier_[k]);
      }
    }
  }

  std::size_t length() const { return length_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t size() const { return channels_.size(); }
  double c_star() const { return c_star_; }
  const Prototype& prototype() const { return prototype_; }

  /// s[k]; frame bounds are its extrema.
  const RVec& frame_multiplier() const { return multiplier_; }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

  const CVec& window(std::size_t m, WindowKind kind) const {
    switch (kind) {
      case WindowKind::dual:
        return duals_.at(m);
      case WindowKind::tight:
        return tights_.at(m);
      default:
        return channels_.at(m).window_hat;
    }
  }

  std::size_t coefficient_count() const {
    std::size_t n = 0;
    for (const auto& ch : channels_) n += ch.n_shifts;
    return n;
  }

  std::vector<ChannelGeometry> geometry() const {
    std::vector<ChannelGeometry> out;
    for (const auto& ch : channels_) out.push_back({{ch.b}, ch.a});
    return out;
  }

  /// The compatible covering on the frequency torus [0,1).
  Covering covering() const { return covering_from_nsgf(geometry(), c_star_, 1.0); }

  CoefficientSet zero_coefficients() const {
    CoefficientSet c;
    for (std::size_t m = 0; m < channels_.size(); ++m) {
      c.entries.emplace_back(channels_[m].n_shifts, cd(0.0, 0.0));
      c.channel_to_T.push_back(m);
    }
    return c;
  }

 private:
  std::size_t length_;
  std::vector<Channel> channels_;
  double c_star_;
  Prototype prototype_;
  RVec multiplier_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<CVec> duals_;
  std::vector<CVec> tights_;
};

/// Windows h_hat_m(xi) = a_m^{1/2} phi(a_m (xi - b_m)) sampled on the N_m bins
/// of [b_m, b_m + 1/a_m).
inline System make_windows(std::size_t length, const std::vector<ChannelSpec>& spec,
                           double c_star, const Prototype& prototype) {
  prototype.check();
  if (length == 0) throw config_error("make_windows: signal length must be positive");
  std::vector<Channel> channels;
  const auto L = static_cast<double>(length);
  for (const auto& s : spec) {
    Channel ch;
    ch.a = s.a;
    ch.n_shifts = detail::checked_shift_count(length, s.a);
    ch.b = detail::wrap_unit(s.b);
    const double first = std::ceil(ch.b * L - 1e-9);
    ch.support_start = static_cast<std::size_t>(first) % length;
    ch.support_len = ch.n_shifts;
    ch.window_hat.assign(length, cd(0.0, 0.0));
    const double amp = std::sqrt(ch.a);
    for (std::size_t i = 0; i < ch.support_len; ++i) {
      const double t = ch.a * ((first + static_cast<double>(i)) / L - ch.b);
      ch.window_hat[ch.support_bin(i, length)] = amp * prototype(std::max(t, 0.0));
    }
    channels.push_back(std::move(ch));
  }
  return System(length, std::move(channels), c_star, prototype);
}

struct WindowSpec {
  double b = 0.0;
  double a = 1.0;
  CVec window_hat;
};

/// System from explicitly sampled window spectra. Supports are detected from
/// the nonzero bins; painlessness is not enforced here (see validate_painless).
inline System system_from_windows(std::size_t length, const std::vector<WindowSpec>& windows,
                                  double c_star) {
  std::vector<Channel> channels;
  for (const auto& w : windows) {
    Channel ch;
    ch.a = w.a;
    ch.n_shifts = detail::checked_shift_count(length, w.a);
    ch.b = detail::wrap_unit(w.b);
    ch.window_hat = w.window_hat;
    if (ch.window_hat.size() != length)
      throw config_error("system_from_windows: window length differs from signal length");
    std::tie(ch.support_start, ch.support_len) = detail::circular_support(ch.window_hat);
    channels.push_back(std::move(ch));
  }
  return System(length, std::move(channels), c_star, Prototype{});
}

inline std::vector<CVec> dual_windows(const System& sys, WindowKind mode) {
  if (!(sys.lower_bound() > 0.0)) throw frame_error("dual_windows: lower frame bound is zero");
  std::vector<CVec> out;
  for (std::size_t m = 0; m < sys.size(); ++m) out.push_back(sys.window(m, mode));
  return out;
}

namespace detail {

inline void require_painless(const System& sys) {
  for (std::size_t m = 0; m < sys.size(); ++m)
    if (!sys.channels()[m].painless())
      throw config_error("channel " + std::to_string(m) +
                         " is not painless: support exceeds the number of time shifts");
}

}  // namespace detail

/// c[m][n] = <f, w_{m,n}> for the chosen window family, via the spectrum of f
/// folded onto N_m bins.
inline CoefficientSet analyze(const System& sys, std::span<const cd> signal,
                              WindowKind kind = WindowKind::original) {
  if (signal.size() != sys.length())
    throw config_error("analyze: signal length " + std::to_string(signal.size()) +
                       " differs from system length " + std::to_string(sys.length()));
  detail::require_painless(sys);
  const CVec spectrum = fft::forward(signal);
  const std::size_t L = sys.length();
  const double inv = 1.0 / static_cast<double>(L);
  CoefficientSet out;
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const auto& ch = sys.channels()[m];
    const auto& w = sys.window(m, kind);
    CVec folded(ch.n_shifts, cd(0.0, 0.0));
    for (std::size_t i = 0; i < ch.support_len; ++i) {
      const std::size_t k = ch.support_bin(i, L);
      folded[k % ch.n_shifts] += spectrum[k] * std::conj(w[k]);
    }
    fft::backward_in_place(folded);
    for (auto& v : folded) v *= inv;
    out.entries.push_back(std::move(folded));
    out.channel_to_T.push_back(m);
  }
  return out;
}

inline CoefficientSet analyze(const System& sys, const CVec& signal,
                              WindowKind kind = WindowKind::original) {
  return analyze(sys, std::span<const cd>(signal), kind);
}

/// sum_{m,n} c[m][n] w_{m,n} for the chosen window family.
inline CVec synthesize(const System& sys, const CoefficientSet& coeffs,
                       WindowKind kind = WindowKind::dual) {
  if (coeffs.entries.size() != sys.size())
    throw config_error("synthesize: coefficient set has " +
                       std::to_string(coeffs.entries.size()) + " channels, system has " +
                       std::to_string(sys.size()));
  detail::require_painless(sys);
  const std::size_t L = sys.length();
  CVec spectrum(L, cd(0.0, 0.0));
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const auto& ch = sys.channels()[m];
    if (coeffs.entries[m].size() != ch.n_shifts)
      throw config_error("synthesize: channel " + std::to_string(m) + " expects " +
                         std::to_string(ch.n_shifts) + " coefficients");
    const CVec c_hat = fft::forward(coeffs.entries[m]);
    const auto& w = sys.window(m, kind);
    for (std::size_t i = 0; i < ch.support_len; ++i) {
      const std::size_t k = ch.support_bin(i, L);
      spectrum[k] += w[k] * c_hat[k % ch.n_shifts];
    }
  }
  fft::backward_in_place(spectrum);
  const double inv = 1.0 / static_cast<double>(L);
  for (auto& v : spectrum) v *= inv;
  return spectrum;
}

/// S f as the Fourier multiplier s.
inline CVec frame_apply(const System& sys, std::span<const cd> signal) {
  if (signal.size() != sys.length()) throw config_error("frame_apply: signal length mismatch");
  CVec spectrum = fft::forward(signal);
  const double inv = 1.0 / static_cast<double>(sys.length());
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    spectrum[k] *= sys.frame_multiplier()[k] * inv;
  fft::backward_in_place(spectrum);
  return spectrum;
}

/// Time-domain window h_m by direct summation (no FFT).
inline CVec time_window_direct(const System& sys, std::size_t m,
                               WindowKind kind = WindowKind::original) {
  const std::size_t L = sys.length();
  const auto& w = sys.window(m, kind);
  CVec h(L, cd(0.0, 0.0));
  for (std::size_t x = 0; x < L; ++x) {
    cd acc(0.0, 0.0);
    for (std::size_t k = 0; k < L; ++k) {
      if (w[k] == cd(0.0, 0.0)) continue;
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((k * x) % L) /
                           static_cast<double>(L);
      acc += w[k] * cd(std::cos(phase), std::sin(phase));
    }
    h[x] = acc / static_cast<double>(L);
  }
  return h;
}

/// Time-domain window h_m via inverse FFT.
inline CVec time_window(const System& sys, std::size_t m, WindowKind kind = WindowKind::original) {
  CVec h = fft::backward(sys.window(m, kind));
  for (auto& v : h) v /= static_cast<double>(sys.length());
  return h;
}

inline constexpr std::size_t kDenseLengthLimit = 256;

/// Analysis operator as a dense matrix: row (m, n) is conj(h_{m,n}), rows
/// ordered channel-major. Built by direct summation for use as an oracle.
inline Eigen::MatrixXcd dense_frame_matrix(const System& sys,
                                           WindowKind kind = WindowKind::original) {
  const std::size_t L = sys.length();
  if (L > kDenseLengthLimit)
    throw config_error("dense_frame_matrix: L = " + std::to_string(L) + " exceeds limit " +
                       std::to_string(kDenseLengthLimit));
  Eigen::MatrixXcd M(static_cast<Eigen::Index>(sys.coefficient_count()),
                     static_cast<Eigen::Index>(L));
  Eigen::Index row = 0;
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const CVec h = time_window_direct(sys, m, kind);
    const auto& ch = sys.channels()[m];
    const auto shift = static_cast<std::size_t>(std::llround(ch.a));
    for (std::size_t n = 0; n < ch.n_shifts; ++n, ++row)
      for (std::size_t x = 0; x < L; ++x)
        M(row, static_cast<Eigen::Index>(x)) = std::conj(h[(x + L - (n * shift) % L) % L]);
  }
  return M;
}

// ---------------------------------------------------------------------------
// Validation and diagnostics

struct PainlessReport {
  ValidationReport covering;
  double max_a = 0.0;
  double overlap_ratio_min = 1.0;  // a_m' / a_m over overlapping cubes, m' != m
  double overlap_ratio_max = 1.0;
  std::vector<bool> channel_painless;
  double c_beta0 = 0.0;  // max |h_hat_m| / a_m^{1/2}
  double c_beta1 = 0.0;  // max |d/dxi h_hat_m| / a_m^{3/2}, first differences
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the painless-system conditions. A window reaching outside
/// [b_m, b_m + 1/a_m] throws; every other failure is listed in violations.
inline PainlessReport validate_painless(const System& sys) {
  const std::size_t L = sys.length();
  const auto Ld = static_cast<double>(L);
  PainlessReport rep;

  for (std::size_t m = 0; m < sys.size(); ++m) {
    const auto& ch = sys.channels()[m];
    for (std::size_t k = 0; k < L; ++k) {
      if (ch.window_hat[k] == cd(0.0, 0.0)) continue;
      const double rel = detail::wrap_unit(static_cast<double>(k) / Ld - ch.b);
      const double rel_wrapped = (rel > 1.0 - 1e-12) ? 0.0 : rel;
      if (rel_wrapped > 1.0 / ch.a + 1e-12)
        throw frame_error("validate_painless: channel " + std::to_string(m) +
                          " has spectrum outside [b, b + 1/a] at bin " + std::to_string(k));
    }
    rep.max_a = std::max(rep.max_a, ch.a);
    rep.channel_painless.push_back(ch.painless());
    if (!ch.painless())
      rep.violations.push_back("painless: channel " + std::to_string(m) + " support " +
                               std::to_string(ch.support_len) + " exceeds " +
                               std::to_string(ch.n_shifts) + " time shifts");

    const double sa = std::sqrt(ch.a);
    for (std::size_t k = 0; k < L; ++k) {
      rep.c_beta0 = std::max(rep.c_beta0, std::abs(ch.window_hat[k]) / sa);
      const double diff = std::abs(ch.window_hat[(k + 1) % L] - ch.window_hat[k]) * Ld;
      rep.c_beta1 = std::max(rep.c_beta1, diff / (sa * ch.a));
    }
  }

  const Covering cov = detail::nsgf_covering_unchecked(sys.geometry(), sys.c_star(), 1.0);
  rep.covering = validate_structured(cov, Box{Interval{0.0, 1.0}});
  for (const auto& v : rep.covering.violations) rep.violations.push_back(v);

  const auto nb = neighbor_sets(cov);
  for (std::size_t m = 0; m < nb.size(); ++m)
    for (std::size_t u : nb[m]) {
      if (u == m) continue;
      const double r = sys.channels()[u].a / sys.channels()[m].a;
      rep.overlap_ratio_min = std::min(rep.overlap_ratio_min, r);
      rep.overlap_ratio_max = std::max(rep.overlap_ratio_max, r);
    }
  return rep;
}

struct DecayReport {
  std::size_t order = 0;
  RVec c_n;                 // per channel
  double c_n_max = 0.0;
  std::array<double, 3> p_values{1.0, 2.0, 4.0};
  std::array<RVec, 3> lp_ratio;  // per p, per channel: max_n |h_{T,n}|_p / |T|^{1/2-1/p}
  std::array<double, 3> lp_ratio_max{};
};

/// Spatial decay of the atoms measured against |T|^{1/2} (1 + A_T |x|)^{-N},
/// with |x| the circular distance, and L^p norms against |T|^{1/2 - 1/p}.
inline DecayReport decay_check(const System& sys, std::size_t order) {
  if (order < 1) throw config_error("decay_check: order must be at least 1");
  DecayReport rep;
  rep.order = order;
  const std::size_t L = sys.length();
  const Covering cov = detail::nsgf_covering_unchecked(sys.geometry(), sys.c_star(), 1.0);
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const CVec h = time_window(sys, m);
    const double det = cov.maps()[m].determinant();
    const double scale = cov.maps()[m].scale()[0];
    double cn = 0.0;
    for (std::size_t x = 0; x < L; ++x) {
      const auto dist = static_cast<double>(std::min(x, L - x));
      cn = std::max(cn, std::abs(h[x]) * std::pow(1.0 + scale * dist, static_cast<double>(order)) /
                            std::sqrt(det));
    }
    rep.c_n.push_back(cn);
    rep.c_n_max = std::max(rep.c_n_max, cn);

    // Circular shifts preserve every l^p norm, so n = 0 attains the max.
    for (std::size_t i = 0; i < 3; ++i) {
      const double p = rep.p_values[i];
      double sum = 0.0;
      for (const auto& v : h) sum += std::pow(std::abs(v), p);
      const double ratio = std::pow(sum, 1.0 / p) / std::pow(det, 0.5 - 1.0 / p);
      rep.lp_ratio[i].push_back(ratio);
      rep.lp_ratio_max[i] = std::max(rep.lp_ratio_max[i], ratio);
    }
  }
  return rep;
}

}  // namespace nsgf
