#pragma once

// Smooth partition of unity subordinate to a covering, sampled on a 1-D
// frequency grid, plus the Fourier multipliers it defines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/fft.hpp"

namespace nsgf {

/// Smooth step: 0 for t <= 0, 1 for t >= 1, rho(t)/(rho(t)+rho(1-t)) between,
/// with rho(t) = exp(-1/t).
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double r0 = std::exp(-1.0 / t);
  const double r1 = std::exp(-1.0 / (1.0 - t));
  return r0 / (r0 + r1);
}

/// C-infinity bump on the unit cube: 1 on (w, 1-w)^d, 0 outside (0,1)^d.
class PlateauBump {
 public:
  PlateauBump(double ramp_width, std::size_t dimension)
      : ramp_(ramp_width), dim_(dimension) {
    if (!(ramp_width > 0.0 && ramp_width < 0.5))
      throw config_error("plateau bump: ramp width must lie in (0, 1/2)");
    if (dimension == 0) throw config_error("plateau bump: dimension must be positive");
  }

  double ramp_width() const { return ramp_; }
  std::size_t dimension() const { return dim_; }

  double operator()(std::span<const double> u) const {
    if (u.size() != dim_) throw config_error("plateau bump: dimension mismatch");
    double v = 1.0;
    for (double x : u) {
      v *= smooth_step(x / ramp_) * smooth_step((1.0 - x) / ramp_);
      if (v == 0.0) break;
    }
    return v;
  }

  double operator()(double u) const {
    return smooth_step(u / ramp_) * smooth_step((1.0 - u) / ramp_);
  }

 private:
  double ramp_;
  std::size_t dim_;
};

inline double plateau_value(const PlateauBump& bump, std::span<const double> point) {
  return bump(point);
}

/// The widest ramp whose plateau still contains the covering's inner box,
/// measured in the unit coordinates of the base box.
inline PlateauBump bump_for(const Covering& cov) {
  double w = 0.5;
  for (std::size_t i = 0; i < cov.dimension(); ++i) {
    const auto& q = cov.base_box()[i];
    const auto& p = cov.inner_box()[i];
    w = std::min(w, (p.lo - q.lo) / q.width());
    w = std::min(w, (q.hi - p.hi) / q.width());
  }
  return PlateauBump(w, cov.dimension());
}

/// Uniform 1-D frequency grid: bins xi_k = lo + k (hi - lo) / bins. A periodic
/// grid wraps [lo, hi) onto a circle; the DFT grid of a length-L signal is
/// {L, 0, 1, periodic}.
struct FrequencyGrid {
  std::size_t bins = 0;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = true;

  static FrequencyGrid dft(std::size_t length) { return {length, 0.0, 1.0, true}; }

  double spacing() const { return (hi - lo) / static_cast<double>(bins); }
  double point(std::size_t k) const { return lo + static_cast<double>(k) * spacing(); }
  double period() const { return periodic ? hi - lo : 0.0; }
};

class Bapu {
 public:
  Bapu(Covering covering, PlateauBump bump, FrequencyGrid grid, std::vector<RVec> psi)
      : cov_(std::move(covering)), bump_(bump), grid_(grid), psi_(std::move(psi)) {}

  const Covering& covering() const { return cov_; }
  const PlateauBump& bump() const { return bump_; }
  const FrequencyGrid& grid() const { return grid_; }
  std::size_t size() const { return psi_.size(); }
  const RVec& psi(std::size_t t) const { return psi_.at(t); }
  const std::vector<RVec>& all() const { return psi_; }

  /// Phi(T^{-1} xi) in base-box unit coordinates, no wrap-around.
  double lifted_bump(std::size_t t, double xi) const {
    const auto& q = cov_.base_box()[0];
    const auto& map = cov_.maps()[t];
    const double u = ((xi - map.offset()[0]) / map.scale()[0] - q.lo) / q.width();
    return bump_(u);
  }

  /// Sum of lifted_bump over the periodic images of xi lying in Q_T.
  double periodized_bump(std::size_t t, double xi) const {
    const double period = cov_.period();
    if (period <= 0.0) return lifted_bump(t, xi);
    const auto box = cov_.image(t)[0];
    double v = 0.0;
    for (double y = xi + period * std::ceil((box.lo - xi) / period); y < box.hi; y += period)
      v += lifted_bump(t, y);
    return v;
  }

  double denominator(double xi) const {
    double den = 0.0;
    for (std::size_t t = 0; t < cov_.size(); ++t) den += periodized_bump(t, xi);
    return den;
  }

  /// psi_T at an arbitrary frequency (not restricted to grid bins).
  double evaluate(std::size_t t, double xi) const {
    const double num = lifted_bump(t, xi);
    if (num == 0.0) return 0.0;
    return num / denominator(xi);
  }

 private:
  Covering cov_;
  PlateauBump bump_;
  FrequencyGrid grid_;
  std::vector<RVec> psi_;
};

/// psi_T(xi) = Phi(T^{-1} xi) / sum_T' Phi(T'^{-1} xi) sampled on the grid.
inline Bapu build_bapu(const Covering& cov, const PlateauBump& bump, const FrequencyGrid& grid) {
  if (cov.empty()) throw config_error("build_bapu: empty covering");
  if (cov.dimension() != 1 || bump.dimension() != 1)
    throw config_error("build_bapu: sampled partitions are one-dimensional");
  if (grid.bins == 0 || !(grid.lo < grid.hi)) throw config_error("build_bapu: empty grid");
  if (grid.periodic && std::abs(grid.period() - cov.period()) > 1e-12)
    throw config_error("build_bapu: periodic grid requires a covering with the same period");

  // The plateau must contain the inner box.
  const auto& q = cov.base_box()[0];
  const auto& p = cov.inner_box()[0];
  const double w = bump.ramp_width();
  if ((p.lo - q.lo) / q.width() < w - 1e-12 || (q.hi - p.hi) / q.width() < w - 1e-12)
    throw config_error("build_bapu: bump plateau does not contain the inner box");

  Bapu proto(cov, bump, grid, {});
  std::vector<RVec> psi(cov.size(), RVec(grid.bins, 0.0));
  RVec num(cov.size());
  for (std::size_t k = 0; k < grid.bins; ++k) {
    const double xi = grid.point(k);
    double den = 0.0;
    for (std::size_t t = 0; t < cov.size(); ++t) {
      num[t] = proto.periodized_bump(t, xi);
      den += num[t];
    }
    if (den < 1e-14)
      throw frame_error("build_bapu: covering gap at bin " + std::to_string(k));
    for (std::size_t t = 0; t < cov.size(); ++t) psi[t][k] = num[t] / den;
  }
  return Bapu(cov, bump, grid, std::move(psi));
}

/// Inverse DFT of psi times DFT of signal (unitary pair).
inline CVec multiplier_apply(std::span<const double> psi, std::span<const cd> signal) {
  if (psi.size() != signal.size())
    throw config_error("multiplier_apply: multiplier and signal lengths differ");
  CVec spec = fft::forward(signal);
  const double inv = 1.0 / static_cast<double>(signal.size());
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= psi[k] * inv;
  fft::backward_in_place(spec);
  return spec;
}

/// Same multiplier applied to a precomputed (unnormalized) spectrum.
inline CVec multiplier_apply_spectrum(std::span<const double> psi, std::span<const cd> spectrum) {
  if (psi.size() != spectrum.size())
    throw config_error("multiplier_apply: multiplier and spectrum lengths differ");
  CVec out(spectrum.size());
  const double inv = 1.0 / static_cast<double>(spectrum.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = spectrum[k] * (psi[k] * inv);
  fft::backward_in_place(out);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// Largest |sum_T psi_T - 1| over the grid.
inline double partition_defect(const Bapu& bapu) {
  double worst = 0.0;
  for (std::size_t k = 0; k < bapu.grid().bins; ++k) {
    double sum = 0.0;
    for (const auto& row : bapu.all()) sum += row[k];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

/// Largest number of nonzero psi_T at a single bin.
inline std::size_t max_overlap(const Bapu& bapu) {
  std::size_t worst = 0;
  for (std::size_t k = 0; k < bapu.grid().bins; ++k) {
    std::size_t count = 0;
    for (const auto& row : bapu.all()) count += row[k] != 0.0;
    worst = std::max(worst, count);
  }
  return worst;
}

/// L^1 norm of the inverse Fourier transform of psi_T(T .), estimated with a
/// length-`samples` DFT over a window twice the base-box width. Invariant under
/// the affine change of variables, so this is ||F^{-1} psi_T||_{L^1}.
inline RVec multiplier_l1_norms(const Bapu& bapu, std::size_t samples) {
  const auto& q = bapu.covering().base_box()[0];
  RVec out;
  out.reserve(bapu.size());
  CVec g(samples);
  for (std::size_t t = 0; t < bapu.size(); ++t) {
    const auto& map = bapu.covering().maps()[t];
    for (std::size_t i = 0; i < samples; ++i) {
      const double u = -0.5 + 2.0 * static_cast<double>(i) / static_cast<double>(samples);
      const double xi = map.scale()[0] * (q.lo + u * q.width()) + map.offset()[0];
      g[i] = bapu.evaluate(t, xi);
    }
    fft::forward_in_place(g);
    double sum = 0.0;
    for (const auto& v : g) sum += std::abs(v);
    out.push_back(sum / static_cast<double>(samples));
  }
  return out;
}

struct DerivativeBounds {
  double first = 0.0;   // max |psi'| estimated by first differences
  double second = 0.0;  // max |psi''| estimated by second differences
  bool vanishes_off_support = true;
};

inline DerivativeBounds derivative_bounds(const Bapu& bapu) {
  DerivativeBounds out;
  const auto& grid = bapu.grid();
  const double h = grid.spacing();
  const std::size_t n = grid.bins;
  for (std::size_t t = 0; t < bapu.size(); ++t) {
    const auto& psi = bapu.psi(t);
    const auto box = bapu.covering().image(t)[0];
    for (std::size_t k = 0; k < n; ++k) {
      const bool wrap_ok = grid.periodic || (k > 0 && k + 1 < n);
      if (psi[k] != 0.0 &&
          !detail::contains_mod(box, grid.point(k), bapu.covering().period()))
        out.vanishes_off_support = false;
      if (!wrap_ok) continue;
      const double prev = psi[(k + n - 1) % n];
      const double next = psi[(k + 1) % n];
      out.first = std::max(out.first, std::abs(next - psi[k]) / h);
      out.second = std::max(out.second, std::abs(next - 2.0 * psi[k] + prev) / (h * h));
    }
  }
  return out;
}

}  // namespace nsgf
