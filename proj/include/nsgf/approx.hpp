#pragma once

// N-term approximation by thresholding L^p-normalized frame coefficients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "nsgf/bapu.hpp"
#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/frame.hpp"
#include "nsgf/spaces.hpp"

namespace nsgf {

struct RankedCoefficient {
  double magnitude = 0.0;
  std::size_t channel = 0;
  std::size_t index = 0;
};

/// Decreasing rearrangement; ties go to the smaller (channel, index).
inline std::vector<RankedCoefficient> rearrange(const CoefficientSet& coeffs) {
  std::vector<RankedCoefficient> out;
  out.reserve(coeffs.total());
  for (std::size_t m = 0; m < coeffs.entries.size(); ++m)
    for (std::size_t n = 0; n < coeffs.entries[m].size(); ++n)
      out.push_back({std::abs(coeffs.entries[m][n]), m, n});
  std::sort(out.begin(), out.end(), [](const RankedCoefficient& x, const RankedCoefficient& y) {
    if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
    if (x.channel != y.channel) return x.channel < y.channel;
    return x.index < y.index;
  });
  return out;
}

/// Keeps the first `count` entries of `order` from `coeffs` and synthesizes
/// with the canonical dual windows.
inline CVec threshold_reconstruct(const System& sys, const CoefficientSet& coeffs,
                                  std::span<const RankedCoefficient> order, std::size_t count) {
  CoefficientSet kept = sys.zero_coefficients();
  count = std::min(count, order.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = order[i];
    kept.entries[r.channel][r.index] = coeffs.entries[r.channel][r.index];
  }
  return synthesize(sys, kept, WindowKind::dual);
}

/// f_N: the expansion f = sum <f, h^p_{T,n}> |T|^{1/p-1/2} h~_{T,n} restricted
/// to the N largest |<f, h^p_{T,n}>|. N beyond the coefficient count keeps all.
inline CVec nterm_approx(const System& sys, const Covering& covering, std::span<const cd> signal,
                         std::size_t count, double p) {
  const CoefficientSet canonical = analyze(sys, signal);
  const auto order = rearrange(lp_normalized_coeffs(canonical, covering, p));
  return threshold_reconstruct(sys, canonical, order, count);
}

/// Least-squares slope of log(error) against log(N) over [first, last).
inline double fit_decay(std::span<const double> ns, std::span<const double> errors,
                        std::size_t first, std::size_t last) {
  if (ns.size() != errors.size()) throw config_error("fit_decay: length mismatch");
  if (last > ns.size() || first >= last || last - first < 2)
    throw config_error("fit_decay: fit range needs at least two points");
  double sx = 0.0, sy = 0.0;
  const auto n = static_cast<double>(last - first);
  for (std::size_t i = first; i < last; ++i) {
    if (!(errors[i] > 0.0)) throw config_error("exact recovery reached; shrink range");
    if (!(ns[i] > 0.0)) throw config_error("fit_decay: N must be positive");
    sx += std::log(ns[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double dx = std::log(ns[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw config_error("fit_decay: N values must not all coincide");
  return sxy / sxx;
}

struct SweepResult {
  std::vector<std::size_t> ns;
  RVec errors;
  double tau = 1.0;
  double p = 2.0;
  double s = 0.0;
  double alpha = 0.0;
  double signal_norm = 0.0;  // |f| in D(Q, L^tau, l^tau_{omega^s})
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  std::size_t fit_first = 0;
  std::size_t fit_last = 0;

  /// errors[i] N_i^alpha / |f|_tau.
  RVec jackson_ratios() const {
    RVec out;
    for (std::size_t i = 0; i < ns.size(); ++i)
      out.push_back(errors[i] * std::pow(static_cast<double>(ns[i]), alpha) / signal_norm);
    return out;
  }
};

/// Errors |f - f_N| in D(Q, L^p, l^p_{omega^s}) over the list of N, with the
/// log-log slope fitted over all but the first and last points (all points
/// when fewer than four are given).
inline SweepResult error_sweep(const System& sys, const Covering& covering, const Bapu& bapu,
                               std::span<const cd> signal, std::span<const std::size_t> ns,
                               double tau, double p, double s) {
  if (!(tau > 0.0 && p > 0.0)) throw config_error("error_sweep: tau and p must be positive");
  if (!(tau < p)) throw config_error("alpha must be positive");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw config_error("error_sweep: N list must be increasing");

  SweepResult res;
  res.ns.assign(ns.begin(), ns.end());
  res.tau = tau;
  res.p = p;
  res.s = s;
  res.alpha = 1.0 / tau - 1.0 / p;
  res.signal_norm = ds_norm(signal, bapu, {tau, tau, s});

  const CoefficientSet canonical = analyze(sys, signal);
  const auto order = rearrange(lp_normalized_coeffs(canonical, covering, p));
  const NormParams err_params{p, p, s};
  CVec diff(signal.size());
  for (std::size_t count : ns) {
    const CVec approx = threshold_reconstruct(sys, canonical, order, count);
    for (std::size_t x = 0; x < diff.size(); ++x) diff[x] = signal[x] - approx[x];
    res.errors.push_back(ds_norm(diff, bapu, err_params));
  }

  if (ns.size() >= 4) {
    res.fit_first = 1;
    res.fit_last = ns.size() - 1;
  } else {
    res.fit_first = 0;
    res.fit_last = ns.size();
  }
  if (res.fit_last - res.fit_first >= 2) {
    RVec nd(ns.begin(), ns.end());
    bool positive = true;
    for (std::size_t i = res.fit_first; i < res.fit_last; ++i) positive = positive && res.errors[i] > 0.0;
    if (positive) res.fitted_slope = fit_decay(nd, res.errors, res.fit_first, res.fit_last);
  }
  return res;
}

}  // namespace nsgf
