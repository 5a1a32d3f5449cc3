#pragma once

// Decomposition-space and coefficient-space norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nsgf/bapu.hpp"
#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/fft.hpp"
#include "nsgf/frame.hpp"

namespace nsgf {

struct NormParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;

  void check() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw config_error("norm parameters: p must be in (0, inf)");
    if (!(q > 0.0) || !std::isfinite(q)) throw config_error("norm parameters: q must be in (0, inf)");
    if (!std::isfinite(s)) throw config_error("norm parameters: s must be finite");
  }
};

/// (sum_T (omega_T^s |a_T|)^q)^{1/q}.
inline double seq_norm(std::span<const double> values, std::span<const double> weights,
                       double q, double s) {
  if (!(q > 0.0)) throw config_error("seq_norm: q must be positive");
  if (values.size() != weights.size()) throw config_error("seq_norm: length mismatch");
  double sum = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t)
    sum += std::pow(std::pow(weights[t], s) * std::abs(values[t]), q);
  return std::pow(sum, 1.0 / q);
}

/// Grid L^p norm with unit sample spacing.
inline double lp_grid_norm(std::span<const cd> g, double p) {
  if (!(p > 0.0)) throw config_error("lp_grid_norm: p must be positive");
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : g) sum += std::norm(v);
    return std::sqrt(sum);
  }
  for (const auto& v : g) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

namespace detail {

inline void require_dft_grid(const Bapu& bapu, std::size_t length) {
  if (!bapu.grid().periodic || bapu.grid().bins != length)
    throw config_error("partition grid does not match the signal length " +
                       std::to_string(length));
}

}  // namespace detail

/// Per-T values |psi_T(D) f|_{L^p}.
inline RVec local_norms(std::span<const cd> signal, const Bapu& bapu, double p) {
  detail::require_dft_grid(bapu, signal.size());
  const CVec spectrum = fft::forward(signal);
  RVec out;
  out.reserve(bapu.size());
  for (std::size_t t = 0; t < bapu.size(); ++t)
    out.push_back(lp_grid_norm(multiplier_apply_spectrum(bapu.psi(t), spectrum), p));
  return out;
}

/// |f|_{D(Q, L^p, l^q_{omega^s})}.
inline double ds_norm(std::span<const cd> signal, const Bapu& bapu, const NormParams& params) {
  params.check();
  const RVec local = local_norms(signal, bapu, params.p);
  return seq_norm(local, bapu.covering().weights(), params.q, params.s);
}

/// Scales channel T by |T|^{1/2 - 1/p}, giving <f, h^p_{T,n}>.
inline CoefficientSet lp_normalized_coeffs(const CoefficientSet& coeffs, const Covering& covering,
                                           double p) {
  if (!(p > 0.0)) throw config_error("lp_normalized_coeffs: p must be positive");
  CoefficientSet out = coeffs;
  for (std::size_t m = 0; m < out.entries.size(); ++m) {
    const std::size_t t = out.channel_to_T.at(m);
    if (t >= covering.size()) throw config_error("lp_normalized_coeffs: channel index out of range");
    const double factor = std::pow(covering.maps()[t].determinant(), 0.5 - 1.0 / p);
    for (auto& v : out.entries[m]) v *= factor;
  }
  return out;
}

/// |c|_{d(Q, l^p, l^q_{omega^s})}: inner l^p over n, outer weighted l^q over T.
inline double coeff_norm(const CoefficientSet& coeffs, const Covering& covering,
                         const NormParams& params) {
  params.check();
  RVec local(covering.size(), 0.0);
  for (std::size_t m = 0; m < coeffs.entries.size(); ++m) {
    const std::size_t t = coeffs.channel_to_T.at(m);
    if (t >= covering.size()) throw config_error("coeff_norm: channel index out of range");
    local[t] = lp_grid_norm(coeffs.entries[m], params.p);
  }
  return seq_norm(local, covering.weights(), params.q, params.s);
}

struct EquivalenceReport {
  NormParams params;
  RVec ds_norms;
  RVec coeff_norms;
  RVec ratios;
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  std::size_t skipped = 0;
  std::string corpus;

  double spread() const { return c2_hat / c1_hat; }
};

/// Empirical two-sided constants for |f|_D ~ |<f, h^p_{T,n}>|_d over a corpus.
inline EquivalenceReport equivalence_report(const std::vector<CVec>& corpus, const System& sys,
                                            const Covering& covering, const Bapu& bapu,
                                            const NormParams& params, std::string descriptor = {}) {
  params.check();
  EquivalenceReport rep;
  rep.params = params;
  rep.corpus = std::move(descriptor);
  rep.c1_hat = std::numeric_limits<double>::infinity();
  rep.c2_hat = 0.0;
  for (const auto& f : corpus) {
    const double ds = ds_norm(f, bapu, params);
    if (!(ds > 0.0)) {
      ++rep.skipped;
      continue;
    }
    const auto c = lp_normalized_coeffs(analyze(sys, f), covering, params.p);
    const double cn = coeff_norm(c, covering, params);
    rep.ds_norms.push_back(ds);
    rep.coeff_norms.push_back(cn);
    rep.ratios.push_back(cn / ds);
    rep.c1_hat = std::min(rep.c1_hat, cn / ds);
    rep.c2_hat = std::max(rep.c2_hat, cn / ds);
  }
  if (rep.ratios.empty()) throw config_error("equivalence_report: corpus has no nonzero signal");
  return rep;
}

struct LemmaCheckReport {
  // Nikolskii-type ratios |h_T|_q / (|T|^{1/p-1/q} |h_T|_p) per (p, q) pair and channel.
  std::vector<std::pair<double, double>> nikolskii_pairs;  // q = inf encoded as infinity
  std::vector<RVec> nikolskii;
  RVec nikolskii_max;
  RVec nikolskii_spread;  // max / min across channels
  // Multiplier ratios |psi_T(D) f|_p / (|F^{-1} psi_T|_{min(1,p)} |f|_p) per p and T.
  RVec multiplier_p;
  std::vector<RVec> multiplier;
  RVec multiplier_max;
};

/// Numerical proxies for the Nikolskii-type inequality on band-limited windows
/// and the multiplier bound for psi_T(D) on band-limited signals.
inline LemmaCheckReport appendix_lemma_checks(const System& sys, const Covering& covering,
                                              const Bapu& bapu, std::uint64_t seed = 1) {
  detail::require_dft_grid(bapu, sys.length());
  const std::size_t L = sys.length();
  LemmaCheckReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  rep.nikolskii_pairs = {{1.0, 2.0}, {2.0, 4.0}, {1.0, inf}};

  auto norm_or_max = [](const CVec& g, double p) {
    if (std::isinf(p)) {
      double m = 0.0;
      for (const auto& v : g) m = std::max(m, std::abs(v));
      return m;
    }
    return lp_grid_norm(g, p);
  };

  std::vector<CVec> windows;
  for (std::size_t m = 0; m < sys.size(); ++m) windows.push_back(time_window(sys, m));

  for (const auto& [p, q] : rep.nikolskii_pairs) {
    RVec per;
    for (std::size_t m = 0; m < sys.size(); ++m) {
      const double det = covering.maps()[m].determinant();
      const double expo = 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q);
      per.push_back(norm_or_max(windows[m], q) / (std::pow(det, expo) * norm_or_max(windows[m], p)));
    }
    rep.nikolskii_max.push_back(*std::max_element(per.begin(), per.end()));
    rep.nikolskii_spread.push_back(*std::max_element(per.begin(), per.end()) /
                                   *std::min_element(per.begin(), per.end()));
    rep.nikolskii.push_back(std::move(per));
  }

  rep.multiplier_p = {0.5, 1.0, 2.0};
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (double p : rep.multiplier_p) {
    const double ptilde = std::min(1.0, p);
    RVec per;
    for (std::size_t t = 0; t < bapu.size(); ++t) {
      const auto& psi = bapu.psi(t);
      // Band-limited f: random spectrum on the support of psi_T.
      CVec spec(L, cd(0.0, 0.0));
      for (std::size_t k = 0; k < L; ++k)
        if (psi[k] != 0.0) spec[k] = cd(uniform() - 0.5, uniform() - 0.5);
      CVec f = fft::backward(spec);
      for (auto& v : f) v /= static_cast<double>(L);
      CVec kernel(psi.begin(), psi.end());
      fft::backward_in_place(kernel);
      for (auto& v : kernel) v /= static_cast<double>(L);
      const CVec out = multiplier_apply(psi, f);
      const double denom = lp_grid_norm(kernel, ptilde) * lp_grid_norm(f, p);
      per.push_back(denom > 0.0 ? lp_grid_norm(out, p) / denom : 0.0);
    }
    rep.multiplier_max.push_back(*std::max_element(per.begin(), per.end()));
    rep.multiplier.push_back(std::move(per));
  }
  return rep;
}

}  // namespace nsgf
