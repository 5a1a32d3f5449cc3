#pragma once

// Seeded test-signal corpora.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform and normal deviates are derived from it here (53-bit
// mantissa and Box-Muller) rather than through <random> distributions, whose
// algorithms vary between standard libraries. Changing any of this changes
// every corpus, so kCorpusVersion is bumped with it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nsgf/error.hpp"
#include "nsgf/fft.hpp"
#include "nsgf/frame.hpp"

namespace nsgf {

inline constexpr int kCorpusVersion = 1;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n > 0.
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    return r * std::cos(th);
  }

  cd complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  cd unit_phase() {
    const double th = 2.0 * std::numbers::pi * uniform();
    return {std::cos(th), std::sin(th)};
  }

 private:
  std::mt19937_64 gen_;
  std::optional<double> spare_;
};

struct CorpusOptions {
  std::size_t sparsity = 5;      // K for sparse-in-frame signals
  double decay_exponent = 1.05;  // beta for prescribed-decay magnitudes m^{-beta}
};

struct Corpus {
  std::uint64_t seed = 0;
  std::vector<CVec> signals;
  std::vector<std::string> kinds;

  std::size_t size() const { return signals.size(); }
};

inline const std::vector<std::string>& corpus_kinds() {
  static const std::vector<std::string> kinds{"white", "band-limited", "chirp", "sparse-in-frame",
                                              "prescribed-decay", "mixed"};
  return kinds;
}

namespace detail {

inline void normalize_l2(CVec& f) {
  double e = 0.0;
  for (const auto& v : f) e += std::norm(v);
  if (e > 0.0) {
    const double inv = 1.0 / std::sqrt(e);
    for (auto& v : f) v *= inv;
  }
}

inline CVec white_signal(Rng& rng, std::size_t L) {
  CVec f(L);
  for (auto& v : f) v = rng.complex_normal();
  return f;
}

inline CVec bandlimited_signal(Rng& rng, std::size_t L) {
  const std::size_t width = std::max<std::size_t>(1, L / 16 + rng.index(std::max<std::size_t>(1, L / 4)));
  const std::size_t start = rng.index(L);
  CVec spec(L, cd(0.0, 0.0));
  for (std::size_t i = 0; i < width; ++i) spec[(start + i) % L] = rng.complex_normal();
  fft::backward_in_place(spec);
  return spec;
}

inline CVec chirp_signal(Rng& rng, std::size_t L) {
  const double f0 = rng.uniform();
  const double f1 = rng.uniform();
  const double Ld = static_cast<double>(L);
  CVec f(L);
  for (std::size_t x = 0; x < L; ++x) {
    const double t = static_cast<double>(x);
    const double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * (f1 - f0) * t * t / Ld);
    f[x] = {std::cos(phase), std::sin(phase)};
  }
  return f;
}

// Flat index -> (channel, n), channel-major.
inline std::pair<std::size_t, std::size_t> locate(const System& sys, std::size_t flat) {
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const std::size_t n = sys.channels()[m].n_shifts;
    if (flat < n) return {m, flat};
    flat -= n;
  }
  throw config_error("coefficient index out of range");
}

// Fisher-Yates prefix: the first k entries of a random permutation of 0..n-1.
inline std::vector<std::size_t> random_positions(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
  idx.resize(k);
  return idx;
}

inline CVec sparse_signal(Rng& rng, const System& sys, std::size_t k) {
  CoefficientSet c = sys.zero_coefficients();
  for (std::size_t flat : random_positions(rng, sys.coefficient_count(), k)) {
    const auto [m, n] = locate(sys, flat);
    c.entries[m][n] = (1.0 + rng.uniform()) * rng.unit_phase();
  }
  return synthesize(sys, c, WindowKind::dual);
}

inline CVec decay_signal(Rng& rng, const System& sys, double beta) {
  const std::size_t total = sys.coefficient_count();
  CoefficientSet c = sys.zero_coefficients();
  const auto order = random_positions(rng, total, total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto [m, n] = locate(sys, order[i]);
    c.entries[m][n] = std::pow(static_cast<double>(i + 1), -beta) * rng.unit_phase();
  }
  return synthesize(sys, c, WindowKind::dual);
}

}  // namespace detail

/// Deterministic corpus of `count` signals of length L, each normalized to
/// unit l^2 norm. "mixed" cycles through the other kinds, skipping the
/// frame-based ones when no system is given.
inline Corpus generate_corpus(const std::string& kind, std::size_t count, std::size_t L,
                              std::uint64_t seed, const System* sys = nullptr,
                              const CorpusOptions& options = {}) {
  const auto& known = corpus_kinds();
  if (std::find(known.begin(), known.end(), kind) == known.end())
    throw config_error("unknown corpus kind '" + kind + "'");
  if (L == 0) throw config_error("generate_corpus: signal length must be positive");
  const bool needs_sys = kind == "sparse-in-frame" || kind == "prescribed-decay";
  if (needs_sys && sys == nullptr) throw config_error("corpus kind '" + kind + "' needs a frame");
  if (sys != nullptr && sys->length() != L)
    throw config_error("generate_corpus: L differs from the frame's signal length");

  std::vector<std::string> cycle{"white", "band-limited", "chirp"};
  if (sys != nullptr) {
    cycle.push_back("sparse-in-frame");
    cycle.push_back("prescribed-decay");
  }

  Corpus corpus;
  corpus.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string k = kind == "mixed" ? cycle[i % cycle.size()] : kind;
    CVec f;
    if (k == "white")
      f = detail::white_signal(rng, L);
    else if (k == "band-limited")
      f = detail::bandlimited_signal(rng, L);
    else if (k == "chirp")
      f = detail::chirp_signal(rng, L);
    else if (k == "sparse-in-frame")
      f = detail::sparse_signal(rng, *sys, options.sparsity);
    else
      f = detail::decay_signal(rng, *sys, options.decay_exponent);
    detail::normalize_l2(f);
    corpus.signals.push_back(std::move(f));
    corpus.kinds.push_back(k);
  }
  return corpus;
}

}  // namespace nsgf
