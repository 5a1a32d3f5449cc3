#pragma once

// Diagonal affine maps and the box coverings they generate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsgf/error.hpp"

namespace nsgf {

using RVec = std::vector<double>;

/// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo < x && x < hi; }
  bool operator==(const Interval&) const = default;
};

/// Open axis-aligned box, one interval per coordinate.
using Box = std::vector<Interval>;

inline double box_volume(const Box& box) {
  double v = 1.0;
  for (const auto& iv : box) v *= iv.width();
  return v;
}

inline Box unit_box(std::size_t d) { return Box(d, Interval{0.0, 1.0}); }

inline Box centered_cube(std::size_t d, double side) {
  return Box(d, Interval{-0.5 * side, 0.5 * side});
}

/// u(xi) = 1 + |xi|_2, the weight generator used by every covering here.
inline double moderate_weight(std::span<const double> xi) {
  double sq = 0.0;
  for (double v : xi) sq += v * v;
  return 1.0 + std::sqrt(sq);
}

/// T(xi) = diag(scale) xi + offset.
class AffineMap {
 public:
  AffineMap(RVec scale, RVec offset)
      : scale_(std::move(scale)), offset_(std::move(offset)) {
    if (scale_.empty() || scale_.size() != offset_.size())
      throw config_error("affine map: scale and offset must have equal nonzero length");
    for (double a : scale_)
      if (!(a > 0.0) || !std::isfinite(a))
        throw config_error("affine map: scale components must be positive and finite");
    for (double c : offset_)
      if (!std::isfinite(c)) throw config_error("affine map: offset must be finite");
  }

  static AffineMap identity(std::size_t d) { return {RVec(d, 1.0), RVec(d, 0.0)}; }

  std::size_t dimension() const { return scale_.size(); }
  const RVec& scale() const { return scale_; }
  const RVec& offset() const { return offset_; }

  /// |T| = |det A|.
  double determinant() const {
    return std::accumulate(scale_.begin(), scale_.end(), 1.0, std::multiplies<>());
  }

  RVec apply(std::span<const double> x) const {
    check_dim(x.size());
    RVec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = scale_[i] * x[i] + offset_[i];
    return y;
  }

  RVec apply_inverse(std::span<const double> y) const {
    check_dim(y.size());
    RVec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = (y[i] - offset_[i]) / scale_[i];
    return x;
  }

  bool operator==(const AffineMap&) const = default;

 private:
  void check_dim(std::size_t n) const {
    if (n != scale_.size())
      throw config_error("affine map: dimension mismatch (map " +
                         std::to_string(scale_.size()) + ", point " +
                         std::to_string(n) + ")");
  }

  RVec scale_;
  RVec offset_;
};

inline RVec apply_affine(const AffineMap& map, std::span<const double> point) {
  return map.apply(point);
}

inline Box image_box(const AffineMap& map, const Box& box) {
  if (box.size() != map.dimension())
    throw config_error("image_box: dimension mismatch");
  Box out(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    out[i].lo = map.scale()[i] * box[i].lo + map.offset()[i];
    out[i].hi = map.scale()[i] * box[i].hi + map.offset()[i];
  }
  return out;
}

namespace detail {

// Do the open intervals a and b + j*period intersect for some integer j?
// period == 0 means no wrap-around.
inline bool open_overlap(const Interval& a, const Interval& b, double period) {
  if (period <= 0.0) return std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
  const double jlo = std::floor((a.lo - b.hi) / period);
  const double jhi = std::ceil((a.hi - b.lo) / period);
  for (double j = jlo; j <= jhi; j += 1.0) {
    const double lo = b.lo + j * period;
    const double hi = b.hi + j * period;
    if (std::max(a.lo, lo) < std::min(a.hi, hi)) return true;
  }
  return false;
}

inline bool contains_mod(const Interval& iv, double x, double period) {
  if (period <= 0.0) return iv.contains(x);
  const double base = x + period * std::ceil((iv.lo - x) / period);
  for (double y = base; y < iv.hi; y += period)
    if (iv.contains(y)) return true;
  return false;
}

inline bool box_contains(const Box& box, std::span<const double> x, double period) {
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!contains_mod(box[i], x[i], period)) return false;
  return true;
}

inline bool boxes_overlap(const Box& a, const Box& b, double period) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!open_overlap(a[i], b[i], period)) return false;
  return true;
}

inline double coord_distance(double x, double y, double period) {
  double d = std::abs(x - y);
  if (period > 0.0) {
    d = std::fmod(d, period);
    d = std::min(d, period - d);
  }
  return d;
}

}  // namespace detail

/// Finite family of boxes Q_T = T(Q) with inner boxes P_T = T(P), anchors
/// xi_T in Q_T and weights omega_T = u(xi_T). A positive `period` places the
/// family on the torus [0, period)^d; containment and overlap are then taken
/// modulo the period.
class Covering {
 public:
  Covering(Box base_box, Box inner_box, std::vector<AffineMap> maps,
           std::vector<RVec> anchors, double period = 0.0)
      : base_(std::move(base_box)),
        inner_(std::move(inner_box)),
        maps_(std::move(maps)),
        anchors_(std::move(anchors)),
        period_(period) {
    const std::size_t d = base_.size();
    if (d == 0) throw config_error("covering: dimension must be positive");
    if (inner_.size() != d) throw config_error("covering: inner box dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) {
      if (!(base_[i].lo < base_[i].hi))
        throw config_error("covering: base box interval is empty");
      if (!(base_[i].lo < inner_[i].lo && inner_[i].lo < inner_[i].hi &&
            inner_[i].hi < base_[i].hi))
        throw config_error("covering: inner box must be compactly contained in base box");
    }
    if (!(period_ >= 0.0) || !std::isfinite(period_))
      throw config_error("covering: period must be finite and non-negative");
    if (anchors_.size() != maps_.size())
      throw config_error("covering: one anchor per map required");
    weights_.reserve(maps_.size());
    for (std::size_t t = 0; t < maps_.size(); ++t) {
      if (maps_[t].dimension() != d || anchors_[t].size() != d)
        throw config_error("covering: map/anchor dimension mismatch at index " +
                           std::to_string(t));
      if (!detail::box_contains(image(t), anchors_[t], period_))
        throw config_error("covering: anchor " + std::to_string(t) +
                           " lies outside its box");
      weights_.push_back(moderate_weight(anchors_[t]));
    }
  }

  std::size_t dimension() const { return base_.size(); }
  std::size_t size() const { return maps_.size(); }
  bool empty() const { return maps_.empty(); }
  double period() const { return period_; }

  const Box& base_box() const { return base_; }
  const Box& inner_box() const { return inner_; }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const std::vector<RVec>& anchors() const { return anchors_; }
  const RVec& weights() const { return weights_; }

  Box image(std::size_t t) const { return image_box(maps_.at(t), base_); }
  Box inner_image(std::size_t t) const { return image_box(maps_.at(t), inner_); }

  /// |Q_T| = |T| |Q|.
  double volume(std::size_t t) const { return maps_.at(t).determinant() * box_volume(base_); }

 private:
  Box base_;
  Box inner_;
  std::vector<AffineMap> maps_;
  std::vector<RVec> anchors_;
  RVec weights_;
  double period_;
};

/// For each T, the sorted indices T' with Q_T' intersecting Q_T (T included).
inline std::vector<std::vector<std::size_t>> neighbor_sets(const Covering& cov) {
  if (cov.empty()) throw config_error("neighbor_sets: empty covering");
  std::vector<Box> boxes;
  boxes.reserve(cov.size());
  for (std::size_t t = 0; t < cov.size(); ++t) boxes.push_back(cov.image(t));
  std::vector<std::vector<std::size_t>> out(cov.size());
  for (std::size_t t = 0; t < cov.size(); ++t) {
    out[t].push_back(t);
    for (std::size_t u = t + 1; u < cov.size(); ++u) {
      if (detail::boxes_overlap(boxes[t], boxes[u], cov.period())) {
        out[t].push_back(u);
        out[u].push_back(t);
      }
    }
  }
  for (auto& s : out) std::sort(s.begin(), s.end());
  return out;
}

/// a_T^+ = sum over T' in T~ of a_T'.
template <typename T>
std::vector<T> plus_operator(std::span<const T> values,
                             const std::vector<std::vector<std::size_t>>& neighbors) {
  if (values.size() != neighbors.size())
    throw config_error("plus_operator: values and neighbor sets differ in length");
  std::vector<T> out(values.size(), T{});
  for (std::size_t t = 0; t < values.size(); ++t)
    for (std::size_t u : neighbors[t]) {
      if (u >= values.size()) throw config_error("plus_operator: neighbor index out of range");
      out[t] += values[u];
    }
  return out;
}

/// Computable upper bound on the operator norm of a -> a^+ on l^q_{omega^s}.
/// Schur's test gives n0 for q >= 1; for q < 1 the q-triangle inequality
/// gives n0^{1/q}. Weight distortion across neighbors contributes
/// max (omega_T / omega_T')^{|s|}.
inline double plus_operator_bound(const Covering& cov, double q, double s) {
  if (!(q > 0.0)) throw config_error("plus_operator_bound: q must be positive");
  const auto nb = neighbor_sets(cov);
  std::size_t n0 = 0;
  double ratio = 1.0;
  for (std::size_t t = 0; t < nb.size(); ++t) {
    n0 = std::max(n0, nb[t].size());
    for (std::size_t u : nb[t])
      ratio = std::max(ratio, std::pow(cov.weights()[t] / cov.weights()[u], std::abs(s)));
  }
  const double n = static_cast<double>(n0);
  return std::max(n, std::pow(n, 1.0 / q)) * ratio;
}

struct ValidationReport {
  bool covers_domain = false;
  std::size_t n0 = 0;
  double K = 0.0;
  double K_star = 0.0;
  double delta = 0.0;
  double gamma_min = 0.0;
  double moderation_constant = 0.0;
  bool origin_box_exceeds_unit = false;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

// max u / min u over a box, exact for u = 1 + |.|_2: the maximum sits at the
// farthest corner, the minimum at the point of the box nearest the origin.
inline double moderation_on_box(const Box& box) {
  double far = 0.0;
  double near = 0.0;
  for (const auto& iv : box) {
    const double m = std::max(std::abs(iv.lo), std::abs(iv.hi));
    far += m * m;
    const double c = (iv.lo > 0.0) ? iv.lo : (iv.hi < 0.0 ? -iv.hi : 0.0);
    near += c * c;
  }
  return (1.0 + std::sqrt(far)) / (1.0 + std::sqrt(near));
}

}  // namespace detail

/// Checks the structured-covering axioms on a finite family. Coverage of the
/// closed `domain` is sampled at the centers of a uniform grid with
/// `cells_per_dim` cells per coordinate; the spacing must not exceed half the
/// narrowest inner-box side.
inline ValidationReport validate_structured(const Covering& cov, const Box& domain,
                                            std::size_t cells_per_dim) {
  if (cov.empty()) throw config_error("validate_structured: empty covering");
  const std::size_t d = cov.dimension();
  if (domain.size() != d) throw config_error("validate_structured: domain dimension mismatch");

  std::vector<Box> qboxes, pboxes;
  for (std::size_t t = 0; t < cov.size(); ++t) {
    qboxes.push_back(cov.image(t));
    pboxes.push_back(cov.inner_image(t));
  }

  double finest = std::numeric_limits<double>::infinity();
  for (const auto& b : pboxes)
    for (const auto& iv : b) finest = std::min(finest, iv.width());
  for (std::size_t i = 0; i < d; ++i) {
    if (!(domain[i].lo < domain[i].hi))
      throw config_error("validate_structured: empty domain");
    const double h = domain[i].width() / static_cast<double>(cells_per_dim);
    if (cells_per_dim == 0 || h > 0.5 * finest)
      throw config_error("validate_structured: grid spacing exceeds half the finest box width");
  }

  ValidationReport rep;
  const double period = cov.period();

  // Coverage by both P_T and Q_T on the sample grid.
  rep.covers_domain = true;
  std::vector<std::size_t> idx(d, 0);
  RVec pt(d);
  bool done = false;
  while (!done && rep.covers_domain) {
    for (std::size_t i = 0; i < d; ++i)
      pt[i] = domain[i].lo + (static_cast<double>(idx[i]) + 0.5) * domain[i].width() /
                                 static_cast<double>(cells_per_dim);
    bool in_p = false, in_q = false;
    for (std::size_t t = 0; t < cov.size() && !(in_p && in_q); ++t) {
      in_p = in_p || detail::box_contains(pboxes[t], pt, period);
      in_q = in_q || detail::box_contains(qboxes[t], pt, period);
    }
    rep.covers_domain = in_p && in_q;
    std::size_t i = 0;
    while (i < d && ++idx[i] == cells_per_dim) idx[i++] = 0;
    done = (i == d);
  }
  if (!rep.covers_domain) rep.violations.push_back("covering: domain not covered");

  const auto nb = neighbor_sets(cov);
  for (std::size_t t = 0; t < cov.size(); ++t) {
    rep.n0 = std::max(rep.n0, nb[t].size());
    const auto& sk = cov.maps()[t].scale();
    for (double a : sk) rep.K_star = std::max(rep.K_star, 1.0 / a);
    for (std::size_t u : nb[t]) {
      const auto& su = cov.maps()[u].scale();
      for (std::size_t i = 0; i < d; ++i) rep.K = std::max(rep.K, sk[i] / su[i]);
    }
  }

  rep.delta = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < cov.size(); ++t)
    for (std::size_t u = t + 1; u < cov.size(); ++u) {
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double c = detail::coord_distance(cov.anchors()[t][i], cov.anchors()[u][i], period);
        sq += c * c;
      }
      rep.delta = std::min(rep.delta, std::sqrt(sq));
    }
  if (!(rep.delta > 0.0)) rep.violations.push_back("separation: anchors not distinct");

  // Growth exponent over boxes whose anchor is off the origin. An anchor at
  // the origin has omega_T = 1, where no exponent helps if |Q_T| > 1; that
  // single box is reported separately rather than as a failed axiom.
  rep.gamma_min = 0.0;
  for (std::size_t t = 0; t < cov.size(); ++t) {
    const double vol = cov.volume(t);
    const double w = cov.weights()[t];
    if (w > 1.0) {
      rep.gamma_min = std::max(rep.gamma_min, std::log(vol) / std::log(w));
    } else if (vol > 1.0) {
      rep.origin_box_exceeds_unit = true;
    }
  }

  rep.moderation_constant = 1.0;
  for (const auto& b : qboxes)
    rep.moderation_constant = std::max(rep.moderation_constant, detail::moderation_on_box(b));

  return rep;
}

/// Same as above with the grid chosen at four samples per finest inner side.
inline ValidationReport validate_structured(const Covering& cov, const Box& domain) {
  if (cov.empty()) throw config_error("validate_structured: empty covering");
  double finest = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < cov.size(); ++t)
    for (const auto& iv : cov.inner_image(t)) finest = std::min(finest, iv.width());
  double widest = 0.0;
  for (const auto& iv : domain) widest = std::max(widest, iv.width());
  const auto cells = static_cast<std::size_t>(std::ceil(4.0 * widest / finest));
  return validate_structured(cov, domain, std::max<std::size_t>(cells, 1));
}

// ---------------------------------------------------------------------------
// Standard families

namespace detail {

inline std::vector<std::vector<long>> lattice_box(std::size_t d, long range) {
  std::vector<std::vector<long>> out;
  std::vector<long> k(d, -range);
  for (;;) {
    out.push_back(k);
    std::size_t i = 0;
    while (i < d && ++k[i] > range) k[i++] = -range;
    if (i == d) break;
  }
  return out;
}

}  // namespace detail

/// Uniform covering by translates of the cube of side r centered at 0, over
/// the lattice points k in [-range, range]^d. Map T_k xi = xi - k; its box is
/// centered at -k, which is the anchor. The inner box has side (1 + r) / 2.
inline Covering modulation_covering(std::size_t d, double r, long range) {
  if (d == 0) throw config_error("modulation_covering: dimension must be positive");
  if (!(r > 1.0)) throw config_error("modulation_covering: side length must exceed 1");
  if (range < 0) throw config_error("modulation_covering: range must be non-negative");
  std::vector<AffineMap> maps;
  std::vector<RVec> anchors;
  for (const auto& k : detail::lattice_box(d, range)) {
    RVec off(d), anchor(d);
    for (std::size_t i = 0; i < d; ++i) {
      off[i] = -static_cast<double>(k[i]);
      anchor[i] = -static_cast<double>(k[i]);
    }
    maps.emplace_back(RVec(d, 1.0), off);
    anchors.push_back(anchor);
  }
  return {centered_cube(d, r), centered_cube(d, 0.5 * (1.0 + r)), std::move(maps),
          std::move(anchors)};
}

/// Dyadic covering: the identity plus T_{j,k} xi = 2^j xi + c_{j,k} for
/// 1 <= j <= j_max and k in {+-1,+-2}^d \ {+-1}^d, where
/// c_{j,k} = 2^j (v(k_1), ..., v(k_d)), v(+-1) = +-1/2, v(+-2) = +-3/2.
/// Base box: cube of side r centered at 0; inner box side (2 + r) / 2.
inline Covering besov_covering(std::size_t d, double r, int j_max) {
  if (d == 0) throw config_error("besov_covering: dimension must be positive");
  if (!(r > 2.0)) throw config_error("besov_covering: side length must exceed 2");
  if (j_max < 1) throw config_error("besov_covering: j_max must be at least 1");
  auto v = [](long x) { return (x > 0 ? 1.0 : -1.0) * (std::abs(x) == 1 ? 0.5 : 1.5); };

  std::vector<std::vector<long>> E;
  const long digits[4] = {-2, -1, 1, 2};
  std::vector<std::size_t> pos(d, 0);
  for (;;) {
    std::vector<long> k(d);
    bool all_small = true;
    for (std::size_t i = 0; i < d; ++i) {
      k[i] = digits[pos[i]];
      all_small = all_small && std::abs(k[i]) == 1;
    }
    if (!all_small) E.push_back(k);
    std::size_t i = 0;
    while (i < d && ++pos[i] == 4) pos[i++] = 0;
    if (i == d) break;
  }

  std::vector<AffineMap> maps{AffineMap::identity(d)};
  std::vector<RVec> anchors{RVec(d, 0.0)};
  for (int j = 1; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, j);
    for (const auto& k : E) {
      RVec c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = scale * v(k[i]);
      maps.emplace_back(RVec(d, scale), c);
      anchors.push_back(c);
    }
  }
  return {centered_cube(d, r), centered_cube(d, 0.5 * (2.0 + r)), std::move(maps),
          std::move(anchors)};
}

/// Frequency channel of a band-limited system: window support [b, b + 1/a]^d.
struct ChannelGeometry {
  RVec b;
  double a = 1.0;
};

namespace detail {

inline Covering nsgf_covering_unchecked(const std::vector<ChannelGeometry>& channels,
                                        double c_star, double period) {
  if (channels.empty()) throw config_error("covering_from_nsgf: no channels");
  if (!(c_star > 0.0)) throw config_error("covering_from_nsgf: c_star must be positive");
  const std::size_t d = channels.front().b.size();
  std::vector<AffineMap> maps;
  std::vector<RVec> anchors;
  for (const auto& ch : channels) {
    if (!(ch.a > 0.0)) throw config_error("covering_from_nsgf: time steps must be positive");
    if (ch.b.size() != d) throw config_error("covering_from_nsgf: inconsistent dimension");
    const double eps = c_star / ch.a;
    RVec off(d);
    for (std::size_t i = 0; i < d; ++i) off[i] = ch.b[i] - eps;
    maps.emplace_back(RVec(d, 2.0 * eps + 1.0 / ch.a), off);
    anchors.push_back(ch.b);
  }
  const double lo = c_star / (2.0 * c_star + 1.0);
  const double hi = (c_star + 1.0) / (2.0 * c_star + 1.0);
  return {unit_box(d), Box(d, Interval{lo, hi}), std::move(maps), std::move(anchors), period};
}

}  // namespace detail

/// Covering compatible with a band-limited system: Q = (0,1)^d and
/// T_m = (2 eps_m + 1/a_m) I + (b_m - eps_m), eps_m = c_star / a_m, so that
/// Q_{T_m} = (-eps_m, 1/a_m + eps_m)^d + b_m. The inner box
/// P = (c/(2c+1), (c+1)/(2c+1))^d maps onto (0, 1/a_m)^d + b_m.
/// Offsets must be pairwise distinct (modulo `period` when positive).
inline Covering covering_from_nsgf(const std::vector<ChannelGeometry>& channels,
                                   double c_star, double period = 0.0) {
  for (std::size_t m = 0; m < channels.size(); ++m)
    for (std::size_t u = 0; u < m; ++u) {
      if (channels[u].b.size() != channels[m].b.size()) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < channels[m].b.size(); ++i)
        dist = std::max(dist, detail::coord_distance(channels[m].b[i], channels[u].b[i], period));
      if (dist == 0.0)
        throw config_error("covering_from_nsgf: duplicate frequency offset at channel " +
                           std::to_string(m));
    }
  return detail::nsgf_covering_unchecked(channels, c_star, period);
}

}  // namespace nsgf
