#pragma once

// JSON and CSV formats for configs, coefficients, coverings and reports.
// Non-finite numbers are written as the strings "inf", "-inf" and "nan".

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsgf/approx.hpp"
#include "nsgf/bapu.hpp"
#include "nsgf/covering.hpp"
#include "nsgf/error.hpp"
#include "nsgf/frame.hpp"
#include "nsgf/spaces.hpp"

namespace nsgf {

// nlohmann::ordered_json keeps insertion order, which gives stable output.
using Json = nlohmann::ordered_json;

namespace io {

// ---------------------------------------------------------------------------
// Files and numbers

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("error reading '" + path + "'");
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw io_error("error writing '" + path + "'");
}

inline Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double to_double(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw config_error(what + ": expected a number");
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw config_error(where + ": missing field '" + key + "'");
  return *it;
}

inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(where + ": malformed JSON (" + e.what() + ")");
  }
}

inline Json vec_json(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline RVec vec_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + ": expected an array");
  RVec out;
  for (const auto& x : j) out.push_back(to_double(x, where));
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Frame config

struct FrameConfig {
  std::size_t signal_length = 0;
  double c_star = 0.25;
  std::vector<ChannelSpec> channels;
  Prototype prototype;

  bool operator==(const FrameConfig& o) const {
    if (signal_length != o.signal_length || c_star != o.c_star ||
        prototype.ramp_width != o.prototype.ramp_width || channels.size() != o.channels.size())
      return false;
    for (std::size_t i = 0; i < channels.size(); ++i)
      if (channels[i].b != o.channels[i].b || channels[i].a != o.channels[i].a) return false;
    return true;
  }
};

inline Json to_json(const FrameConfig& c) {
  Json j;
  j["signal_length"] = c.signal_length;
  j["c_star"] = c.c_star;
  Json ch = Json::array();
  for (const auto& s : c.channels) ch.push_back({{"b", s.b}, {"a", s.a}});
  j["channels"] = ch;
  j["prototype"] = {{"ramp_width", c.prototype.ramp_width}};
  return j;
}

inline FrameConfig config_from_json(const Json& j) {
  const std::string where = "config";
  FrameConfig c;
  const auto& len = field(j, "signal_length", where);
  if (!len.is_number_integer() || len.get<long long>() <= 0)
    throw config_error("config: signal_length must be a positive integer");
  c.signal_length = len.get<std::size_t>();
  if (j.contains("c_star")) c.c_star = to_double(j["c_star"], "config.c_star");
  const auto& chs = field(j, "channels", where);
  if (!chs.is_array() || chs.empty()) throw config_error("config: channels must be a non-empty array");
  for (const auto& ch : chs)
    c.channels.push_back({to_double(field(ch, "b", "config.channels"), "config.channels.b"),
                          to_double(field(ch, "a", "config.channels"), "config.channels.a")});
  if (j.contains("prototype"))
    c.prototype.ramp_width =
        to_double(field(j["prototype"], "ramp_width", "config.prototype"), "config.prototype.ramp_width");
  return c;
}

inline FrameConfig load_config(const std::string& path) {
  return config_from_json(parse_json(read_text_file(path), path));
}

inline System build_system(const FrameConfig& c) {
  return make_windows(c.signal_length, c.channels, c.c_star, c.prototype);
}

// ---------------------------------------------------------------------------
// Coefficients

inline Json coefficients_to_json(const System& sys, const CoefficientSet& coeffs) {
  if (coeffs.entries.size() != sys.size()) throw config_error("coefficients: channel count mismatch");
  Json chs = Json::array();
  for (std::size_t m = 0; m < sys.size(); ++m) {
    const auto& ch = sys.channels()[m];
    Json values = Json::array();
    for (const auto& v : coeffs.entries[m]) values.push_back({v.real(), v.imag()});
    Json entry;
    entry["b"] = ch.b;
    entry["a"] = ch.a;
    entry["n_shifts"] = ch.n_shifts;
    entry["coeffs"] = values;
    chs.push_back(entry);
  }
  Json j;
  j["channels"] = chs;
  return j;
}

/// Parses a coefficient document; when `sys` is given the channel layout must
/// match it.
inline CoefficientSet coefficients_from_json(const Json& j, const System* sys = nullptr) {
  const auto& chs = field(j, "channels", "coefficients");
  if (!chs.is_array()) throw config_error("coefficients: channels must be an array");
  if (sys != nullptr && chs.size() != sys->size())
    throw config_error("coefficients: expected " + std::to_string(sys->size()) + " channels, got " +
                       std::to_string(chs.size()));
  CoefficientSet out;
  for (std::size_t m = 0; m < chs.size(); ++m) {
    const auto& ch = chs[m];
    const auto& values = field(ch, "coeffs", "coefficients.channels");
    if (!values.is_array()) throw config_error("coefficients: coeffs must be an array");
    CVec row;
    for (const auto& v : values) {
      if (!v.is_array() || v.size() != 2)
        throw config_error("coefficients: each coefficient is a [re, im] pair");
      row.emplace_back(to_double(v[0], "coefficients"), to_double(v[1], "coefficients"));
    }
    if (ch.contains("n_shifts") && ch["n_shifts"].get<std::size_t>() != row.size())
      throw config_error("coefficients: channel " + std::to_string(m) + " n_shifts disagrees with coeffs");
    if (sys != nullptr) {
      const auto& sc = sys->channels()[m];
      if (row.size() != sc.n_shifts)
        throw config_error("coefficients: channel " + std::to_string(m) + " expects " +
                           std::to_string(sc.n_shifts) + " coefficients");
      if (ch.contains("a") && std::abs(to_double(ch["a"], "coefficients.a") - sc.a) > 1e-12)
        throw config_error("coefficients: channel " + std::to_string(m) + " time step differs from config");
      if (ch.contains("b") &&
          detail::coord_distance(to_double(ch["b"], "coefficients.b"), sc.b, 1.0) > 1e-12)
        throw config_error("coefficients: channel " + std::to_string(m) + " offset differs from config");
    }
    out.entries.push_back(std::move(row));
    out.channel_to_T.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverings

inline Json box_json(const Box& box) {
  Json a = Json::array();
  for (const auto& iv : box) a.push_back({number(iv.lo), number(iv.hi)});
  return a;
}

inline Box box_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + ": expected an array of intervals");
  Box box;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) throw config_error(where + ": interval must be [lo, hi]");
    box.push_back({to_double(iv[0], where), to_double(iv[1], where)});
  }
  return box;
}

inline Json to_json(const Covering& cov) {
  Json j;
  j["dimension"] = cov.dimension();
  j["base_box"] = box_json(cov.base_box());
  j["inner_box"] = box_json(cov.inner_box());
  Json maps = Json::array();
  for (const auto& m : cov.maps()) maps.push_back({{"scale", vec_json(m.scale())}, {"offset", vec_json(m.offset())}});
  j["maps"] = maps;
  Json anchors = Json::array();
  for (const auto& a : cov.anchors()) anchors.push_back(vec_json(a));
  j["anchors"] = anchors;
  j["weights"] = vec_json(cov.weights());
  if (cov.period() > 0.0) j["period"] = cov.period();
  return j;
}

inline Covering covering_from_json(const Json& j) {
  const std::string where = "covering";
  const auto dim = field(j, "dimension", where).get<std::size_t>();
  Box base = box_from(field(j, "base_box", where), "covering.base_box");
  Box inner = box_from(field(j, "inner_box", where), "covering.inner_box");
  if (base.size() != dim) throw config_error("covering: dimension disagrees with base_box");
  std::vector<AffineMap> maps;
  for (const auto& m : field(j, "maps", where))
    maps.emplace_back(vec_from(field(m, "scale", "covering.maps"), "covering.maps.scale"),
                      vec_from(field(m, "offset", "covering.maps"), "covering.maps.offset"));
  std::vector<RVec> anchors;
  for (const auto& a : field(j, "anchors", where)) anchors.push_back(vec_from(a, "covering.anchors"));
  const double period = j.contains("period") ? to_double(j["period"], "covering.period") : 0.0;
  return {std::move(base), std::move(inner), std::move(maps), std::move(anchors), period};
}

// ---------------------------------------------------------------------------
// Reports

inline Json string_array(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

inline Json to_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["covers_domain"] = r.covers_domain;
  j["n0"] = r.n0;
  j["K"] = number(r.K);
  j["K_star"] = number(r.K_star);
  j["delta"] = number(r.delta);
  j["gamma_min"] = number(r.gamma_min);
  j["moderation_constant"] = number(r.moderation_constant);
  j["origin_box_exceeds_unit"] = r.origin_box_exceeds_unit;
  j["violations"] = string_array(r.violations);
  return j;
}

inline ValidationReport validation_from_json(const Json& j) {
  const std::string w = "validation report";
  ValidationReport r;
  r.covers_domain = field(j, "covers_domain", w).get<bool>();
  r.n0 = field(j, "n0", w).get<std::size_t>();
  r.K = to_double(field(j, "K", w), w);
  r.K_star = to_double(field(j, "K_star", w), w);
  r.delta = to_double(field(j, "delta", w), w);
  r.gamma_min = to_double(field(j, "gamma_min", w), w);
  r.moderation_constant = to_double(field(j, "moderation_constant", w), w);
  r.origin_box_exceeds_unit = field(j, "origin_box_exceeds_unit", w).get<bool>();
  r.violations = field(j, "violations", w).get<std::vector<std::string>>();
  return r;
}

inline Json to_json(const PainlessReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["covering"] = to_json(r.covering);
  j["max_a"] = number(r.max_a);
  j["overlap_ratio_min"] = number(r.overlap_ratio_min);
  j["overlap_ratio_max"] = number(r.overlap_ratio_max);
  Json p = Json::array();
  for (bool b : r.channel_painless) p.push_back(b);
  j["channel_painless"] = p;
  j["c_beta0"] = number(r.c_beta0);
  j["c_beta1"] = number(r.c_beta1);
  j["violations"] = string_array(r.violations);
  return j;
}

inline PainlessReport painless_from_json(const Json& j) {
  const std::string w = "painless report";
  PainlessReport r;
  r.covering = validation_from_json(field(j, "covering", w));
  r.max_a = to_double(field(j, "max_a", w), w);
  r.overlap_ratio_min = to_double(field(j, "overlap_ratio_min", w), w);
  r.overlap_ratio_max = to_double(field(j, "overlap_ratio_max", w), w);
  r.channel_painless = field(j, "channel_painless", w).get<std::vector<bool>>();
  r.c_beta0 = to_double(field(j, "c_beta0", w), w);
  r.c_beta1 = to_double(field(j, "c_beta1", w), w);
  r.violations = field(j, "violations", w).get<std::vector<std::string>>();
  return r;
}

inline Json params_json(const NormParams& p) {
  return {{"p", number(p.p)}, {"q", number(p.q)}, {"s", number(p.s)}};
}

inline Json to_json(const EquivalenceReport& r) {
  Json j;
  j["params"] = params_json(r.params);
  j["corpus"] = r.corpus;
  j["signals"] = r.ratios.size();
  j["skipped"] = r.skipped;
  j["C1_hat"] = number(r.c1_hat);
  j["C2_hat"] = number(r.c2_hat);
  j["spread"] = number(r.spread());
  j["ratios"] = vec_json(r.ratios);
  return j;
}

inline EquivalenceReport equivalence_from_json(const Json& j, const RVec& ds = {},
                                               const RVec& cn = {}) {
  const std::string w = "equivalence report";
  EquivalenceReport r;
  const auto& p = field(j, "params", w);
  r.params = {to_double(field(p, "p", w), w), to_double(field(p, "q", w), w),
              to_double(field(p, "s", w), w)};
  r.corpus = field(j, "corpus", w).get<std::string>();
  r.skipped = field(j, "skipped", w).get<std::size_t>();
  r.c1_hat = to_double(field(j, "C1_hat", w), w);
  r.c2_hat = to_double(field(j, "C2_hat", w), w);
  r.ratios = vec_from(field(j, "ratios", w), w);
  r.ds_norms = ds;
  r.coeff_norms = cn;
  return r;
}

inline std::string ratio_csv(const EquivalenceReport& r) {
  std::string out = "signal_id,ds_norm,coeff_norm,ratio\n";
  for (std::size_t i = 0; i < r.ratios.size(); ++i)
    out += std::to_string(i) + "," + format_double(r.ds_norms[i]) + "," +
           format_double(r.coeff_norms[i]) + "," + format_double(r.ratios[i]) + "\n";
  return out;
}

inline Json to_json(const LemmaCheckReport& r) {
  Json nik = Json::array();
  for (std::size_t i = 0; i < r.nikolskii_pairs.size(); ++i)
    nik.push_back({{"p", number(r.nikolskii_pairs[i].first)},
                   {"q", number(r.nikolskii_pairs[i].second)},
                   {"max", number(r.nikolskii_max[i])},
                   {"spread", number(r.nikolskii_spread[i])},
                   {"per_channel", vec_json(r.nikolskii[i])}});
  Json mul = Json::array();
  for (std::size_t i = 0; i < r.multiplier_p.size(); ++i)
    mul.push_back({{"p", number(r.multiplier_p[i])},
                   {"max", number(r.multiplier_max[i])},
                   {"per_T", vec_json(r.multiplier[i])}});
  Json j;
  j["nikolskii"] = nik;
  j["multiplier"] = mul;
  return j;
}

inline Json to_json(const SweepResult& r) {
  Json j;
  j["tau"] = number(r.tau);
  j["p"] = number(r.p);
  j["s"] = number(r.s);
  j["alpha"] = number(r.alpha);
  j["signal_norm_tau"] = number(r.signal_norm);
  j["fitted_slope"] = number(r.fitted_slope);
  j["fit_range"] = {r.fit_first, r.fit_last};
  Json ns = Json::array();
  for (auto n : r.ns) ns.push_back(n);
  j["Ns"] = ns;
  j["errors"] = vec_json(r.errors);
  return j;
}

inline SweepResult sweep_from_json(const Json& j) {
  const std::string w = "sweep";
  SweepResult r;
  r.tau = to_double(field(j, "tau", w), w);
  r.p = to_double(field(j, "p", w), w);
  r.s = to_double(field(j, "s", w), w);
  r.alpha = to_double(field(j, "alpha", w), w);
  r.signal_norm = to_double(field(j, "signal_norm_tau", w), w);
  r.fitted_slope = to_double(field(j, "fitted_slope", w), w);
  const auto& range = field(j, "fit_range", w);
  r.fit_first = range.at(0).get<std::size_t>();
  r.fit_last = range.at(1).get<std::size_t>();
  r.ns = field(j, "Ns", w).get<std::vector<std::size_t>>();
  r.errors = vec_from(field(j, "errors", w), w);
  return r;
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = "N,error,N_pow_alpha_times_error\n";
  for (std::size_t i = 0; i < r.ns.size(); ++i)
    out += std::to_string(r.ns[i]) + "," + format_double(r.errors[i]) + "," +
           format_double(std::pow(static_cast<double>(r.ns[i]), r.alpha) * r.errors[i]) + "\n";
  return out;
}

struct SweepTable {
  RVec ns;
  RVec errors;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& raw, const std::string& where) {
  std::string s = raw;
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  s = s.substr(i);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error(where + ": cannot parse number '" + raw + "'");
  }
}

/// Reads the N and error columns of a sweep CSV.
inline SweepTable sweep_table_from_csv(const std::string& text) {
  SweepTable t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      if (line.rfind("N,", 0) == 0) continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() < 2) throw config_error("sweep CSV line " + std::to_string(lineno) + ": expected N,error");
    t.ns.push_back(parse_double(cols[0], "sweep CSV"));
    t.errors.push_back(parse_double(cols[1], "sweep CSV"));
  }
  if (t.ns.empty()) throw config_error("sweep CSV: no data rows");
  return t;
}

// ---------------------------------------------------------------------------
// Signals and partitions

/// One sample per line: "re" or "re,im". Blank lines are ignored.
inline CVec signal_from_csv(const std::string& text) {
  CVec out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cols = split(line, ',');
    const std::string where = "signal line " + std::to_string(lineno);
    if (cols.size() == 1)
      out.emplace_back(parse_double(cols[0], where), 0.0);
    else if (cols.size() == 2)
      out.emplace_back(parse_double(cols[0], where), parse_double(cols[1], where));
    else
      throw config_error(where + ": expected one or two columns");
  }
  return out;
}

inline CVec read_signal(const std::string& path) { return signal_from_csv(read_text_file(path)); }

/// Two columns unless every imaginary part is exactly zero.
inline std::string signal_to_csv(std::span<const cd> f) {
  bool real = true;
  for (const auto& v : f) real = real && v.imag() == 0.0;
  std::string out;
  for (const auto& v : f) {
    out += format_double(v.real());
    if (!real) out += "," + format_double(v.imag());
    out += "\n";
  }
  return out;
}

inline std::string bapu_csv(const Bapu& bapu) {
  std::string out = "bin,xi,T_index,psi_value\n";
  for (std::size_t k = 0; k < bapu.grid().bins; ++k)
    for (std::size_t t = 0; t < bapu.size(); ++t) {
      const double v = bapu.psi(t)[k];
      if (v == 0.0) continue;
      out += std::to_string(k) + "," + format_double(bapu.grid().point(k)) + "," + std::to_string(t) +
             "," + format_double(v) + "\n";
    }
  return out;
}

}  // namespace io
}  // namespace nsgf
