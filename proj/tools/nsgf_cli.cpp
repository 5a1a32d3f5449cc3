// nsgf: command-line front end for painless nonstationary Gabor frames.
//
// Exit codes: 0 success, 2 config error, 3 frame-condition failure, 4 I/O error.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nsgf/nsgf.hpp"

namespace {

using nsgf::Json;
namespace io = nsgf::io;

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kFrame = 3, kIo = 4 };

struct Options {
  std::string config;
  std::string signal;
  std::string coeffs;
  std::string input;
  std::string out;
  std::string json_out;
  std::string csv_out;
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  double tau = 1.0;
  std::string ns = "2,4,8,16,32,64,128,256,512";
  std::size_t corpus_size = 50;
  std::string corpus_kind = "mixed";
  std::uint64_t seed = 1;
  std::string windows = "original";
};

int report_error(const char* kind, const std::string& message, int code) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_text_file(path, text);
}

nsgf::WindowKind window_kind(const std::string& name) {
  if (name == "original") return nsgf::WindowKind::original;
  if (name == "dual") return nsgf::WindowKind::dual;
  if (name == "tight") return nsgf::WindowKind::tight;
  throw nsgf::config_error("--windows must be original, dual or tight");
}

std::vector<std::size_t> parse_ns(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& item : io::split(list, ',')) {
    const double v = io::parse_double(item, "--N");
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw nsgf::config_error("--N entries must be non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw nsgf::config_error("--N list is empty");
  return out;
}

struct Loaded {
  io::FrameConfig config;
  nsgf::System sys;
};

Loaded load(const Options& o) {
  if (o.config.empty()) throw nsgf::config_error("--config is required");
  auto cfg = io::load_config(o.config);
  spdlog::debug("config {}: L = {}, {} channels", o.config, cfg.signal_length, cfg.channels.size());
  return {cfg, io::build_system(cfg)};
}

nsgf::Bapu torus_bapu(const nsgf::System& sys, const nsgf::Covering& cov) {
  return nsgf::build_bapu(cov, nsgf::bump_for(cov), nsgf::FrequencyGrid::dft(sys.length()));
}

nsgf::CVec load_signal(const Options& o, const nsgf::System& sys) {
  if (o.signal.empty()) throw nsgf::config_error("--signal is required");
  auto f = io::read_signal(o.signal);
  if (f.size() != sys.length())
    throw nsgf::config_error("signal has " + std::to_string(f.size()) + " samples, config expects " +
                             std::to_string(sys.length()));
  return f;
}

int cmd_verify(const Options& o) {
  auto [cfg, sys] = load(o);
  const auto cov = sys.covering();
  const auto painless = nsgf::validate_painless(sys);
  const auto bapu = torus_bapu(sys, cov);
  Json j;
  j["signal_length"] = sys.length();
  j["channels"] = sys.size();
  j["coefficients"] = sys.coefficient_count();
  j["frame_bounds"] = {{"A", sys.lower_bound()}, {"B", sys.upper_bound()}};
  j["painless"] = io::to_json(painless);
  j["partition"] = {{"defect", nsgf::partition_defect(bapu)}, {"max_overlap", nsgf::max_overlap(bapu)}};
  j["covering"] = io::to_json(cov);
  emit(o.out, j.dump(2) + "\n");
  if (!painless.ok()) {
    std::string msg = "painless conditions violated:";
    for (const auto& v : painless.violations) msg += " " + v + ";";
    return report_error("frame", msg, kFrame);
  }
  return kOk;
}

int cmd_analyze(const Options& o) {
  auto [cfg, sys] = load(o);
  const auto f = load_signal(o, sys);
  const auto c = nsgf::analyze(sys, f, window_kind(o.windows));
  emit(o.out, io::coefficients_to_json(sys, c).dump(2) + "\n");
  return kOk;
}

int cmd_synthesize(const Options& o) {
  auto [cfg, sys] = load(o);
  if (o.coeffs.empty()) throw nsgf::config_error("--coeffs is required");
  const auto c = io::coefficients_from_json(io::parse_json(io::read_text_file(o.coeffs), o.coeffs), &sys);
  const std::string kind = o.windows == "original" ? "dual" : o.windows;
  const auto y = nsgf::synthesize(sys, c, window_kind(kind));
  if (!o.out.empty()) io::write_text_file(o.out, io::signal_to_csv(y));
  if (!o.signal.empty()) {
    const auto f = load_signal(o, sys);
    double err = 0.0, ref = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) {
      err = std::max(err, std::abs(f[x] - y[x]));
      ref = std::max(ref, std::abs(f[x]));
    }
    Json j;
    j["max_relative_error"] = ref > 0.0 ? err / ref : err;
    std::cout << j.dump() << '\n';
  } else if (o.out.empty()) {
    std::cout << io::signal_to_csv(y);
  }
  return kOk;
}

int cmd_dsnorm(const Options& o) {
  auto [cfg, sys] = load(o);
  const auto f = load_signal(o, sys);
  const nsgf::NormParams params{o.p, o.q, o.s};
  params.check();
  const auto cov = sys.covering();
  const auto bapu = torus_bapu(sys, cov);
  const double ds = nsgf::ds_norm(f, bapu, params);
  const double cn = nsgf::coeff_norm(nsgf::lp_normalized_coeffs(nsgf::analyze(sys, f), cov, o.p), cov, params);
  Json j;
  j["params"] = io::params_json(params);
  j["ds_norm"] = ds;
  j["coeff_norm"] = cn;
  j["ratio"] = io::number(ds > 0.0 ? cn / ds : 0.0);
  emit(o.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_equiv(const Options& o) {
  auto [cfg, sys] = load(o);
  const nsgf::NormParams params{o.p, o.q, o.s};
  params.check();
  const auto cov = sys.covering();
  const auto bapu = torus_bapu(sys, cov);
  const auto corpus = nsgf::generate_corpus(o.corpus_kind, o.corpus_size, sys.length(), o.seed, &sys);
  const std::string desc = o.corpus_kind + ", " + std::to_string(o.corpus_size) + " signals, seed " +
                           std::to_string(o.seed);
  const auto rep = nsgf::equivalence_report(corpus.signals, sys, cov, bapu, params, desc);
  if (rep.skipped > 0) spdlog::warn("{} zero signals skipped", rep.skipped);
  emit(o.out, io::to_json(rep).dump(2) + "\n");
  if (!o.csv_out.empty()) io::write_text_file(o.csv_out, io::ratio_csv(rep));
  return kOk;
}

int cmd_sweep(const Options& o) {
  auto [cfg, sys] = load(o);
  const auto cov = sys.covering();
  const auto bapu = torus_bapu(sys, cov);
  nsgf::CVec f;
  if (!o.signal.empty()) {
    f = load_signal(o, sys);
  } else {
    spdlog::info("no --signal; using a prescribed-decay signal with seed {}", o.seed);
    nsgf::CorpusOptions opts;
    opts.decay_exponent = 1.0 / o.tau + 0.05;
    f = nsgf::generate_corpus("prescribed-decay", 1, sys.length(), o.seed, &sys, opts).signals.front();
  }
  const auto ns = parse_ns(o.ns);
  const auto res = nsgf::error_sweep(sys, cov, bapu, f, ns, o.tau, o.p, o.s);
  emit(o.out, io::sweep_csv(res));
  const std::string json = io::to_json(res).dump(2) + "\n";
  if (!o.json_out.empty())
    io::write_text_file(o.json_out, json);
  else if (!o.out.empty() && o.out != "-")
    std::cout << json;
  return kOk;
}

int cmd_plot(const Options& o) {
  if (o.input.empty()) throw nsgf::config_error("--input (sweep CSV) is required");
  const auto table = io::sweep_table_from_csv(io::read_text_file(o.input));
  if (!(o.tau > 0.0 && o.p > 0.0)) throw nsgf::config_error("--tau and --p must be positive");
  const double alpha = 1.0 / o.tau - 1.0 / o.p;
  emit(o.out, nsgf::svg::loglog_plot(table.ns, table.errors, alpha));
  return kOk;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("nsgf");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("NSGF_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Painless nonstationary Gabor frames and decomposition-space norms"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* c) { c->add_option("--config", o.config, "frame config JSON")->required(); };
  auto add_norm = [&](CLI::App* c) {
    c->add_option("--p", o.p, "integrability exponent");
    c->add_option("--q", o.q, "summability exponent");
    c->add_option("--s", o.s, "weight exponent");
  };

  auto* verify = app.add_subcommand("verify", "covering, painless, partition and frame-bound report");
  add_config(verify);
  verify->add_option("--out", o.out, "report path (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "signal CSV to coefficient JSON");
  add_config(analyze);
  analyze->add_option("--signal", o.signal, "signal CSV")->required();
  analyze->add_option("--out", o.out, "coefficient JSON path (default stdout)");
  analyze->add_option("--windows", o.windows, "original|dual|tight (default original)");

  auto* synth = app.add_subcommand("synthesize", "coefficient JSON to signal CSV");
  add_config(synth);
  synth->add_option("--coeffs", o.coeffs, "coefficient JSON")->required();
  synth->add_option("--signal", o.signal, "reference signal; prints the max relative error");
  synth->add_option("--out", o.out, "signal CSV path");
  synth->add_option("--windows", o.windows, "original|dual|tight (default dual)");

  auto* dsnorm = app.add_subcommand("dsnorm", "decomposition-space and coefficient norms");
  add_config(dsnorm);
  dsnorm->add_option("--signal", o.signal, "signal CSV")->required();
  dsnorm->add_option("--out", o.out, "JSON path (default stdout)");
  add_norm(dsnorm);

  auto* equiv = app.add_subcommand("equiv", "norm-equivalence report over a seeded corpus");
  add_config(equiv);
  add_norm(equiv);
  equiv->add_option("--corpus-size", o.corpus_size, "number of signals");
  equiv->add_option("--corpus-kind", o.corpus_kind, "white|band-limited|chirp|sparse-in-frame|prescribed-decay|mixed");
  equiv->add_option("--seed", o.seed, "corpus seed");
  equiv->add_option("--out", o.out, "report JSON path (default stdout)");
  equiv->add_option("--csv", o.csv_out, "per-signal ratio CSV path");

  auto* sweep = app.add_subcommand("sweep", "N-term approximation error sweep");
  add_config(sweep);
  sweep->add_option("--signal", o.signal, "signal CSV (default: seeded prescribed-decay signal)");
  sweep->add_option("--N", o.ns, "comma-separated increasing N list");
  sweep->add_option("--tau", o.tau, "smoothness exponent tau < p");
  sweep->add_option("--p", o.p, "error exponent");
  sweep->add_option("--s", o.s, "weight exponent");
  sweep->add_option("--seed", o.seed, "seed for the default signal");
  sweep->add_option("--out", o.out, "CSV path (default stdout)");
  sweep->add_option("--json", o.json_out, "JSON path");

  auto* plot = app.add_subcommand("plot", "log-log SVG of a sweep CSV");
  plot->add_option("--input", o.input, "sweep CSV")->required();
  plot->add_option("--tau", o.tau, "tau for the reference slope");
  plot->add_option("--p", o.p, "p for the reference slope");
  plot->add_option("--out", o.out, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", e.what(), kConfig);
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*analyze) return cmd_analyze(o);
    if (*synth) return cmd_synthesize(o);
    if (*dsnorm) return cmd_dsnorm(o);
    if (*equiv) return cmd_equiv(o);
    if (*sweep) return cmd_sweep(o);
    if (*plot) return cmd_plot(o);
  } catch (const nsgf::Error& e) {
    switch (e.kind()) {
      case nsgf::ErrorKind::frame: return report_error("frame", e.what(), kFrame);
      case nsgf::ErrorKind::io: return report_error("io", e.what(), kIo);
      default: return report_error("config", e.what(), kConfig);
    }
  } catch (const nlohmann::json::exception& e) {
    return report_error("config", e.what(), kConfig);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kInternal);
  }
  return kInternal;
}
