#pragma once

// Log-log line chart of an N-term error sweep, written as plain SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>

#include "nsgf/error.hpp"

namespace nsgf::svg {

struct PlotLayout {
  double width = 640.0;
  double height = 480.0;
  double margin_left = 70.0;
  double margin_right = 20.0;
  double margin_top = 30.0;
  double margin_bottom = 50.0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v + 0.0);  // no "-0.000"
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Data as a polyline, plus a dashed reference line of slope -alpha through the
/// first point. Axes span whole decades; the plot group records them in
/// data-x-decades / data-y-decades so the pixel geometry can be inverted.
inline std::string loglog_plot(std::span<const double> ns, std::span<const double> errors, double alpha,
                               const std::string& title = "N-term approximation error",
                               const PlotLayout& layout = {}) {
  if (ns.size() != errors.size() || ns.empty()) throw config_error("plot: need matching, non-empty N and error columns");
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (!(ns[i] > 0.0) || !(errors[i] > 0.0))
      throw config_error("plot: log-log axes need positive N and error values");

  const auto [nmin, nmax] = std::minmax_element(ns.begin(), ns.end());
  const auto [emin, emax] = std::minmax_element(errors.begin(), errors.end());
  const double x0 = std::floor(std::log10(*nmin));
  const double x1 = std::max(x0 + 1.0, std::ceil(std::log10(*nmax)));
  const double y0 = std::floor(std::log10(*emin));
  const double y1 = std::max(y0 + 1.0, std::ceil(std::log10(*emax)));

  const double pw = layout.width - layout.margin_left - layout.margin_right;
  const double ph = layout.height - layout.margin_top - layout.margin_bottom;
  auto px = [&](double n) { return layout.margin_left + (std::log10(n) - x0) / (x1 - x0) * pw; };
  auto py = [&](double e) { return layout.margin_top + (y1 - std::log10(e)) / (y1 - y0) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(layout.width) + "\" height=\"" +
       detail::fmt(layout.height) + "\" viewBox=\"0 0 " + detail::fmt(layout.width) + " " +
       detail::fmt(layout.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + detail::fmt(layout.width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
       detail::escape(title) + "</text>\n";
  s += "<g class=\"plot\" data-x-decades=\"" + detail::fmt(x0) + " " + detail::fmt(x1) +
       "\" data-y-decades=\"" + detail::fmt(y0) + " " + detail::fmt(y1) + "\">\n";

  // Frame and decade grid.
  s += "<rect x=\"" + detail::fmt(layout.margin_left) + "\" y=\"" + detail::fmt(layout.margin_top) +
       "\" width=\"" + detail::fmt(pw) + "\" height=\"" + detail::fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0) {
    const double x = px(std::pow(10.0, d));
    s += "<line class=\"grid\" x1=\"" + detail::fmt(x) + "\" y1=\"" + detail::fmt(layout.margin_top) +
         "\" x2=\"" + detail::fmt(x) + "\" y2=\"" + detail::fmt(layout.margin_top + ph) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + detail::fmt(x) + "\" y=\"" + detail::fmt(layout.margin_top + ph + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">1e" + std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1.0) {
    const double y = py(std::pow(10.0, d));
    s += "<line class=\"grid\" x1=\"" + detail::fmt(layout.margin_left) + "\" y1=\"" + detail::fmt(y) +
         "\" x2=\"" + detail::fmt(layout.margin_left + pw) + "\" y2=\"" + detail::fmt(y) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + detail::fmt(layout.margin_left - 6) + "\" y=\"" + detail::fmt(y + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">1e" + std::to_string(static_cast<int>(d)) + "</text>\n";
  }
  s += "<text x=\"" + detail::fmt(layout.margin_left + pw / 2) + "\" y=\"" +
       detail::fmt(layout.height - 10) + "\" text-anchor=\"middle\" font-size=\"12\">N</text>\n";
  s += "<text x=\"16\" y=\"" + detail::fmt(layout.margin_top + ph / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
       detail::fmt(layout.margin_top + ph / 2) + ")\">error</text>\n";

  s += "<polyline class=\"data\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i) s += " ";
    s += detail::fmt(px(ns[i])) + "," + detail::fmt(py(errors[i]));
  }
  s += "\"/>\n";

  // Reference C N^{-alpha}, anchored at the first point, clipped to the N range.
  const double ref_end = errors.front() * std::pow(*nmax / ns.front(), -alpha);
  s += "<line class=\"reference\" data-slope=\"" + detail::fmt(-alpha) + "\" x1=\"" +
       detail::fmt(px(ns.front())) + "\" y1=\"" + detail::fmt(py(errors.front())) + "\" x2=\"" +
       detail::fmt(px(*nmax)) + "\" y2=\"" + detail::fmt(py(ref_end)) +
       "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
  s += "<text x=\"" + detail::fmt(layout.margin_left + pw - 6) + "\" y=\"" +
       detail::fmt(layout.margin_top + 16) + "\" text-anchor=\"end\" font-size=\"11\" fill=\"#c0392b\">slope " +
       detail::fmt(-alpha) + "</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace nsgf::svg
