#include "optomech/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace optomech {

namespace {

constexpr double kWidth = 960, kHeight = 600;
constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 60;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Round a raw step to a 1/2/5 decade grid.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac <= 1.5) step = 1.0;
  else if (frac <= 3.5) step = 2.0;
  else if (frac <= 7.5) step = 5.0;
  else step = 10.0;
  return step * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

SvgChart::SvgChart(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgChart::add_series(const std::string& label, const std::vector<double>& x,
                          const std::vector<double>& y, const std::string& color,
                          bool dashed) {
  series_.push_back(Series{label, x, y, color, dashed});
}

void SvgChart::add_hline(const std::string& label, double y, const std::string& color) {
  hlines_.push_back(HLine{label, y, color});
}

void SvgChart::add_marker(const std::string& label, double x, double y,
                          const std::string& color) {
  markers_.push_back(Marker{label, x, y, color});
}

std::string SvgChart::render() const {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series_) {
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  for (const HLine& h : hlines_) {
    ymin = std::min(ymin, h.y);
    ymax = std::max(ymax, h.y);
  }
  for (const Marker& m : markers_) {
    xmin = std::min(xmin, m.x);
    xmax = std::max(xmax, m.x);
    ymin = std::min(ymin, m.y);
    ymax = std::max(ymax, m.y);
  }
  if (xmin > xmax) { xmin = 0.0; xmax = 1.0; }
  if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
  if (xmax == xmin) { xmax = xmin + 1.0; }
  if (ymax == ymin) { ymax = ymin + 1.0; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + pw * (x - xmin) / (xmax - xmin); };
  const auto py = [&](double y) { return kTop + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-size=\"18\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape(title_) << "</text>\n";

  // Axes frame and ticks.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xstep = nice_step(xmax - xmin, 8);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep; t += xstep) {
    out << "<line x1=\"" << px(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(t)
        << "\" y2=\"" << kTop + ph + 6 << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(t) << "\" y1=\"" << kTop << "\" x2=\"" << px(t)
        << "\" y2=\"" << kTop + ph
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 22
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << num(t) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin, 8);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep; t += ystep) {
    out << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft
        << "\" y2=\"" << py(t) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << py(t) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << kLeft - 10 << "\" y=\"" << py(t) + 4
        << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << num(t) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape(xlabel_) << "</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 20 "
      << kTop + ph / 2 << ")\">" << escape(ylabel_) << "</text>\n";

  for (const HLine& h : hlines_) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << py(h.y) << "\" x2=\""
        << kLeft + pw << "\" y2=\"" << py(h.y) << "\" stroke=\"" << h.color
        << "\" stroke-dasharray=\"8 5\" stroke-width=\"1.5\"/>\n";
  }

  for (const Series& s : series_) {
    out << "<path d=\"";
    bool pen_down = false;
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      out << (pen_down ? "L" : "M") << num(px(s.x[i])) << " " << num(py(s.y[i])) << " ";
      pen_down = true;
    }
    out << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
    if (s.dashed) out << " stroke-dasharray=\"7 4\"";
    out << "/>\n";
  }

  for (const Marker& m : markers_) {
    out << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y))
        << "\" r=\"5\" fill=\"" << m.color << "\"/>\n";
  }

  // Legend.
  double ly = kTop + 14;
  for (const Series& s : series_) {
    out << "<line x1=\"" << kLeft + pw - 180 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + pw - 150 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"7 4\"" : "")
        << "/>\n";
    out << "<text x=\"" << kLeft + pw - 144 << "\" y=\"" << ly
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(s.label)
        << "</text>\n";
    ly += 18;
  }
  for (const HLine& h : hlines_) {
    out << "<line x1=\"" << kLeft + pw - 180 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + pw - 150 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << h.color
        << "\" stroke-dasharray=\"8 5\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kLeft + pw - 144 << "\" y=\"" << ly
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(h.label)
        << "</text>\n";
    ly += 18;
  }
  for (const Marker& m : markers_) {
    out << "<circle cx=\"" << kLeft + pw - 165 << "\" cy=\"" << ly - 4
        << "\" r=\"4\" fill=\"" << m.color << "\"/>\n";
    out << "<text x=\"" << kLeft + pw - 144 << "\" y=\"" << ly
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(m.label)
        << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace optomech
