#include "kpunct/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "kpunct/errors.hpp"

namespace kpunct {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// round limits outward to a tidy tick step
double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double step = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

}  // namespace

SvgPlot::SvgPlot(double width, double height) : width_(width), height_(height) {}

void SvgPlot::add_bars(const Histogram& h, const std::string& color) {
  bars_.push_back(Bars{h, color});
}

void SvgPlot::add_curve(const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::string& color) {
  if (x.size() != y.size()) throw DimensionError("curve arrays differ in size");
  curves_.push_back(Curve{x, y, color, false});
}

void SvgPlot::add_markers(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::string& color) {
  if (x.size() != y.size()) throw DimensionError("marker arrays differ in size");
  curves_.push_back(Curve{x, y, color, true});
}

void SvgPlot::add_vline(double x, const std::string& color) {
  vlines_.emplace_back(x, color);
}

void SvgPlot::save(const std::string& path) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = 0.0, ymax = -std::numeric_limits<double>::infinity();
  for (const auto& b : bars_) {
    xmin = std::min(xmin, b.h.edges.front());
    xmax = std::max(xmax, b.h.edges.back());
    for (std::size_t i = 0; i < b.h.bins(); ++i)
      ymax = std::max(ymax, b.h.density(i));
  }
  for (const auto& c : curves_)
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      xmin = std::min(xmin, c.x[i]);
      xmax = std::max(xmax, c.x[i]);
      ymin = std::min(ymin, c.y[i]);
      ymax = std::max(ymax, c.y[i]);
    }
  for (const auto& v : vlines_) {
    xmin = std::min(xmin, v.first);
    xmax = std::max(xmax, v.first);
  }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double xpad = 0.03 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymax += ypad;

  const double ml = 62, mr = 16, mt = title_.empty() ? 16 : 34, mb = 46;
  const double pw = width_ - ml - mr, ph = height_ - mt - mb;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_)
     << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_)
     << " " << num(height_) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& b : bars_)
    for (std::size_t i = 0; i < b.h.bins(); ++i) {
      const double x0 = px(b.h.edges[i]), x1 = px(b.h.edges[i + 1]);
      const double y1 = py(std::max(0.0, b.h.density(i)));
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\""
         << num(std::max(0.1, x1 - x0)) << "\" height=\""
         << num(std::max(0.0, py(std::max(0.0, ymin)) - y1))
         << "\" fill=\"" << b.color << "\" stroke=\"#6baed6\" stroke-width=\"0.5\"/>\n";
    }

  for (const auto& v : vlines_)
    os << "<line x1=\"" << num(px(v.first)) << "\" y1=\"" << num(mt)
       << "\" x2=\"" << num(px(v.first)) << "\" y2=\"" << num(mt + ph)
       << "\" stroke=\"" << v.second << "\" stroke-dasharray=\"4 3\"/>\n";

  for (const auto& c : curves_) {
    if (c.markers) {
      for (std::size_t i = 0; i < c.x.size(); ++i)
        os << "<circle cx=\"" << num(px(c.x[i])) << "\" cy=\""
           << num(py(c.y[i])) << "\" r=\"3.5\" fill=\"none\" stroke=\""
           << c.color << "\" stroke-width=\"1.5\"/>\n";
    } else if (!c.x.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << c.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < c.x.size(); ++i)
        os << num(px(c.x[i])) << "," << num(py(c.y[i]))
           << (i + 1 < c.x.size() ? " " : "");
      os << "\"/>\n";
    }
  }

  // frame and ticks
  os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
     << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xstep = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep;
       t += xstep) {
    os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(mt + ph)
       << "\" x2=\"" << num(px(t)) << "\" y2=\"" << num(mt + ph + 5)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(mt + ph + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep;
       t += ystep) {
    os << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(t))
       << "\" x2=\"" << num(ml) << "\" y2=\"" << num(py(t))
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(t) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  if (!title_.empty())
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"22\" font-size=\"14\" "
          "text-anchor=\"middle\">" << title_ << "</text>\n";
  if (!xlabel_.empty())
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height_ - 8)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel_ << "</text>\n";
  if (!ylabel_.empty())
    os << "<text x=\"14\" y=\"" << num(mt + ph / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << num(mt + ph / 2) << ")\">" << ylabel_ << "</text>\n";
  os << "</svg>\n";
  if (!os) throw ConfigError("write failed for " + path);
}

}  // namespace kpunct
