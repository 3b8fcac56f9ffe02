#pragma once

#include <string>
#include <vector>

#include "kpunct/histogram.hpp"

namespace kpunct {

// Just enough SVG to plot a histogram, a few curves and spike markers.
// Output is a pure function of the data handed in, so re-rendering from the
// same CSV contents reproduces the file byte for byte.
class SvgPlot {
 public:
  SvgPlot(double width = 720, double height = 480);

  void set_title(const std::string& t) { title_ = t; }
  void set_xlabel(const std::string& t) { xlabel_ = t; }
  void set_ylabel(const std::string& t) { ylabel_ = t; }

  void add_bars(const Histogram& h, const std::string& color = "#9ecae1");
  void add_curve(const std::vector<double>& x, const std::vector<double>& y,
                 const std::string& color = "#d62728");
  void add_markers(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& color = "#2ca02c");
  void add_vline(double x, const std::string& color = "#777777");

  void save(const std::string& path) const;

 private:
  struct Bars {
    Histogram h;
    std::string color;
  };
  struct Curve {
    std::vector<double> x, y;
    std::string color;
    bool markers;
  };
  double width_, height_;
  std::string title_, xlabel_, ylabel_;
  std::vector<Bars> bars_;
  std::vector<Curve> curves_;
  std::vector<std::pair<double, std::string>> vlines_;
};

}  // namespace kpunct
