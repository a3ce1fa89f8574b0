#pragma once

#include <string>
#include <vector>

namespace cwikel::detail {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
  bool markers = true;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace cwikel::detail
