#ifndef OPTOMECH_SVG_HPP
#define OPTOMECH_SVG_HPP

#include <string>
#include <vector>

namespace optomech {

// Minimal self-rendered SVG line chart: axes, ticks, legend, solid/dashed
// styles. No external renderer. NaN samples split a series into segments.
class SvgChart {
 public:
  SvgChart(std::string title, std::string xlabel, std::string ylabel);

  void add_series(const std::string& label, const std::vector<double>& x,
                  const std::vector<double>& y, const std::string& color,
                  bool dashed = false);
  void add_hline(const std::string& label, double y, const std::string& color);
  void add_marker(const std::string& label, double x, double y,
                  const std::string& color);

  std::string render() const;

 private:
  struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color;
    bool dashed;
  };
  struct HLine {
    std::string label;
    double y;
    std::string color;
  };
  struct Marker {
    std::string label;
    double x, y;
    std::string color;
  };

  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
  std::vector<HLine> hlines_;
  std::vector<Marker> markers_;
};

}  // namespace optomech

#endif  // OPTOMECH_SVG_HPP
