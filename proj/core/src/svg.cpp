#include "gapcert/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapcert/json_io.hpp"

namespace gapcert {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Panel {
  double x0, y0, w, h;  // pixel box
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void polyline(std::ostringstream& out, const Panel& p, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* color) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) out << p.px(xs[i]) << "," << p.py(ys[i]) << " ";
  out << "\"/>\n";
}

void frame(std::ostringstream& out, const Panel& p, const std::string& title,
           const std::string& xlabel) {
  out << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w << "\" height=\""
      << p.h << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 - 8
      << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
  out << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 + p.h + 28
      << "\" text-anchor=\"middle\" font-size=\"11\">" << xlabel << "</text>\n";
  out << "<text x=\"" << p.x0 << "\" y=\"" << p.y0 + p.h + 14 << "\" font-size=\"10\">"
      << p.xmin << "</text>\n";
  out << "<text x=\"" << p.x0 + p.w << "\" y=\"" << p.y0 + p.h + 14
      << "\" text-anchor=\"end\" font-size=\"10\">" << p.xmax << "</text>\n";
  out << "<text x=\"" << p.x0 - 4 << "\" y=\"" << p.py(p.ymin)
      << "\" text-anchor=\"end\" font-size=\"10\">" << p.ymin << "</text>\n";
  out << "<text x=\"" << p.x0 - 4 << "\" y=\"" << p.py(p.ymax) + 4
      << "\" text-anchor=\"end\" font-size=\"10\">" << p.ymax << "</text>\n";
}

}  // namespace

void write_process_svg(const std::string& path, const ProblemSpec& p,
                       const ExtendedProcess& proc) {
  const int M = proc.cells();
  std::vector<double> s = proc.ctrl.s;
  std::vector<std::vector<double>> series;  // y_1..n, nu, y0
  std::vector<std::string> labels;
  for (int j = 0; j < p.n; ++j) {
    std::vector<double> v(M + 1);
    for (int k = 0; k <= M; ++k) v[k] = proc.y[k][j];
    series.push_back(v);
    labels.push_back("y_" + std::to_string(j + 1));
  }
  series.push_back(proc.nu);
  labels.push_back("nu");
  series.push_back(proc.y0);
  labels.push_back("y0 (clock)");

  double ymin = 0, ymax = 1;
  for (const auto& v : series) {
    for (double x : v) {
      ymin = std::min(ymin, x);
      ymax = std::max(ymax, x);
    }
  }
  double pad = 0.05 * std::max(1e-6, ymax - ymin);
  ymin -= pad;
  ymax += pad;

  Panel left{60, 40, 360, 280, 0.0, proc.S(), ymin, ymax};
  Panel right{500, 40, 360, 280, proc.y0.front(), std::max(proc.y0.back(), proc.y0.front() + 1e-9),
              ymin, ymax};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"920\" height=\"400\" "
         "font-family=\"sans-serif\">\n";
  frame(out, left, "pseudo-time view", "s");
  frame(out, right, "time-expanded view", "t = y0(s)");
  for (size_t i = 0; i < series.size(); ++i) {
    polyline(out, left, s, series[i], kColors[i % 8]);
    if (labels[i] != "y0 (clock)") polyline(out, right, proc.y0, series[i], kColors[i % 8]);
    out << "<rect x=\"" << 60 + 120 * static_cast<double>(i) << "\" y=\"352\" width=\"10\" "
        << "height=\"10\" fill=\"" << kColors[i % 8] << "\"/>\n"
        << "<text x=\"" << 74 + 120 * static_cast<double>(i)
        << "\" y=\"361\" font-size=\"11\">" << labels[i] << "</text>\n";
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

}  // namespace gapcert
