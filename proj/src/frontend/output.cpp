#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sweep.hpp"

namespace phonon::cli {

const char* const kCsvHeader =
    "mode,two_omega,detuning_ratio,kappa,nbar,g,omega_ph,gamma_c,n_mean,g2,n_max_used,"
    "residual,status,wall_time_ms";

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> g2;
  std::vector<std::pair<double, double>> n_mean;
};

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                                "#7f7f7f", "#bcbd22"};

double axis_coord(const Axis& a, double v) {
  return a.scale == AxisScale::Log10 ? std::log10(v) : v;
}

class Frame {
 public:
  Frame(double x0, double y0, double w, double h) : x0_(x0), y0_(y0), w_(w), h_(h) {}

  void fit(double xmin, double xmax, double ymin, double ymax) {
    xmin_ = xmin;
    xmax_ = xmax > xmin ? xmax : xmin + 1.0;
    ymin_ = ymin;
    ymax_ = ymax > ymin ? ymax : ymin + 1.0;
  }
  double x(double v) const { return x0_ + (v - xmin_) / (xmax_ - xmin_) * w_; }
  double y(double v) const { return y0_ + h_ - (v - ymin_) / (ymax_ - ymin_) * h_; }

  void box(std::ostream& os, const std::string& title, const std::string& xlabel) const {
    os << "<rect x='" << x0_ << "' y='" << y0_ << "' width='" << w_ << "' height='" << h_
       << "' fill='none' stroke='black'/>\n";
    os << "<text x='" << x0_ << "' y='" << y0_ - 6 << "' font-size='12'>" << title << "</text>\n";
    os << "<text x='" << x0_ + w_ / 2 << "' y='" << y0_ + h_ + 28
       << "' font-size='11' text-anchor='middle'>" << xlabel << "</text>\n";
    os << "<text x='" << x0_ - 4 << "' y='" << y0_ + h_ << "' font-size='9' text-anchor='end'>"
       << num(ymin_) << "</text>\n";
    os << "<text x='" << x0_ - 4 << "' y='" << y0_ + 9 << "' font-size='9' text-anchor='end'>"
       << num(ymax_) << "</text>\n";
    os << "<text x='" << x0_ << "' y='" << y0_ + h_ + 12 << "' font-size='9'>" << num(xmin_)
       << "</text>\n";
    os << "<text x='" << x0_ + w_ << "' y='" << y0_ + h_ + 12
       << "' font-size='9' text-anchor='end'>" << num(xmax_) << "</text>\n";
  }

  void hline(std::ostream& os, double v) const {
    if (v < ymin_ || v > ymax_) return;
    os << "<line x1='" << x0_ << "' x2='" << x0_ + w_ << "' y1='" << y(v) << "' y2='" << y(v)
       << "' stroke='#999' stroke-dasharray='4,3'/>\n";
  }

 private:
  double x0_, y0_, w_, h_;
  double xmin_ = 0, xmax_ = 1, ymin_ = 0, ymax_ = 1;
};

void polyline(std::ostream& os, const Frame& f, const std::vector<std::pair<double, double>>& pts,
              const char* color, bool dashed) {
  os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'"
     << (dashed ? " stroke-dasharray='6,3'" : "") << " points='";
  for (const auto& [x, y] : pts) os << f.x(x) << ',' << f.y(y) << ' ';
  os << "'/>\n";
}

void line_plot(std::ostream& os, const Axis& x_axis, const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double gmin = xmin, gmax = -xmin, nmin = xmin, nmax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.g2) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      gmin = std::min(gmin, y); gmax = std::max(gmax, y);
    }
    for (const auto& [x, y] : s.n_mean) { nmin = std::min(nmin, y); nmax = std::max(nmax, y); }
  }
  if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; gmin = 0; gmax = 2; nmin = -1; nmax = 1; }
  gmin = std::min(gmin, 1.0);
  gmax = std::max(gmax, 1.0);

  const std::string xlabel =
      (x_axis.scale == AxisScale::Log10 ? "log10 " : "") + x_axis.name;
  Frame top(70, 30, 560, 220);
  top.fit(xmin, xmax, gmin, gmax);
  top.box(os, "g2(0)", xlabel);
  top.hline(os, 1.0);
  Frame bottom(70, 320, 560, 220);
  bottom.fit(xmin, xmax, nmin, nmax);
  bottom.box(os, "log10 &lt;n&gt;", xlabel);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    const bool dashed = series[k].label.find("secular") == 0;
    polyline(os, top, series[k].g2, color, dashed);
    polyline(os, bottom, series[k].n_mean, color, dashed);
    os << "<text x='640' y='" << 40 + 14 * k << "' font-size='10' fill='" << color << "'>"
       << series[k].label << "</text>\n";
  }
}

void heatmap(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRecord>& recs) {
  const std::vector<double> xs = spec.axis1.points();
  const std::vector<double> ys = spec.axis2->points();
  const ps_mode mode = spec.modes.front();
  const double cw = 560.0 / xs.size();
  const double ch = 220.0 / ys.size();
  const auto color = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * t), 64,
                  static_cast<int>(255 * (1.0 - t)));
    return std::string(buf);
  };
  for (int panel = 0; panel < 2; ++panel) {
    const double y0 = panel == 0 ? 30.0 : 320.0;
    os << "<text x='70' y='" << y0 - 6 << "' font-size='12'>"
       << (panel == 0 ? "g2(0) (blue 0, red 2)" : "log10 &lt;n&gt; (blue -3, red 3)") << " ["
       << ps_mode_name(mode) << "]</text>\n";
    std::size_t k = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        for (ps_mode m : spec.modes) {
          const SweepRecord& r = recs[k++];
          if (m != mode) continue;
          std::string fill = "#cccccc";
          if (r.ok()) {
            fill = panel == 0 ? color(r.g2 / 2.0) : color((std::log10(r.n_mean) + 3.0) / 6.0);
          }
          os << "<rect x='" << 70 + cw * i << "' y='" << y0 + 220 - ch * (j + 1) << "' width='"
             << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='" << fill << "'/>\n";
        }
      }
    }
    os << "<text x='350' y='" << y0 + 248 << "' font-size='11' text-anchor='middle'>"
       << (spec.axis1.scale == AxisScale::Log10 ? "log10 " : "") << spec.axis1.name
       << " (x) vs " << spec.axis2->name << " (y)</text>\n";
  }
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records, bool include_header) {
  if (include_header) os << kCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    const PointParams& p = r.params;
    os << ps_mode_name(r.mode) << ',' << num(p.two_omega) << ',' << num(p.detuning_ratio) << ','
       << num(p.kappa) << ',' << num(p.nbar) << ',' << num(p.g) << ',' << num(p.omega_ph) << ','
       << num(p.gamma_c) << ',' << num(r.n_mean) << ',' << num(r.g2) << ',' << r.n_max_used
       << ',' << num(r.residual) << ',' << r.status << ',' << fixed3(r.wall_time_ms) << '\n';
  }
}

void write_svg(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRecord>& recs) {
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='820' height='580' "
        "font-family='sans-serif'>\n";
  os << "<title>" << spec.name << "</title>\n";
  os << "<desc>" << spec.caption << "</desc>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";

  const bool grid2d = spec.axis2 && spec.axis1.scale != AxisScale::List;
  if (grid2d) {
    heatmap(os, spec, recs);
  } else {
    // Curves run along the continuous axis; list-axis values label curves.
    const Axis& x_axis = spec.axis2 ? *spec.axis2 : spec.axis1;
    std::map<std::string, std::size_t> index;
    std::vector<Series> series;
    for (const SweepRecord& r : recs) {
      std::string label = ps_mode_name(r.mode);
      if (spec.axis2) label += " " + spec.axis1.name + "=" + num(get_parameter(r.params, spec.axis1.name));
      auto it = index.find(label);
      if (it == index.end()) {
        it = index.emplace(label, series.size()).first;
        series.push_back(Series{label, {}, {}});
      }
      if (!r.ok()) continue;
      const double x = axis_coord(x_axis, get_parameter(r.params, x_axis.name));
      series[it->second].g2.emplace_back(x, r.g2);
      series[it->second].n_mean.emplace_back(x, std::log10(r.n_mean));
    }
    line_plot(os, x_axis, series);
  }
  os << "</svg>\n";
}

}  // namespace phonon::cli
