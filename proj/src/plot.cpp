#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "systolab/error.hpp"
#include "systolab/pipeline.hpp"

namespace systolab::pipeline {

namespace {

struct Point {
  double x;      // abscissa before scaling
  double D;      // field discriminant
  double R;      // regulator
};

std::vector<Point> certified_points(const std::vector<SweepRecord>& records) {
  std::vector<Point> pts;
  for (const auto& r : records) {
    if (!r.regulator_field || !r.disc_field || !r.regulator_certified) continue;
    double D = std::fabs(r.disc_field->get_d());
    if (!(D > std::exp(1.0)) || !(*r.regulator_field > 0)) continue;
    pts.push_back({static_cast<double>(r.p), D, *r.regulator_field});
  }
  return pts;
}

double upper_shape(double D) { return std::sqrt(D) * std::pow(std::log(D), 2); }
double lower_shape(double D) { return std::pow(std::log(D), 2); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// Round step for roughly `target` ticks over [lo, hi].
double nice_step(double lo, double hi, int target) {
  double raw = (hi - lo) / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10 * mag;
}

}  // namespace

EnvelopeFit fit_envelopes(const std::vector<SweepRecord>& records) {
  auto pts = certified_points(records);
  if (pts.size() < 2) throw InsufficientData("need at least two certified records to fit envelopes");
  EnvelopeFit fit;
  fit.upper = 0.0;
  fit.lower = std::numeric_limits<double>::infinity();
  for (const auto& pt : pts) {
    fit.upper = std::max(fit.upper, pt.R / upper_shape(pt.D));
    fit.lower = std::min(fit.lower, pt.R / lower_shape(pt.D));
  }
  fit.points = pts.size();
  return fit;
}

std::string render_svg(const std::vector<SweepRecord>& records, const PlotOptions& options) {
  auto pts = certified_points(records);
  if (pts.size() < 2) throw InsufficientData("need at least two certified records to plot");
  const bool log_x = options.x_axis == XAxis::Discriminant;
  for (auto& pt : pts)
    if (log_x) pt.x = std::log10(pt.D);
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });

  EnvelopeFit fit;
  if (options.envelopes) fit = fit_envelopes(records);

  double xlo = pts.front().x, xhi = pts.back().x;
  if (xhi <= xlo) xhi = xlo + 1;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  auto extend = [&](double v) {
    ylo = std::min(ylo, std::log10(v));
    yhi = std::max(yhi, std::log10(v));
  };
  for (const auto& pt : pts) {
    extend(pt.R);
    if (options.envelopes) {
      extend(fit.upper * upper_shape(pt.D));
      extend(fit.lower * lower_shape(pt.D));
    }
  }
  ylo = std::floor(ylo);
  yhi = std::ceil(yhi);
  if (yhi <= ylo) yhi = ylo + 1;

  const double W = 900, H = 560, left = 80, right = 240, top = 50, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double v) { return top + ph - (std::log10(v) - ylo) / (yhi - ylo) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
    << W << " " << H << "\">\n";
  s << "<style>.marker,.legend-marker{fill:#1f4e99}.envelope{fill:none;stroke-width:1.5}.upper{stroke:#b2182b}"
       ".lower{stroke:#2c7d32}.axis{stroke:#000}.grid{stroke:#ddd}text{font-family:sans-serif;font-size:12px}</style>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  s << "<text x=\"" << num(left) << "\" y=\"28\" font-size=\"15\">" << escape(options.title) << "</text>\n";

  // Decade grid on y.
  for (int k = static_cast<int>(ylo); k <= static_cast<int>(yhi); ++k) {
    double y = sy(std::pow(10.0, k));
    s << "<line class=\"grid\" x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(y)
      << "\" y2=\"" << num(y) << "\"/>\n";
    s << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e" << k << "</text>\n";
  }
  double step = log_x ? std::max(1.0, nice_step(xlo, xhi, 6)) : nice_step(xlo, xhi, 8);
  for (double t = std::ceil(xlo / step) * step; t <= xhi + 1e-9; t += step) {
    double x = sx(t);
    s << "<line class=\"grid\" x1=\"" << num(x) << "\" x2=\"" << num(x) << "\" y1=\"" << num(top) << "\" y2=\""
      << num(top + ph) << "\"/>\n";
    s << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
      << (log_x ? "1e" + label(t) : label(t)) << "</text>\n";
  }
  s << "<line class=\"axis\" x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(top + ph)
    << "\" y2=\"" << num(top + ph) << "\"/>\n";
  s << "<line class=\"axis\" x1=\"" << num(left) << "\" x2=\"" << num(left) << "\" y1=\"" << num(top)
    << "\" y2=\"" << num(top + ph) << "\"/>\n";
  s << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 15) << "\" text-anchor=\"middle\">"
    << (log_x ? "field discriminant D (log scale)" : "prime p") << "</text>\n";
  s << "<text transform=\"translate(20," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << "regulator R (log scale)</text>\n";

  if (options.envelopes) {
    auto path = [&](const char* cls, double c, double (*shape)(double)) {
      s << "<path class=\"envelope " << cls << "\" d=\"";
      for (size_t i = 0; i < pts.size(); ++i)
        s << (i ? " L " : "M ") << num(sx(pts[i].x)) << " " << num(sy(c * shape(pts[i].D)));
      s << "\"/>\n";
    };
    path("upper", fit.upper, upper_shape);
    path("lower", fit.lower, lower_shape);
  }
  for (const auto& pt : pts)
    s << "<circle class=\"marker\" cx=\"" << num(sx(pt.x)) << "\" cy=\"" << num(sy(pt.R)) << "\" r=\"2.5\"/>\n";

  double lx = left + pw + 20, ly = top + 10;
  s << "<circle class=\"legend-marker\" cx=\"" << num(lx + 6) << "\" cy=\"" << num(ly) << "\" r=\"3\"/>";
  s << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 4) << "\">certified R (" << pts.size()
    << " fields)</text>\n";
  if (options.envelopes) {
    s << "<line class=\"envelope upper\" x1=\"" << num(lx) << "\" x2=\"" << num(lx + 12) << "\" y1=\"" << num(ly + 22)
      << "\" y2=\"" << num(ly + 22) << "\"/>";
    s << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 26) << "\">" << label(fit.upper)
      << " sqrt(D) log^2 D</text>\n";
    s << "<line class=\"envelope lower\" x1=\"" << num(lx) << "\" x2=\"" << num(lx + 12) << "\" y1=\"" << num(ly + 44)
      << "\" y2=\"" << num(ly + 44) << "\"/>";
    s << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 48) << "\">" << label(fit.lower)
      << " log^2 D</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_plot(const std::vector<SweepRecord>& records, const std::string& path, const PlotOptions& options) {
  std::string svg = render_svg(records, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << svg;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace systolab::pipeline
