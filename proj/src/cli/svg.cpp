#include "bmhd/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bmhd/common/error.hpp"

namespace bmhd::cli {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }

  void fit(std::vector<double> v) {
    double a = INFINITY, b = -INFINITY;
    for (double x : v)
      if (usable(x)) {
        a = std::min(a, map(x));
        b = std::max(b, map(x));
      }
    if (!std::isfinite(a)) return;
    if (b - a < 1e-12) {
      const double pad = log ? 0.5 : std::max(1e-12, std::abs(a) * 0.1 + 0.5);
      a -= pad;
      b += pad;
    }
    if (log) {
      a = std::floor(a);
      b = std::ceil(b);
    } else {
      const double pad = 0.05 * (b - a);
      a -= pad;
      b += pad;
    }
    lo = a;
    hi = b;
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8.0)));
      for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step) t.push_back(e);
      return t;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  }

  std::string tick_label(double v) const { return log ? "1e" + label(v) : label(v); }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Axis ax{spec.log_x}, ay{spec.log_y};
  std::vector<double> xs, ys;
  std::size_t drawable = 0;
  for (const auto& s : spec.series) {
    require(s.x.size() == s.y.size(), ErrorKind::Input, "plot: series '" + s.name + "' has mismatched x and y");
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
        xs.push_back(s.x[i]);
        ys.push_back(s.y[i]);
        ++drawable;
      }
  }
  require(drawable > 0, ErrorKind::Input, "plot: no drawable points (empty series)");
  for (double h : spec.hlines) ys.push_back(h);
  ax.fit(xs);
  ay.fit(ys);

  const double W = spec.width, H = spec.height;
  const double left = 80, right = 190, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (ax.map(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return top + ph - (ay.map(y) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
     << "</text>\n";
  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : ax.ticks()) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + ph) << "\"/>\n";
  }
  for (double t : ay.ticks()) {
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(y) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    os << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">" << ax.tick_label(t)
       << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << ay.tick_label(t)
       << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 18) << "\" text-anchor=\"middle\">" << escape(spec.xlabel)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(top + ph / 2)
     << ")\">" << escape(spec.ylabel) << "</text>\n";

  os << "<defs><clipPath id=\"plot\"><rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.6\">\n";
  for (double h : spec.hlines) {
    if (!ay.usable(h)) continue;
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(h)) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(py(h))
       << "\" stroke=\"black\" stroke-dasharray=\"2 3\"/>\n";
  }
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kPalette[k % 8];
    std::string pts;
    auto flush = [&]() {
      if (pts.empty()) return;
      os << "<polyline stroke=\"" << color << '"' << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"" << pts
         << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += num(px(s.x[i])) + ',' + num(py(s.y[i]));
    }
    flush();
  }
  os << "</g>\n";

  double ly = top + 10;
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    os << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 36) << "\" y2=\""
       << num(ly) << "\" stroke=\"" << kPalette[k % 8] << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
       << "/>\n";
    os << "<text x=\"" << num(left + pw + 42) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name) << "</text>\n";
    ly += 18;
  }
  ly += 8;
  for (const auto& n : spec.notes) {
    os << "<text x=\"" << num(left + pw + 12) << "\" y=\"" << num(ly) << "\" font-size=\"11\">" << escape(n) << "</text>\n";
    ly += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace bmhd::cli
