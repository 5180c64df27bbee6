#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "bmhd/cli/commands.hpp"
#include "bmhd/cli/svg.hpp"

namespace bmhd::cli {

namespace {

std::string fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

bool is_sweep(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line.rfind("xi_norm,direction", 0) == 0;
  }
  return false;
}

std::string plot_sweep(const std::string& text, const PlotOptions& opts) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0, margin_col = -1, ncols = 0;
  std::map<double, double> worst;  // |xi| -> max margin over directions
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cols.push_back(cur);
    if (margin_col < 0) {
      ncols = static_cast<int>(cols.size());
      for (int i = 0; i < ncols; ++i)
        if (cols[i] == "margin") margin_col = i;
      require(margin_col >= 0, ErrorKind::Parse, "line " + std::to_string(lineno) + ": sweep header has no margin column");
      continue;
    }
    require(static_cast<int>(cols.size()) == ncols, ErrorKind::Parse,
            "line " + std::to_string(lineno) + ": expected " + std::to_string(ncols) + " columns");
    double xi = 0.0, m = 0.0;
    try {
      std::size_t a = 0, b = 0;
      xi = std::stod(cols[0], &a);
      m = std::stod(cols[margin_col], &b);
      require(a == cols[0].size() && b == cols[margin_col].size(), ErrorKind::Parse, "");
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": malformed number");
    }
    auto it = worst.find(xi);
    if (it == worst.end()) worst.emplace(xi, m);
    else it->second = std::max(it->second, m);
  }
  PlotSeries s;
  s.name = "max over directions";
  double top = -INFINITY;
  for (const auto& [xi, m] : worst) {
    s.x.push_back(xi);
    s.y.push_back(m);
    top = std::max(top, m);
  }
  PlotSpec spec;
  spec.title = opts.title.empty() ? "dissipativity margin" : opts.title;
  spec.xlabel = "|xi|";
  spec.ylabel = "max Re lambda / eta(xi)";
  spec.log_y = false;
  spec.series.push_back(s);
  spec.hlines.push_back(0.0);
  spec.notes.push_back("max margin = " + fixed4(top));
  spec.notes.push_back("c = " + fixed4(-top));
  return render_svg(spec);
}

// -(s0 + s)/2 for series "low_B^<s>_2,1" (and s = -s0 for the reference
// series); NaN when no rate law applies.
double predicted_slope(const DecayTrace& tr, const std::string& name) {
  double s0 = 2.0 * tr.dim / tr.p - 0.5 * tr.dim;
  if (tr.meta.count("s0")) s0 = std::stod(tr.meta.at("s0"));
  if (name == "low_B^-s0_2,inf") return 0.0;
  double s = 0.0;
  char tail[16] = {0};
  if (std::sscanf(name.c_str(), "low_B^%lf_%15s", &s, tail) == 2 && std::string(tail) == "2,1") return -(s0 + s) / 2.0;
  return NAN;
}

std::string plot_trace(const std::string& text, const PlotOptions& opts) {
  const DecayTrace tr = read_trace_csv(text);
  std::vector<std::string> names = opts.series;
  if (names.empty())
    for (const auto& s : tr.series) names.push_back(s.first);
  require(!names.empty(), ErrorKind::Input, "plot: the trace has no series");
  require(!tr.times.empty(), ErrorKind::Input, "plot: the trace has no rows");
  std::vector<double> jt;
  for (double t : tr.times) jt.push_back(japanese(t));

  PlotSpec spec;
  spec.title = opts.title.empty() ? "decay trace" : opts.title;
  spec.xlabel = "<t>";
  spec.ylabel = "norm";
  const double lo = opts.fit_t_lo > 0.0 ? opts.fit_t_lo : tr.times.front();
  const double hi = opts.fit_t_hi > 0.0 ? opts.fit_t_hi : tr.times.back();
  for (const auto& n : names) {
    require(tr.has(n), ErrorKind::Input, "plot: no series '" + n + "' in the trace");
    const auto& v = tr.get(n);
    bool any = false;
    for (double x : v) any = any || (std::isfinite(x) && x > 0.0);
    require(any, ErrorKind::Input, "plot: series '" + n + "' is empty or has no positive values");
    spec.series.push_back({n, jt, v, false});
    const double slope = predicted_slope(tr, n);
    if (std::isnan(slope)) continue;
    FitOptions fo;
    fo.min_r_squared = 0.0;
    fo.min_samples = 2;
    RateFit f;
    try {
      f = fit_rate(tr, n, lo, hi, fo);
    } catch (const Error&) {
      continue;
    }
    // Reference line at the predicted slope through the fitted centroid.
    double cx = 0.0, cy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      if (tr.times[i] >= f.t_lo && tr.times[i] <= f.t_hi) {
        cx += std::log(jt[i]);
        cy += f.intercept + f.exponent * std::log(jt[i]);
        ++m;
      }
    cx /= m;
    cy /= m;
    PlotSeries ref{n + " predicted", {}, {}, true};
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      if (tr.times[i] >= f.t_lo && tr.times[i] <= f.t_hi) {
        ref.x.push_back(jt[i]);
        ref.y.push_back(std::exp(cy + slope * (std::log(jt[i]) - cx)));
      }
    spec.series.push_back(ref);
    spec.notes.push_back(n + ": slope " + fixed4(f.exponent) + " (predicted " + fixed4(slope) + ")");
  }
  return render_svg(spec);
}

}  // namespace

std::string plot_csv(const std::string& text, const PlotOptions& opts) {
  return is_sweep(text) ? plot_sweep(text, opts) : plot_trace(text, opts);
}

}  // namespace bmhd::cli
