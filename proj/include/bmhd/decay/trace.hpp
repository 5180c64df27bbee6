#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bmhd {

/// Time series of named norm values. torus_length is the side L of the
/// periodic box the values came from, or infinity for whole-space quadrature.
struct DecayTrace {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::map<std::string, std::string> meta;
  int dim = 3;
  double p = 2.0;
  double torus_length = std::numeric_limits<double>::infinity();

  void add(const std::string& name, std::vector<double> values);
  bool has(const std::string& name) const;
  const std::vector<double>& get(const std::string& name) const;
};

/// Header comment lines carry meta; columns are t, <t>, then each series.
void write_trace_csv(std::ostream& os, const DecayTrace& trace);
DecayTrace read_trace_csv(const std::string& text);

/// <t> = sqrt(1 + t^2)
inline double japanese(double t) { return std::sqrt(1.0 + t * t); }

}  // namespace bmhd
