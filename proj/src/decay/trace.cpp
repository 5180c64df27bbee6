#include "bmhd/decay/trace.hpp"

#include <cstdio>
#include <sstream>

#include "bmhd/common/error.hpp"

namespace bmhd {

void DecayTrace::add(const std::string& name, std::vector<double> values) {
  require(values.size() == times.size(), ErrorKind::Input, "series '" + name + "' length differs from times");
  for (double v : values) require(std::isfinite(v), ErrorKind::Numeric, "series '" + name + "' has a non-finite value");
  for (auto& s : series)
    if (s.first == name) {
      s.second = std::move(values);
      return;
    }
  series.emplace_back(name, std::move(values));
}

bool DecayTrace::has(const std::string& name) const {
  for (const auto& s : series)
    if (s.first == name) return true;
  return false;
}

const std::vector<double>& DecayTrace::get(const std::string& name) const {
  for (const auto& s : series)
    if (s.first == name) return s.second;
  fail(ErrorKind::Input, "trace has no series '" + name + "'");
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Series names such as "low_B^0_2,1" carry commas, so header cells are quoted.
std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}
}  // namespace

void write_trace_csv(std::ostream& os, const DecayTrace& trace) {
  os << "# dim=" << trace.dim << "\n# p=" << fmt(trace.p) << "\n# torus_length=" << fmt(trace.torus_length) << "\n";
  for (const auto& [k, v] : trace.meta) os << "# " << k << '=' << v << '\n';
  os << "t,japanese_t";
  for (const auto& s : trace.series) os << ',' << csv_cell(s.first);
  os << '\n';
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << fmt(trace.times[i]) << ',' << fmt(japanese(trace.times[i]));
    for (const auto& s : trace.series) os << ',' << fmt(s.second[i]);
    os << '\n';
  }
}

DecayTrace read_trace_csv(const std::string& text) {
  DecayTrace tr;
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  int lineno = 0;
  bool header = false;
  auto split = [&lineno](const std::string& l) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const char c = l[i];
      if (quoted) {
        if (c != '"') cur += c;
        else if (i + 1 < l.size() && l[i + 1] == '"') cur += l[++i];
        else quoted = false;
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    require(!quoted, ErrorKind::Parse, "line " + std::to_string(lineno) + ": unterminated quote");
    out.push_back(cur);
    return out;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      while (!key.empty() && key.front() == ' ') key.erase(key.begin());
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "dim") tr.dim = std::stoi(val);
        else if (key == "p") tr.p = std::stod(val);
        else if (key == "torus_length") tr.torus_length = std::stod(val);
        else tr.meta[key] = val;
      } catch (const std::exception&) {
        fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": bad metadata value");
      }
      continue;
    }
    const auto cells = split(line);
    if (!header) {
      require(cells.size() >= 2 && cells[0] == "t", ErrorKind::Parse,
              "line " + std::to_string(lineno) + ": expected a header starting with t");
      names.assign(cells.begin() + 1, cells.end());
      cols.assign(names.size(), {});
      header = true;
      continue;
    }
    require(cells.size() == names.size() + 1, ErrorKind::Parse,
            "line " + std::to_string(lineno) + ": expected " + std::to_string(names.size() + 1) + " cells");
    try {
      std::size_t used = 0;
      tr.times.push_back(std::stod(cells[0], &used));
      require(used == cells[0].size(), ErrorKind::Parse, "line " + std::to_string(lineno) + ": trailing characters");
      for (std::size_t c = 0; c < names.size(); ++c) {
        cols[c].push_back(std::stod(cells[c + 1], &used));
        require(used == cells[c + 1].size(), ErrorKind::Parse,
                "line " + std::to_string(lineno) + ": trailing characters");
      }
    } catch (const std::invalid_argument&) {
      fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": not a number");
    } catch (const std::out_of_range&) {
      fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": number out of range");
    }
  }
  require(header, ErrorKind::Parse, "trace CSV has no header");
  for (std::size_t c = 0; c < names.size(); ++c)
    if (names[c] != "japanese_t") tr.add(names[c], cols[c]);
  return tr;
}

}  // namespace bmhd
