#include "bmhd/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bmhd/common/error.hpp"

namespace bmhd::cli {

namespace {

[[noreturn]] void bad(std::string_view key, const std::string& what) {
  fail(ErrorKind::Config, "params." + std::string(key) + ": " + what);
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"linear-decay", "simulate",     "decay-report",
                                             "harness",      "symbol-sweep", "duhamel-check"};
  return k;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return kind == o.kind && seed == o.seed && output_dir == o.output_dir && params == o.params;
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
  toml::table t;
  try {
    t = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << origin << ':' << e.source().begin.line << ':' << e.source().begin.column << ": " << e.description();
    fail(ErrorKind::Config, os.str());
  }
  ExperimentConfig c;
  for (const auto& [key, node] : t) {
    const std::string_view k = key.str();
    if (k == "kind") {
      const auto v = node.value<std::string>();
      require(v.has_value(), ErrorKind::Config, "kind: expected a string");
      c.kind = *v;
    } else if (k == "seed") {
      const auto v = node.value<std::int64_t>();
      require(v.has_value() && *v >= 0, ErrorKind::Config, "seed: expected a non-negative integer");
      c.seed = static_cast<std::uint64_t>(*v);
    } else if (k == "output_dir") {
      const auto v = node.value<std::string>();
      require(v.has_value() && !v->empty(), ErrorKind::Config, "output_dir: expected a non-empty string");
      c.output_dir = *v;
    } else if (k == "params") {
      require(node.is_table(), ErrorKind::Config, "params: expected a table");
      c.params = *node.as_table();
    } else {
      fail(ErrorKind::Config, std::string(k) + ": unknown top-level key (kind, seed, output_dir, params)");
    }
  }
  require(!c.kind.empty(), ErrorKind::Config, "kind: missing");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_toml(const ExperimentConfig& c) {
  toml::table t;
  t.insert("kind", c.kind);
  t.insert("seed", static_cast<std::int64_t>(c.seed));
  t.insert("output_dir", c.output_dir);
  t.insert("params", c.params);
  std::ostringstream os;
  os << t << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c) {
  const auto& k = experiment_kinds();
  require(std::find(k.begin(), k.end(), c.kind) != k.end(), ErrorKind::Config,
          "kind: unknown experiment '" + c.kind + "'");
  require(c.seed <= static_cast<std::uint64_t>(INT64_MAX), ErrorKind::Config, "seed: out of range");
}

double Params::number(std::string_view key, double def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<double>()) return *v;
  if (const auto v = n->value_exact<std::int64_t>()) return static_cast<double>(*v);
  bad(key, "expected a number");
}

std::int64_t Params::integer(std::string_view key, std::int64_t def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<std::int64_t>()) return *v;
  bad(key, "expected an integer");
}

bool Params::boolean(std::string_view key, bool def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<bool>()) return *v;
  bad(key, "expected a boolean");
}

std::string Params::string(std::string_view key, const std::string& def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<std::string>()) return *v;
  bad(key, "expected a string");
}

std::vector<double> Params::numbers(std::string_view key, const std::vector<double>& def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<double>()) return {*v};
  if (const auto v = n->value_exact<std::int64_t>()) return {static_cast<double>(*v)};
  const toml::array* a = n->as_array();
  if (!a) bad(key, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < a->size(); ++i) {
    const toml::node& e = *a->get(i);
    if (const auto v = e.value_exact<double>()) out.push_back(*v);
    else if (const auto w = e.value_exact<std::int64_t>()) out.push_back(static_cast<double>(*w));
    else bad(key, "element " + std::to_string(i) + " is not a number");
  }
  if (out.empty()) bad(key, "empty array");
  return out;
}

std::vector<std::string> Params::strings(std::string_view key, const std::vector<std::string>& def) const {
  const toml::node* n = t_.get(key);
  if (!n) return def;
  if (const auto v = n->value_exact<std::string>()) return {*v};
  const toml::array* a = n->as_array();
  if (!a) bad(key, "expected a string or an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a->size(); ++i) {
    const auto v = a->get(i)->value_exact<std::string>();
    if (!v) bad(key, "element " + std::to_string(i) + " is not a string");
    out.push_back(*v);
  }
  if (out.empty()) bad(key, "empty array");
  return out;
}

Vec3 Params::vec3(std::string_view key, const Vec3& def) const {
  if (!t_.get(key)) return def;
  const std::vector<double> v = numbers(key, {});
  if (v.size() < 2 || v.size() > 3) bad(key, "expected 2 or 3 components");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

void Params::allow_only(std::initializer_list<std::string_view> keys, const std::string& kind) const {
  for (const auto& [key, node] : t_) {
    (void)node;
    if (std::find(keys.begin(), keys.end(), key.str()) == keys.end())
      bad(key.str(), "unknown key for kind '" + kind + "'");
  }
}

}  // namespace bmhd::cli
