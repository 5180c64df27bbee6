#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "bmhd/common/error.hpp"
#include "bmhd/common/parallel.hpp"
#include "bmhd/harness/harness.hpp"

namespace bmhd::harness {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::ExpectedFail: return "EXPECTED_FAIL";
    default: return "UNEXPECTED_PASS";
  }
}

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (c.status != CheckStatus::Pass && c.status != CheckStatus::ExpectedFail) return false;
  return true;
}

void HarnessOptions::validate() const {
  require(n_samples >= 1, ErrorKind::Config, "harness.n_samples must be >= 1");
  require(sample_growth >= 1, ErrorKind::Config, "harness.sample_growth must be >= 1");
  require(refinement_limit > 1.0, ErrorKind::Config, "harness.refinement_limit must exceed 1");
  require(sample_limit > 0.0, ErrorKind::Config, "harness.sample_limit must be positive");
  require(identity_samples >= 0, ErrorKind::Config, "harness.identity_samples must be >= 0");
  require(ascent_candidates >= 0 && ascent_steps >= 0, ErrorKind::Config,
          "harness.ascent_candidates and harness.ascent_steps must be >= 0");
}

namespace {

Histogram log_histogram(const std::vector<double>& v, int bins = 10) {
  Histogram h;
  std::vector<double> x;
  for (double r : v)
    if (r > 0.0 && std::isfinite(r)) x.push_back(std::log10(r));
  if (x.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  h.counts.assign(bins, 0);
  for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * i / bins);
  for (double y : x) {
    int b = static_cast<int>((y - lo) / (hi - lo) * bins);
    h.counts[std::clamp(b, 0, bins - 1)]++;
  }
  return h;
}

double growth(double worst, double other) {
  if (worst > 0.0) return other / worst;
  return other > 0.0 ? INFINITY : 1.0;
}

}  // namespace

void finalize(CheckResult& r, const HarnessOptions& opts) {
  r.finite = r.finite && std::isfinite(r.worst) && std::isfinite(r.worst_refined) && std::isfinite(r.worst_more);
  r.growth_refinement = growth(r.worst, r.worst_refined);
  r.growth_samples = growth(r.worst, r.worst_more) - 1.0;
  r.stable_refinement = r.finite && r.growth_refinement < opts.refinement_limit;
  r.stable_samples = r.finite && r.growth_samples < opts.sample_limit;
  if (r.bound) r.within_bound = r.worst <= *r.bound && r.worst_more <= *r.bound && r.worst_refined <= *r.bound;
  const bool stable = r.stable_refinement && r.stable_samples;
  if (r.expected_failure) {
    r.status = stable ? CheckStatus::UnexpectedPass : CheckStatus::ExpectedFail;
  } else if (!r.finite || !r.within_bound) {
    r.status = CheckStatus::Fail;
  } else {
    r.status = stable ? CheckStatus::Pass : CheckStatus::Inconclusive;
  }
}

namespace {

struct RunMax {
  double worst = 0.0;
  double sampled = 0.0;  // before the search
  bool finite = true;
};

// (1+1) search from one sample: a proposal adds a perturbation step and is
// kept when it raises the ratio; the step size adapts by the 1/5 rule.
double ascend(const SampledCheck& check, const Grid& g, std::uint64_t sample, double start, int steps, bool& finite) {
  std::vector<Perturbation> path;
  double best = start, size = 0.25;
  for (int j = 0; j < steps; ++j) {
    path.push_back({static_cast<std::uint64_t>(j + 1), size});
    const SampleValue v = check.eval(Draw{g, sample, path}, false);
    if (!v.skip && !std::isfinite(v.ratio)) finite = false;
    if (!v.skip && v.ratio > best) {
      best = v.ratio;
      size = std::min(1.0, size * 1.5);
    } else {
      path.pop_back();
      size = std::max(1e-3, size * 0.85);
    }
  }
  return best;
}

RunMax search_run(const SampledCheck& check, const Grid& g, const std::vector<SampleValue>& v, std::size_t count,
                  const HarnessOptions& opts) {
  RunMax out;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < count; ++i) {
    if (v[i].skip) continue;
    if (!std::isfinite(v[i].ratio)) out.finite = false;
    else order.push_back(i);
    out.sampled = std::max(out.sampled, v[i].ratio);
  }
  const std::size_t c = std::min(order.size(), static_cast<std::size_t>(opts.ascent_candidates));
  std::partial_sort(order.begin(), order.begin() + c, order.end(), [&](std::size_t x, std::size_t y) {
    return v[x].ratio != v[y].ratio ? v[x].ratio > v[y].ratio : x < y;
  });
  std::vector<double> top(c);
  std::vector<char> fin(c, 1);
  parallel_for(c, [&](std::size_t j) {
    bool f = true;
    top[j] = ascend(check, g, order[j], v[order[j]].ratio, opts.ascent_steps, f);
    fin[j] = f;
  });
  out.worst = out.sampled;
  for (std::size_t j = 0; j < c; ++j) {
    out.worst = std::max(out.worst, top[j]);
    if (!fin[j]) out.finite = false;
  }
  return out;
}

}  // namespace

CheckResult run_sampled(const SampledCheck& check, const HarnessOptions& opts) {
  opts.validate();
  const int n = opts.n_samples;
  const int m = n * opts.sample_growth;
  std::vector<SampleValue> more(m), refined(n);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
    more[i] = check.eval(Draw{check.base, i, {}}, i < static_cast<std::size_t>(n));
  });
  parallel_for(static_cast<std::size_t>(n),
               [&](std::size_t i) { refined[i] = check.eval(Draw{check.refined, i, {}}, false); });
  const RunMax base_run = search_run(check, check.base, more, n, opts);
  const RunMax more_run = search_run(check, check.base, more, m, opts);
  const RunMax refined_run = search_run(check, check.refined, refined, n, opts);

  CheckResult r;
  r.id = check.id;
  r.anchor = check.anchor;
  r.description = check.description;
  r.refinement = check.refinement;
  r.expected_failure = check.expected_failure;
  r.bound = check.bound;
  r.n_samples = n;
  r.n_more = m;
  double aux = 0.0;
  std::vector<double> base_ratios;
  for (int i = 0; i < n; ++i) {
    const SampleValue& s = more[i];
    if (s.skip) {
      ++r.skipped;
      continue;
    }
    base_ratios.push_back(s.ratio);
    aux = std::max(aux, s.aux);
  }
  r.worst = base_run.worst;
  r.worst_more = more_run.worst;
  r.worst_refined = refined_run.worst;
  r.finite = base_run.finite && more_run.finite && refined_run.finite;
  r.extra.emplace_back("worst_ratio_before_search", base_run.sampled);
  r.histogram = log_histogram(base_ratios);
  finalize(r, opts);
  if (!check.aux_name.empty()) {
    r.extra.emplace_back(check.aux_name, aux);
    r.extra.emplace_back(check.aux_name + "_limit", check.aux_limit);
    if (!(aux <= check.aux_limit) && !r.expected_failure) {
      r.status = CheckStatus::Fail;
      r.note = check.aux_name + " above its limit";
    }
  }
  r.extra.emplace_back("grid_n", check.base.n);
  r.extra.emplace_back("grid_length", check.base.length);
  r.extra.emplace_back("refined_n", check.refined.n);
  r.extra.emplace_back("refined_length", check.refined.length);
  return r;
}

namespace {

nlohmann::ordered_json check_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["anchor"] = c.anchor;
  j["description"] = c.description;
  j["status"] = to_string(c.status);
  j["expected_failure"] = c.expected_failure;
  j["n_samples"] = c.n_samples;
  j["n_samples_more"] = c.n_more;
  j["skipped"] = c.skipped;
  j["worst_ratio"] = c.worst;
  j["worst_ratio_refined"] = c.worst_refined;
  j["worst_ratio_more_samples"] = c.worst_more;
  j["refinement"] = c.refinement;
  j["growth_refinement"] = c.growth_refinement;
  j["growth_samples"] = c.growth_samples;
  j["finite"] = c.finite;
  j["stable_refinement"] = c.stable_refinement;
  j["stable_samples"] = c.stable_samples;
  if (c.bound) {
    j["bound"] = *c.bound;
    j["within_bound"] = c.within_bound;
  }
  j["histogram_log10"] = {{"edges", c.histogram.edges}, {"counts", c.histogram.counts}};
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.extra) extra[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  j["extra"] = extra;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::ordered_json suite_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["n_samples"] = r.n_samples;
  j["passed"] = r.passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(check_json(c));
  return j;
}

}  // namespace

std::string to_json(const SuiteReport& r) { return suite_json(r).dump(2) + "\n"; }

std::string to_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json j;
  bool ok = true;
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    j["suites"].push_back(suite_json(r));
    ok = ok && r.passed();
  }
  j["passed"] = ok;
  return j.dump(2) + "\n";
}

}  // namespace bmhd::harness
