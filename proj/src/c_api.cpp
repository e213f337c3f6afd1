#include "hypergodic/hypergodic.h"

#include <cstring>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "acceptance.hpp"
#include "averages.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "horoshell.hpp"
#include "runner.hpp"

struct hyg_group {
  hyg::GroupSpec spec;
};
struct hyg_measure {
  hyg::GroupMeasure measure;
};
struct hyg_action {
  hyg::FiniteAction action;
};
struct hyg_config {
  hyg::ExperimentConfig cfg;
};
struct hyg_report {
  hyg::RunReport report;
};

namespace {

thread_local std::string g_last_error;

hyg_status record(hyg_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
hyg_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return HYG_OK;
  } catch (const hyg::Error& e) {
    return record(static_cast<hyg_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::exception& e) {
    return record(HYG_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(HYG_ERR_INTERNAL, "unknown exception");
  }
}

hyg_status copy_out(const std::string& s, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || len < s.size() + 1) {
    if (buf && len > 0) buf[0] = '\0';
    return record(HYG_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return HYG_OK;
}

#define HYG_REQUIRE(p)                                                    \
  do {                                                                    \
    if (!(p)) return record(HYG_ERR_NULL_ARGUMENT, "null argument: " #p); \
  } while (0)

hyg_status string_result(const std::function<std::string()>& f, char* buf, size_t len, size_t* needed) {
  std::string s;
  const hyg_status st = guarded([&] { s = f(); });
  if (st != HYG_OK) return st;
  return copy_out(s, buf, len, needed);
}

}  // namespace

extern "C" {

const char* hyg_version(void) { return HYG_VERSION; }

const char* hyg_status_name(hyg_status s) {
  switch (s) {
    case HYG_OK: return "ok";
    case HYG_ERR_NULL_ARGUMENT: return "null-argument";
    case HYG_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case HYG_ERR_INTERNAL: return "internal";
    default:
      if (s >= 1 && s <= 10) return hyg::error_kind_name(static_cast<hyg::ErrorKind>(s));
      return "unknown";
  }
}

const char* hyg_last_error(void) { return g_last_error.c_str(); }

hyg_status hyg_group_new(const char* description, hyg_group** out) {
  HYG_REQUIRE(description);
  HYG_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new hyg_group{hyg::GroupSpec::from_string(description)}; });
}

void hyg_group_free(hyg_group* group) { delete group; }

hyg_status hyg_group_describe(const hyg_group* group, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(group);
  return copy_out(group->spec.describe(), buf, len, needed);
}

hyg_status hyg_word_multiply(const hyg_group* group, const char* x, const char* y, char* buf, size_t len,
                             size_t* needed) {
  HYG_REQUIRE(group && x && y);
  const auto& s = group->spec;
  return string_result([&] { return s.format(s.multiply(s.parse(x), s.parse(y))); }, buf, len, needed);
}

hyg_status hyg_word_inverse(const hyg_group* group, const char* x, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(group && x);
  const auto& s = group->spec;
  return string_result([&] { return s.format(s.invert(s.parse(x))); }, buf, len, needed);
}

hyg_status hyg_word_length(const hyg_group* group, const char* x, int* out) {
  HYG_REQUIRE(group && x && out);
  return guarded([&] { *out = group->spec.word_length(group->spec.parse(x)); });
}

hyg_status hyg_sphere_size(const hyg_group* group, int n, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(group);
  return string_result(
      [&] {
        if (n < 0) hyg::fail(hyg::ErrorKind::kPrecondition, "negative radius");
        return hyg::ConeAutomaton(group->spec).sphere_size(n).str();
      },
      buf, len, needed);
}

hyg_status hyg_growth_exponent(const hyg_group* group, double* out) {
  HYG_REQUIRE(group && out);
  return guarded([&] { *out = hyg::growth_exponent(hyg::ConeAutomaton(group->spec)).vhat; });
}

hyg_status hyg_delta_estimate(const hyg_group* group, int radius, uint64_t budget, uint64_t seed, int workers,
                              double* delta, int* exhaustive) {
  HYG_REQUIRE(group && delta);
  return guarded([&] {
    const auto c = hyg::estimate_delta(group->spec, radius, budget, seed, workers);
    *delta = c.delta_hat;
    if (exhaustive) *exhaustive = c.exhaustive ? 1 : 0;
  });
}

hyg_status hyg_horofunction(const hyg_group* group, const char* ray, const char* word, int* out) {
  HYG_REQUIRE(group && ray && word && out);
  return guarded([&] {
    *out = hyg::horofunction(group->spec, hyg::parse_ray(group->spec, ray), group->spec.parse(word));
  });
}

hyg_status hyg_r_lambda(const hyg_group* group, const char* word, const char* ray, int* out) {
  HYG_REQUIRE(group && ray && word && out);
  return guarded([&] {
    const hyg::CylinderMeasure m(group->spec);
    *out = hyg::r_lambda(m, group->spec.parse(word), hyg::parse_ray(group->spec, ray));
  });
}

hyg_status hyg_cylinder_measure(const hyg_group* group, const char* word, double* out) {
  HYG_REQUIRE(group && word && out);
  return guarded([&] {
    const hyg::CylinderMeasure m(group->spec);
    *out = m.value(group->spec.parse(word));
  });
}

hyg_status hyg_measure_new(const hyg_group* group, const char* family, int n, hyg_measure** out) {
  HYG_REQUIRE(group && family && out);
  *out = nullptr;
  return guarded([&] {
    const std::string f = family;
    const auto& s = group->spec;
    if (f == "sigma") *out = new hyg_measure{hyg::sigma(s, n)};
    else if (f == "sigma_prime") *out = new hyg_measure{hyg::sigma_prime(s, n)};
    else if (f == "mu") *out = new hyg_measure{hyg::mu(s, n)};
    else if (f == "beta") *out = new hyg_measure{hyg::beta(s, n)};
    else hyg::fail(hyg::ErrorKind::kMalformedInput, "unknown family '" + f + "'");
  });
}

hyg_status hyg_kappa_new(const hyg_group* group, int r, int a, int T, long samples, uint64_t seed, int workers,
                         hyg_measure** out) {
  HYG_REQUIRE(group && out);
  *out = nullptr;
  return guarded([&] {
    hyg::KappaOptions o;
    o.r = r;
    o.a = a;
    o.T = T;
    o.samples = samples;
    o.seed = seed;
    o.workers = workers;
    *out = new hyg_measure{hyg::kappa(group->spec, o).measure};
  });
}

void hyg_measure_free(hyg_measure* measure) { delete measure; }

hyg_status hyg_measure_weight(const hyg_measure* measure, const char* word, double* out) {
  HYG_REQUIRE(measure && word && out);
  return guarded([&] { *out = measure->measure.weight(measure->measure.spec().parse(word)); });
}

hyg_status hyg_measure_length_range(const hyg_measure* measure, int* min_length, int* max_length) {
  HYG_REQUIRE(measure && min_length && max_length);
  *min_length = measure->measure.min_length();
  *max_length = measure->measure.max_length();
  return HYG_OK;
}

hyg_status hyg_action_parity_new(const hyg_group* group, hyg_action** out) {
  HYG_REQUIRE(group && out);
  *out = nullptr;
  return guarded([&] { *out = new hyg_action{hyg::FiniteAction::parity(group->spec)}; });
}

hyg_status hyg_action_cyclic_new(const hyg_group* group, int n, const int* images, size_t count, hyg_action** out) {
  HYG_REQUIRE(group && out);
  HYG_REQUIRE(images || count == 0);
  *out = nullptr;
  return guarded([&] {
    *out = new hyg_action{hyg::FiniteAction::cyclic(group->spec, n, std::vector<int>(images, images + count))};
  });
}

void hyg_action_free(hyg_action* action) { delete action; }

size_t hyg_action_size(const hyg_action* action) { return action ? action->action.size() : 0; }

hyg_status hyg_apply(const hyg_measure* measure, const hyg_action* action, const double* f, size_t n, double* out) {
  HYG_REQUIRE(measure && action && f && out);
  if (n != action->action.size()) return record(HYG_ERR_MALFORMED_INPUT, "observable size differs from the space size");
  if (!(measure->measure.spec() == action->action.spec()))
    return record(HYG_ERR_MALFORMED_INPUT, "measure and action live on different groups");
  return guarded([&] {
    const auto v = hyg::apply_finite(measure->measure, action->action, hyg::Observable::table(std::vector<double>(f, f + n)));
    std::copy(v.begin(), v.end(), out);
  });
}

hyg_status hyg_gamma_count(const hyg_group* group, const char* ray, int t, int T, int r, char* buf, size_t len,
                           size_t* needed) {
  HYG_REQUIRE(group && ray);
  return string_result(
      [&] {
        const auto base = hyg::make_base(hyg::parse_ray(group->spec, ray), t, T);
        return hyg::gamma_count(group->spec, base, r).str();
      },
      buf, len, needed);
}

hyg_status hyg_config_parse(const char* text, hyg_config** out) {
  HYG_REQUIRE(text && out);
  *out = nullptr;
  return guarded([&] { *out = new hyg_config{hyg::parse_config(text)}; });
}

hyg_status hyg_config_load(const char* path, hyg_config** out) {
  HYG_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] { *out = new hyg_config{hyg::load_config(path)}; });
}

void hyg_config_free(hyg_config* config) { delete config; }

hyg_status hyg_config_serialize(const hyg_config* config, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(config);
  return string_result([&] { return hyg::serialize_config(config->cfg); }, buf, len, needed);
}

hyg_status hyg_config_override(hyg_config* config, const uint64_t* seed, int workers, const char* out_dir, int cap) {
  HYG_REQUIRE(config);
  return guarded([&] {
    hyg::ExperimentConfig c = config->cfg;
    if (seed) c.seed = *seed;
    if (workers >= 0) c.workers = workers;
    if (out_dir) c.out = out_dir;
    if (cap >= 0) c.cap = cap;
    hyg::validate_config(c);
    config->cfg = std::move(c);
  });
}

hyg_status hyg_config_filter_kind(hyg_config* config, const char* kind) {
  HYG_REQUIRE(config);
  if (!kind) return HYG_OK;
  std::erase_if(config->cfg.experiments, [&](const hyg::ExperimentSpec& e) { return e.kind != kind; });
  return HYG_OK;
}

size_t hyg_config_experiment_count(const hyg_config* config) { return config ? config->cfg.experiments.size() : 0; }

hyg_status hyg_config_out_dir(const hyg_config* config, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(config);
  return copy_out(config->cfg.out, buf, len, needed);
}

hyg_status hyg_run(const hyg_config* config, hyg_report** out) {
  HYG_REQUIRE(config && out);
  *out = nullptr;
  return guarded([&] { *out = new hyg_report{hyg::run(config->cfg)}; });
}

hyg_status hyg_verify(int cap, uint64_t seed, int workers, const char* only, hyg_report** out) {
  HYG_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    hyg::VerifyOptions o;
    o.cap = cap;
    o.seed = seed;
    o.workers = workers < 1 ? 1 : workers;
    if (only) {
      std::stringstream ss(only);
      std::string id;
      while (std::getline(ss, id, ','))
        if (!id.empty()) o.only.push_back(id);
    }
    *out = new hyg_report{hyg::verify(o)};
  });
}

void hyg_report_free(hyg_report* report) { delete report; }

int hyg_report_exit_code(const hyg_report* report) { return report ? report->report.exit_code() : 1; }

hyg_status hyg_report_json(const hyg_report* report, char* buf, size_t len, size_t* needed) {
  HYG_REQUIRE(report);
  return string_result([&] { return report->report.to_json(); }, buf, len, needed);
}

hyg_status hyg_report_write(const hyg_report* report, const char* dir) {
  HYG_REQUIRE(report && dir);
  return guarded([&] { report->report.write(dir); });
}

size_t hyg_report_verdict_count(const hyg_report* report) { return report ? report->report.verdicts.size() : 0; }

hyg_status hyg_report_verdict(const hyg_report* report, size_t i, const char** id, hyg_verdict* verdict,
                              const char** detail, double* seconds) {
  HYG_REQUIRE(report);
  if (i >= report->report.verdicts.size()) return record(HYG_ERR_PRECONDITION, "verdict index out of range");
  const auto& v = report->report.verdicts[i];
  if (id) *id = v.id.c_str();
  if (verdict) *verdict = static_cast<hyg_verdict>(static_cast<int>(v.status));
  if (detail) *detail = v.detail.c_str();
  if (seconds) *seconds = v.seconds;
  return HYG_OK;
}

size_t hyg_report_experiment_count(const hyg_report* report) {
  return report ? report->report.experiments.size() : 0;
}

hyg_status hyg_report_experiment(const hyg_report* report, size_t i, const char** name, const char** kind,
                                 const char** error) {
  HYG_REQUIRE(report);
  if (i >= report->report.experiments.size()) return record(HYG_ERR_PRECONDITION, "experiment index out of range");
  const auto& e = report->report.experiments[i];
  if (name) *name = e.name.c_str();
  if (kind) *kind = e.kind.c_str();
  if (error) *error = e.error ? e.error->c_str() : nullptr;
  return HYG_OK;
}

size_t hyg_report_table_count(const hyg_report* report, size_t experiment) {
  if (!report || experiment >= report->report.experiments.size()) return 0;
  return report->report.experiments[experiment].tables.size();
}

hyg_status hyg_report_table(const hyg_report* report, size_t experiment, size_t table, const char** name,
                            const char** csv) {
  HYG_REQUIRE(report);
  if (experiment >= report->report.experiments.size() ||
      table >= report->report.experiments[experiment].tables.size())
    return record(HYG_ERR_PRECONDITION, "table index out of range");
  const auto& t = report->report.experiments[experiment].tables[table];
  if (name) *name = t.name.c_str();
  if (csv) *csv = t.text.c_str();
  return HYG_OK;
}

}  // extern "C"
