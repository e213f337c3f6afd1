#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace hyg {

bool ObservableSpec::operator==(const ObservableSpec& o) const {
  if (table != o.table || trig != o.trig || constant != o.constant || terms.size() != o.terms.size()) return false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].k != o.terms[i].k || terms[i].amplitude != o.terms[i].amplitude || terms[i].phase != o.terms[i].phase)
      return false;
  }
  return true;
}

bool is_monte_carlo(const std::string& kind) {
  return kind == "horoshell" || kind == "kappa-ergodic" || kind == "domination";
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::kConfig, path + ": " + what);
}

template <class T>
T scalar(const YAML::Node& n, const std::string& path, const char* expected) {
  if (!n.IsScalar()) config_error(path, std::string("expected ") + expected);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    config_error(path, std::string("expected ") + expected + ", got '" + n.Scalar() + "'");
  }
}

void check_keys(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) config_error(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

ObservableSpec parse_observable(const YAML::Node& n, const std::string& path) {
  ObservableSpec o;
  if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i)
      o.table.push_back(scalar<double>(n[i], path + "[" + std::to_string(i) + "]", "number"));
    if (o.table.empty()) config_error(path, "empty table");
    return o;
  }
  if (!n.IsMap()) config_error(path, "expected a list of values or a map with constant/terms");
  check_keys(n, path, {"constant", "terms"});
  o.trig = true;
  if (n["constant"]) o.constant = scalar<double>(n["constant"], join(path, "constant"), "number");
  if (n["terms"]) {
    const YAML::Node terms = n["terms"];
    if (!terms.IsSequence()) config_error(join(path, "terms"), "expected a list of [k, amplitude, phase]");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tp = join(path, "terms") + "[" + std::to_string(i) + "]";
      if (!terms[i].IsSequence() || terms[i].size() != 3) config_error(tp, "expected [k, amplitude, phase]");
      o.terms.push_back(TrigTerm{scalar<int>(terms[i][0], tp + "[0]", "integer"),
                                 scalar<double>(terms[i][1], tp + "[1]", "number"),
                                 scalar<double>(terms[i][2], tp + "[2]", "number")});
    }
  }
  return o;
}

ExperimentSpec parse_experiment(const YAML::Node& n, const std::string& path) {
  if (!n.IsMap()) config_error(path, "expected a map");
  check_keys(n, path,
             {"name", "kind", "group", "action", "observables", "family", "r_min", "r_max", "T", "a", "b", "depth",
              "bases", "samples", "seed", "theta", "bound"});
  ExperimentSpec e;
  if (!n["kind"]) config_error(join(path, "kind"), "missing");
  e.kind = scalar<std::string>(n["kind"], join(path, "kind"), "string");
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), e.kind) == kinds.end()) config_error(join(path, "kind"), "unknown kind '" + e.kind + "'");
  e.name = n["name"] ? scalar<std::string>(n["name"], join(path, "name"), "string") : e.kind;
  if (n["group"]) e.group = scalar<std::string>(n["group"], join(path, "group"), "string");
  if (n["action"]) e.action = scalar<std::string>(n["action"], join(path, "action"), "string");
  if (n["family"]) e.family = scalar<std::string>(n["family"], join(path, "family"), "string");
  auto int_field = [&](const char* key, int& dst) {
    if (n[key]) dst = scalar<int>(n[key], join(path, key), "integer");
  };
  int_field("r_min", e.r_min);
  int_field("r_max", e.r_max);
  int_field("T", e.T);
  int_field("a", e.a);
  int_field("b", e.b);
  int_field("depth", e.depth);
  int_field("bases", e.bases);
  if (n["samples"]) e.samples = scalar<long>(n["samples"], join(path, "samples"), "integer");
  if (n["seed"]) e.seed = scalar<std::uint64_t>(n["seed"], join(path, "seed"), "unsigned integer");
  if (n["theta"]) e.theta = scalar<double>(n["theta"], join(path, "theta"), "number");
  if (n["bound"]) e.bound = scalar<double>(n["bound"], join(path, "bound"), "number");
  if (n["observables"]) {
    const YAML::Node obs = n["observables"];
    if (!obs.IsSequence()) config_error(join(path, "observables"), "expected a list");
    for (std::size_t i = 0; i < obs.size(); ++i)
      e.observables.push_back(parse_observable(obs[i], join(path, "observables") + "[" + std::to_string(i) + "]"));
  }
  return e;
}

void emit_double(YAML::Emitter& out, double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  out << YAML::Value << os.str();
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.workers < 1) config_error("workers", "must be at least 1");
  if (cfg.cap < 0) config_error("cap", "must be non-negative");
  std::set<std::string> names;
  for (std::size_t i = 0; i < cfg.experiments.size(); ++i) {
    const ExperimentSpec& e = cfg.experiments[i];
    const std::string p = "experiments[" + std::to_string(i) + "]";
    if (!names.insert(e.name).second) config_error(join(p, "name"), "duplicate experiment name '" + e.name + "'");
    if (e.name.empty() || e.name.find_first_of("/\\") != std::string::npos)
      config_error(join(p, "name"), "must be a non-empty file-name-safe string");
    try {
      (void)GroupSpec::from_string(e.group);
    } catch (const Error& err) {
      config_error(join(p, "group"), err.what());
    }
    if (e.r_min < 0) config_error(join(p, "r_min"), "must be non-negative");
    if (e.r_max < e.r_min) config_error(join(p, "r_max"), "must be at least r_min");
    if (e.r_max > cfg.cap) config_error(join(p, "r_max"), "exceeds cap " + std::to_string(cfg.cap));
    if (e.T < 1) config_error(join(p, "T"), "must be positive");
    if (e.a < 1) config_error(join(p, "a"), "must be positive");
    if (e.b < 1) config_error(join(p, "b"), "must be positive");
    if (e.depth < 0) config_error(join(p, "depth"), "must be non-negative");
    if (e.bases < 1) config_error(join(p, "bases"), "must be positive");
    if (e.samples < 1) config_error(join(p, "samples"), "must be positive");
    static const std::set<std::string> families{"sigma", "sigma_prime", "mu", "beta"};
    if (!families.count(e.family)) config_error(join(p, "family"), "unknown family '" + e.family + "'");
    if (is_monte_carlo(e.kind) && !e.seed && !cfg.seed)
      config_error(join(p, "seed"), "Monte Carlo experiments need a seed (here or at top level)");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::kConfig, std::string("syntax: ") + e.what());
  }
  ExperimentConfig cfg;
  if (root.IsNull()) {
    validate_config(cfg);
    return cfg;
  }
  if (!root.IsMap()) config_error("(root)", "expected a map");
  check_keys(root, "", {"seed", "workers", "out", "cap", "experiments"});
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed", "unsigned integer");
  if (root["workers"]) cfg.workers = scalar<int>(root["workers"], "workers", "integer");
  if (root["out"]) cfg.out = scalar<std::string>(root["out"], "out", "string");
  if (root["cap"]) cfg.cap = scalar<int>(root["cap"], "cap", "integer");
  if (root["experiments"]) {
    const YAML::Node ex = root["experiments"];
    if (!ex.IsSequence()) config_error("experiments", "expected a list");
    for (std::size_t i = 0; i < ex.size(); ++i)
      cfg.experiments.push_back(parse_experiment(ex[i], "experiments[" + std::to_string(i) + "]"));
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  if (cfg.seed) out << YAML::Key << "seed" << YAML::Value << *cfg.seed;
  out << YAML::Key << "workers" << YAML::Value << cfg.workers;
  out << YAML::Key << "out" << YAML::Value << YAML::DoubleQuoted << cfg.out;
  out << YAML::Key << "cap" << YAML::Value << cfg.cap;
  out << YAML::Key << "experiments" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : cfg.experiments) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << e.name;
    out << YAML::Key << "kind" << YAML::Value << e.kind;
    out << YAML::Key << "group" << YAML::Value << YAML::DoubleQuoted << e.group;
    out << YAML::Key << "action" << YAML::Value << YAML::DoubleQuoted << e.action;
    out << YAML::Key << "family" << YAML::Value << e.family;
    out << YAML::Key << "r_min" << YAML::Value << e.r_min;
    out << YAML::Key << "r_max" << YAML::Value << e.r_max;
    out << YAML::Key << "T" << YAML::Value << e.T;
    out << YAML::Key << "a" << YAML::Value << e.a;
    out << YAML::Key << "b" << YAML::Value << e.b;
    out << YAML::Key << "depth" << YAML::Value << e.depth;
    out << YAML::Key << "bases" << YAML::Value << e.bases;
    out << YAML::Key << "samples" << YAML::Value << e.samples;
    if (e.seed) out << YAML::Key << "seed" << YAML::Value << *e.seed;
    if (e.theta) {
      out << YAML::Key << "theta";
      emit_double(out, *e.theta);
    }
    if (e.bound) {
      out << YAML::Key << "bound";
      emit_double(out, *e.bound);
    }
    if (!e.observables.empty()) {
      out << YAML::Key << "observables" << YAML::Value << YAML::BeginSeq;
      for (const auto& o : e.observables) {
        if (!o.trig) {
          out << YAML::Flow << YAML::BeginSeq;
          for (double v : o.table) emit_double(out, v);
          out << YAML::EndSeq;
          continue;
        }
        out << YAML::BeginMap << YAML::Key << "constant";
        emit_double(out, o.constant);
        out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
        for (const auto& t : o.terms) {
          out << YAML::Flow << YAML::BeginSeq << t.k;
          emit_double(out, t.amplitude);
          emit_double(out, t.phase);
          out << YAML::EndSeq;
        }
        out << YAML::EndSeq << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

PmpAction make_action(const GroupSpec& spec, const std::string& text) {
  if (text == "parity") return PmpAction(FiniteAction::parity(spec));
  if (text == "circle") return PmpAction(CircleAction::circle_pair(spec, true));
  if (text.rfind("cyclic:", 0) == 0) {
    const auto colon = text.find(':', 7);
    if (colon == std::string::npos) fail(ErrorKind::kConfig, "action: expected cyclic:N:i1,i2,...");
    int n = 0;
    std::vector<int> images;
    try {
      n = std::stoi(text.substr(7, colon - 7));
      std::stringstream ss(text.substr(colon + 1));
      std::string item;
      while (std::getline(ss, item, ',')) images.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(ErrorKind::kConfig, "action: malformed '" + text + "'");
    }
    return PmpAction(FiniteAction::cyclic(spec, n, images));
  }
  fail(ErrorKind::kConfig, "action: unknown action '" + text + "' (parity, circle, cyclic:N:...)");
}

Observable make_observable(const ObservableSpec& o, const std::string& name) {
  if (o.trig) return Observable::trig(o.constant, o.terms, name);
  return Observable::table(o.table, name);
}

}  // namespace hyg
