#include "gavms/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gavms {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::convergence: return "convergence";
    case Experiment::energy: return "energy";
    case Experiment::step: return "step";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::convergence, Experiment::energy, Experiment::step})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

double RunConfig::h_for(int n) const { return mesh_kind == MeshKind::step ? mesh_h : 1.0 / n; }

SchemeConfig RunConfig::scheme_config(SchemeKind kind, int n) const {
  SchemeConfig c;
  c.scheme = kind;
  c.nu1 = nu1;
  c.nu2 = nu2;
  c.kappa = kappa;
  c.nu_t = nu_t_is_h ? h_for(n) : nu_t;
  c.dt = dt_is_inverse_n ? 1.0 / n : dt;
  c.t_end = t_end;
  c.picard_tol = picard_tol;
  c.picard_max = picard_max;
  c.convection = convection;
  return c;
}

RunConfig defaults_for(Experiment experiment) {
  RunConfig c;
  c.experiment = experiment;
  switch (experiment) {
    case Experiment::convergence:
      break;
    case Experiment::energy:
      c.nu1 = 1.5e-3;
      c.nu2 = 1e-4;
      c.kappa = 1e-3;
      c.dt = 0.01;
      c.dt_is_inverse_n = false;
      c.t_end = 10.0;
      c.mesh_n = 32;
      c.schemes = {SchemeKind::ga, SchemeKind::ga_vms};
      break;
    case Experiment::step:
      c.nu1 = 5e-4;
      c.nu2 = 5e-3;
      c.kappa = 2.45e-3;
      c.nu_t = 0.01;
      c.nu_t_is_h = false;
      c.dt = 0.01;
      c.dt_is_inverse_n = false;
      c.t_end = 40.0;
      c.mesh_kind = MeshKind::step;
      c.mesh_h = 0.14;
      c.schemes = {SchemeKind::ga, SchemeKind::ga_vms};
      c.snapshot_every = 1000;
      break;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_plain(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + text + "' is not a number");
  return v;
}

// Accepts decimal numbers and simple fractions such as 1/32.
double parse_number(const std::string& key, const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain(key, text);
  const double den = parse_plain(key, trim(text.substr(slash + 1)));
  if (den == 0.0) throw ConfigError(key + ": division by zero");
  return parse_plain(key, trim(text.substr(0, slash))) / den;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + text + "' is not an integer");
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto number = [](double RunConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_number(k, v); });
  };
  auto integer = [](int RunConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_int(k, v); });
  };
  static const std::map<std::string, Setter> table = {
      {"scheme",
       [](RunConfig& c, const std::string&, const std::string& v) {
         try {
           c.scheme = parse_scheme(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
         c.schemes = {c.scheme};
       }},
      {"schemes",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.schemes.clear();
         try {
           for (const std::string& s : split_list(v)) c.schemes.push_back(parse_scheme(s));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
         if (c.schemes.empty()) throw ConfigError(k + ": empty list");
         c.scheme = c.schemes.front();
       }},
      {"nu1", number(&RunConfig::nu1)},
      {"nu2", number(&RunConfig::nu2)},
      {"kappa", number(&RunConfig::kappa)},
      {"nu_t",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.nu_t_is_h = v == "h";
         if (!c.nu_t_is_h) c.nu_t = parse_number(k, v);
       }},
      {"dt",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dt_is_inverse_n = v == "1/N";
         if (!c.dt_is_inverse_n) c.dt = parse_number(k, v);
       }},
      {"t_end", number(&RunConfig::t_end)},
      {"a", number(&RunConfig::a)},
      {"b", number(&RunConfig::b)},
      {"mesh.kind",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "two-square")
           c.mesh_kind = MeshKind::two_square;
         else if (v == "step")
           c.mesh_kind = MeshKind::step;
         else
           throw ConfigError(k + ": expected two-square or step, got '" + v + "'");
       }},
      {"mesh.n", integer(&RunConfig::mesh_n)},
      {"mesh.h", number(&RunConfig::mesh_h)},
      {"experiment", [](RunConfig&, const std::string&, const std::string&) {}},
      {"refinement",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.refinement.clear();
         for (const std::string& s : split_list(v)) c.refinement.push_back(parse_int(k, s));
       }},
      {"picard.tol", number(&RunConfig::picard_tol)},
      {"picard.max", integer(&RunConfig::picard_max)},
      {"convection",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "skew")
           c.convection = ConvectionForm::skew;
         else if (v == "raw")
           c.convection = ConvectionForm::raw;
         else
           throw ConfigError(k + ": expected skew or raw, got '" + v + "'");
       }},
      {"bootstrap",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "exact")
           c.exact_second_level = true;
         else if (v == "imex")
           c.exact_second_level = false;
         else
           throw ConfigError(k + ": expected exact or imex, got '" + v + "'");
       }},
      {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"snapshot.every", integer(&RunConfig::snapshot_every)},
      {"inflow", number(&RunConfig::inflow)},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const Experiment* experiment) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!setters().count(key)) throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(number) + ": empty value for '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    entries.emplace_back(key, value);
  }

  Experiment chosen = experiment ? *experiment : Experiment::convergence;
  for (const auto& [key, value] : entries) {
    if (key != "experiment") continue;
    const Experiment named = parse_experiment(value);
    if (experiment && named != *experiment)
      throw ConfigError("config is for the " + value + " experiment, not " + to_string(*experiment));
    chosen = named;
  }

  RunConfig config = defaults_for(chosen);
  for (const auto& [key, value] : entries) setters().at(key)(config, key, value);
  if (config.schemes.empty()) config.schemes = {config.scheme};
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path, const Experiment* experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), experiment);
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.nu1 > 0.0) || !(c.nu2 > 0.0)) fail("viscosities must be positive");
  if (!(c.kappa >= 0.0)) fail("kappa must be non-negative");
  if (!c.nu_t_is_h && !(c.nu_t >= 0.0)) fail("nu_t must be non-negative");
  if (!c.dt_is_inverse_n && !(c.dt > 0.0)) fail("dt must be positive");
  if (!(c.t_end > 0.0)) fail("t_end must be positive");
  if (!(c.a > 0.0)) fail("a must be positive");
  if (!(c.b >= 0.0)) fail("b must be non-negative");
  if (!(c.picard_tol > 0.0)) fail("picard.tol must be positive");
  if (c.picard_max < 1) fail("picard.max must be at least 1");
  if (c.snapshot_every < 0) fail("snapshot.every must be non-negative");
  if (c.mesh_kind == MeshKind::two_square && c.mesh_n < 1) fail("mesh.n must be positive");
  if (c.mesh_kind == MeshKind::step && !(c.mesh_h > 0.0)) fail("mesh.h must be positive");
  if (c.experiment == Experiment::convergence) {
    if (c.mesh_kind != MeshKind::two_square) fail("convergence studies use the two-square mesh");
    if (c.refinement.empty()) fail("refinement list is empty");
    for (std::size_t k = 0; k < c.refinement.size(); ++k) {
      if (c.refinement[k] < 1) fail("refinement levels must be positive");
      if (k > 0 && c.refinement[k] != 2 * c.refinement[k - 1]) fail("refinement levels must double");
    }
  }
  if (c.experiment == Experiment::energy && c.mesh_kind != MeshKind::two_square)
    fail("the energy experiment uses the two-square mesh");
  if (c.experiment == Experiment::step && c.mesh_kind != MeshKind::step) fail("the step experiment uses the step mesh");
  if (c.dt_is_inverse_n && c.experiment != Experiment::convergence && c.mesh_kind == MeshKind::step)
    fail("dt = 1/N needs a two-square mesh");
}

}  // namespace gavms
