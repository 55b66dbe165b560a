#include "pucci/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pucci/errors.hpp"

namespace pucci {

namespace {

using T = ValueType;
using List = std::vector<double>;

std::vector<KeySpec> with_common(double tol, std::vector<KeySpec> keys) {
  keys.push_back({"seed", T::integer, 0LL, "random seed"});
  keys.push_back({"tol", T::real, tol, "tolerance of the checked assertions"});
  std::sort(keys.begin(), keys.end(), [](const KeySpec& a, const KeySpec& b) { return a.name < b.name; });
  return keys;
}

std::vector<KeySpec> model_keys(double h, long long width, double delta) {
  return {
      {"lambda", T::real, 1.0, "lower ellipticity constant"},
      {"Lambda", T::real, 1.0, "upper ellipticity constant"},
      {"p", T::integer, 2LL, "order of the operator (1 or 2 on the grid)"},
      {"b", T::real, 0.0, "gradient coefficient"},
      {"c", T::real, 0.0, "zero-order coefficient"},
      {"delta", T::real, delta, "radius of the disk"},
      {"h", T::real, h, "grid spacing"},
      {"stencil_width", T::integer, width, "stencil width m"},
      {"max_iter", T::integer, 2000000LL, "iteration cap of the Jacobi solver"},
      {"f_const", T::real, 0.0, "constant right-hand side"},
  };
}

std::vector<KeySpec> concat(std::vector<KeySpec> a, const std::vector<KeySpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::map<std::string, std::vector<KeySpec>>& all_schemas() {
  static const std::map<std::string, std::vector<KeySpec>> s = {
      {"ops-properties",
       with_common(1e-9, {
                             {"samples", T::integer, 1000LL, "number of random matrices"},
                             {"n_min", T::integer, 2LL, "smallest dimension"},
                             {"n_max", T::integer, 5LL, "largest dimension"},
                             {"frames", T::integer, 200LL, "random frames per matrix"},
                             {"input", T::text, std::string(), "JSON file of extra matrices"},
                         })},
      {"radial-suite",
       with_common(1e-10, {
                              {"eps_list", T::real_list, List{}, "sine-cap parameters; empty selects 20 in (0, pi/6)"},
                              {"radii", T::integer, 1000LL, "radii per counterexample annulus"},
                              {"fundamental_radii", T::integer, 100LL, "radii per fundamental-solution check"},
                              {"barrier_radii", T::integer, 200LL, "radii per barrier check"},
                          })},
      {"capacity-suite",
       with_common(0.05, {
                             {"set", T::text, std::string("point"), "point, point_cloud, segment, circle or cantor"},
                             {"alpha", T::real, 0.0, "Riesz exponent"},
                             {"d", T::real, 1.0, "radius of the ball containing the set"},
                             {"n", T::integer, 2LL, "ambient dimension"},
                             {"resolutions", T::real_list, List{16, 32, 64, 128, 256, 512, 1024}, "atom counts"},
                             {"iterations", T::integer, 200000LL, "Frank-Wolfe iteration cap"},
                             {"fw_tol", T::real, 1e-10, "Frank-Wolfe gap tolerance"},
                             {"variant", T::text, std::string("pairwise"), "pairwise or classic"},
                             {"level", T::integer, 10LL, "Cantor construction level"},
                             {"radius", T::real, 0.5, "circle radius"},
                             {"expect", T::text, std::string("auto"), "diverge, converge or auto"},
                         })},
      {"potential-check",
       with_common(1e-8, {
                             {"set", T::text, std::string("cantor"), "segment, circle or cantor"},
                             {"atoms", T::integer, 100LL, "number of atoms"},
                             {"level", T::integer, 7LL, "Cantor construction level"},
                             {"measure", T::text, std::string("equilibrium"), "equilibrium or uniform"},
                             {"alpha", T::real, 0.5, "Riesz exponent"},
                             {"b", T::real, 1.0, "gradient coefficient"},
                             {"lambda", T::real, 1.0, "lower ellipticity constant"},
                             {"Lambda", T::real, 1.0, "upper ellipticity constant"},
                             {"p", T::integer, 3LL, "order of the operator"},
                             {"n", T::integer, 3LL, "ambient dimension"},
                             {"d", T::real, 1.0, "radius of the ball containing the set"},
                             {"points", T::integer, 1000LL, "random evaluation points"},
                             {"fd_points", T::integer, 100LL, "points for the finite-difference Hessian check"},
                         })},
      {"solve",
       with_common(1e-9, concat(model_keys(1.0 / 64.0, 1, 1.0),
                                {
                                    {"domain", T::text, std::string("disk"), "disk, annulus or rectangle"},
                                    {"r_in", T::real, 0.25, "inner radius of the annulus"},
                                    {"boundary", T::text, std::string("zero"), "zero, quadratic, harmonic or sine_cap"},
                                    {"mode", T::text, std::string("solve"), "solve or counterexample"},
                                    {"eps", T::real, 0.39269908169872414, "sine-cap parameter"},
                                    {"allow_unstable", T::boolean, false, "permit c = 0 with b delta >= lambda p"},
                                }))},
      {"emp",
       with_common(1e-9, concat(model_keys(1.0 / 64.0, 1, 1.0),
                                {
                                    {"puncture", T::boolean, true, "puncture the boundary at (0, delta)"},
                                    {"spike", T::real, 2.0, "boundary value at the puncture"},
                                    {"eps_list", T::real_list, List{1.0, 0.1, 0.01}, "perturbation sizes"},
                                }))},
      {"removability",
       with_common(1e-9, concat(model_keys(1.0 / 64.0, 1, 1.0),
                                {
                                    {"r_in_list", T::real_list, List{0.2, 0.1, 0.05, 0.025}, "inner radii"},
                                    {"coarse_h", T::real, 0.0, "spacing of the coarse solve; 0 means 2 h"},
                                    {"inner_offset", T::real, 0.0, "added to the frozen inner data"},
                                    {"probe_radius", T::real, 0.5, "radius of the probe circle"},
                                    {"probes", T::integer, 8LL, "number of probes"},
                                }))},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw InputError("key '" + key + "': expected a finite real, got '" + s + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InputError("key '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

bool parse_boolean(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InputError("key '" + key + "': expected true or false, got '" + s + "'");
}

List parse_list(const std::string& key, const std::string& s) {
  List out;
  const std::string t = trim(s);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"ops-properties", "radial-suite", "capacity-suite", "potential-check",
                                                 "solve",          "emp",          "removability"};
  return names;
}

const std::vector<KeySpec>& schema(const std::string& subcommand) {
  const auto& s = all_schemas();
  const auto it = s.find(subcommand);
  if (it == s.end()) throw InputError("unknown subcommand '" + subcommand + "'");
  return it->second;
}

RunConfig::RunConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {
  for (const KeySpec& k : schema(subcommand_)) values_[k.name] = k.fallback;
}

const KeySpec& RunConfig::spec(const std::string& key) const {
  for (const KeySpec& k : schema(subcommand_))
    if (k.name == key) return k;
  throw InputError("unknown key '" + key + "' for subcommand " + subcommand_);
}

void RunConfig::set(const std::string& key, const std::string& v) {
  const KeySpec& k = spec(key);
  switch (k.type) {
    case T::real: values_[key] = parse_real(key, v); break;
    case T::integer: values_[key] = parse_integer(key, v); break;
    case T::boolean: values_[key] = parse_boolean(key, v); break;
    case T::text: values_[key] = trim(v); break;
    case T::real_list: values_[key] = parse_list(key, v); break;
  }
}

void RunConfig::apply_text(const std::string& text, const std::string& origin) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const InputError& e) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::apply_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  apply_text(ss.str(), path);
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

const ConfigValue& RunConfig::value(const std::string& key, ValueType type) const {
  const KeySpec& k = spec(key);
  if (k.type != type) throw InputError("key '" + key + "' accessed with the wrong type");
  return values_.at(key);
}

double RunConfig::real(const std::string& key) const { return std::get<double>(value(key, T::real)); }
long long RunConfig::integer(const std::string& key) const { return std::get<long long>(value(key, T::integer)); }
bool RunConfig::boolean(const std::string& key) const { return std::get<bool>(value(key, T::boolean)); }
const std::string& RunConfig::text(const std::string& key) const { return std::get<std::string>(value(key, T::text)); }
const std::vector<double>& RunConfig::real_list(const std::string& key) const {
  return std::get<List>(value(key, T::real_list));
}

std::uint64_t RunConfig::seed() const {
  const long long s = integer("seed");
  if (s < 0) throw InputError("seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, v] : values_) std::visit([&](const auto& x) { j[key] = x; }, v);
  return j;
}

}  // namespace pucci
