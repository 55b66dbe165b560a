// pucci: runs one experiment per invocation and prints a JSON report.
// Exit status: 0 when every checked assertion holds, 1 when one fails,
// 2 for usage, input or parameter errors.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pucci/errors.hpp"
#include "pucci/json_io.hpp"
#include "pucci/run_config.hpp"
#include "pucci/suites.hpp"

namespace {

struct Flags {
  std::optional<long long> seed;
  std::optional<double> tol;
  std::string out = "-";
  std::string config;
  std::string csv;
  std::string input;
  std::vector<std::string> overrides;
  bool show_keys = false;
};

const char* type_name(pucci::ValueType t) {
  switch (t) {
    case pucci::ValueType::real: return "real";
    case pucci::ValueType::integer: return "integer";
    case pucci::ValueType::boolean: return "boolean";
    case pucci::ValueType::text: return "text";
    case pucci::ValueType::real_list: return "list";
  }
  return "?";
}

void print_keys(const std::string& sub) {
  for (const pucci::KeySpec& k : pucci::schema(sub)) {
    std::string fallback;
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, double>) fallback = pucci::format_double(v);
          else if constexpr (std::is_same_v<V, std::string>) fallback = v;
          else if constexpr (std::is_same_v<V, bool>) fallback = v ? "true" : "false";
          else if constexpr (std::is_same_v<V, std::vector<double>>) {
            for (std::size_t i = 0; i < v.size(); ++i) fallback += (i ? "," : "") + pucci::format_double(v[i]);
          } else fallback = std::to_string(v);
        },
        k.fallback);
    std::printf("%-18s %-8s %-24s %s\n", k.name.c_str(), type_name(k.type), fallback.c_str(), k.help.c_str());
  }
}

int run(const std::string& sub, const Flags& f) {
  if (f.show_keys) {
    print_keys(sub);
    return 0;
  }
  pucci::RunConfig cfg(sub);
  if (!f.config.empty()) cfg.apply_file(f.config);
  for (const std::string& o : f.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw pucci::InputError("--set expects key=value, got '" + o + "'");
    cfg.set(o.substr(0, eq), o.substr(eq + 1));
  }
  if (f.seed) cfg.set("seed", std::to_string(*f.seed));
  if (f.tol) cfg.set("tol", pucci::format_double(*f.tol));
  if (!f.input.empty()) cfg.set("input", f.input);

  const pucci::SuiteResult result = pucci::run_subcommand(cfg);
  pucci::write_text(f.out, pucci::dump_json(pucci::envelope(cfg, result)));
  if (!f.csv.empty()) pucci::write_text(f.csv, result.csv);
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal operators of order p: property suites, radial checks, capacities and a wide-stencil solver"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;
  for (const std::string& name : pucci::subcommands()) {
    Flags& f = flags[name];
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--tol", f.tol, "tolerance of the checked assertions");
    sub->add_option("--out", f.out, "JSON report path ('-' for stdout)");
    sub->add_option("--config", f.config, "flat key = value file")->check(CLI::ExistingFile);
    sub->add_option("--set", f.overrides, "override one key (key=value), repeatable");
    sub->add_option("--csv", f.csv, "CSV output path (field or weights)");
    sub->add_flag("--keys", f.show_keys, "list accepted keys with defaults and exit");
    if (name == "ops-properties") sub->add_option("--input", f.input, "JSON file of extra matrices");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, flags[sub]);
  } catch (const pucci::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
  } catch (const pucci::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
  } catch (const pucci::DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << '\n';
  } catch (const pucci::BlowUpError& e) {
    std::cerr << "singular evaluation: " << e.what() << '\n';
  }
  return 2;
}
