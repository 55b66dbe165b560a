#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace pucci {

enum class ValueType { real, integer, boolean, text, real_list };

using ConfigValue = std::variant<double, long long, bool, std::string, std::vector<double>>;

struct KeySpec {
  std::string name;
  ValueType type;
  ConfigValue fallback;
  std::string help;
};

/// Names of the subcommands, in display order.
const std::vector<std::string>& subcommands();

/// Accepted keys of a subcommand with their defaults. Throws InputError for
/// an unknown subcommand.
const std::vector<KeySpec>& schema(const std::string& subcommand);

/// Resolved parameters of one run: schema defaults, then a flat key = value
/// file, then individual overrides. Unknown keys and unparsable values throw
/// InputError naming the key.
class RunConfig {
 public:
  explicit RunConfig(std::string subcommand);

  const std::string& subcommand() const { return subcommand_; }

  /// Lines of "key = value"; '#' starts a comment; blank lines are skipped.
  /// `origin` prefixes error messages.
  void apply_text(const std::string& text, const std::string& origin);
  void apply_file(const std::string& path);
  /// Parses `value` according to the key's type.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& real_list(const std::string& key) const;
  std::uint64_t seed() const;

  /// Every key with its resolved value, in key order.
  nlohmann::json to_json() const;

 private:
  const KeySpec& spec(const std::string& key) const;
  const ConfigValue& value(const std::string& key, ValueType type) const;

  std::string subcommand_;
  std::map<std::string, ConfigValue> values_;
};

}  // namespace pucci
