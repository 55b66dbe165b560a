#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace pucci {

/// "%.17g" rendering, which round-trips every finite double. Non-finite
/// values render as "nan", "inf" and "-inf".
std::string format_double(double v);

/// Pretty-printed JSON (2-space indent, keys in sorted order) with every
/// floating value written at 17 significant digits and non-finite values as
/// null. Integers stay integers.
std::string dump_json(const nlohmann::json& j);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
/// Throws InputError if the file cannot be written.
void write_text(const std::string& path, const std::string& text);

}  // namespace pucci
