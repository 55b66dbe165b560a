#include "pucci/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "pucci/errors.hpp"

namespace pucci {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void dump(const nlohmann::json& j, std::string& out, int depth) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        out += '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          dump(j[k], out, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        indent(out, depth + 1);
        dump(j[k], out, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j) {
  std::string out;
  dump(j, out, 0);
  out += '\n';
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open output file: " + path);
  f << text;
  if (!f) throw InputError("failed writing output file: " + path);
}

}  // namespace pucci
