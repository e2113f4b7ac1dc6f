#include "depkern/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "depkern/error.hpp"

namespace depkern {

std::string fmt_double(double v) {
  require(std::isfinite(v), ErrorKind::internal, "refusing to serialize a non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void escape_to(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

void dump_rec(const ordered_json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::detail::value_t::null: out += "null"; break;
    case nlohmann::detail::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case nlohmann::detail::value_t::number_float: out += fmt_double(j.get<double>()); break;
    case nlohmann::detail::value_t::string: escape_to(j.get<std::string>(), out); break;
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out += pad_in;
        dump_rec(j[k], out, depth + 1);
        if (k + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      break;
    }
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad_in;
        escape_to(it.key(), out);
        out += ": ";
        dump_rec(it.value(), out, depth + 1);
        if (k + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      break;
    }
    default: fail(ErrorKind::internal, "unsupported json node");
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace depkern
