#pragma once

#include <string>

#include <json.hpp>

namespace depkern {

using ordered_json = nlohmann::ordered_json;

// %.17g: enough digits to round-trip any double, and byte-stable.
std::string fmt_double(double v);

// Deterministic renderer: insertion-ordered keys, reals through fmt_double,
// two-space indentation. Used for every JSON document the library emits so
// output bytes never depend on serializer defaults.
std::string dump_json(const ordered_json& j);

}  // namespace depkern
