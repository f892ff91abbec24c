#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "coil/config.hpp"
#include "coil/encoder.hpp"
#include "coil/errors.hpp"
#include "json.hpp"

namespace coil::detail {

/// JSON whose floating point numbers parse straight to float with strtof, so
/// shortest-form float text reads back bit-exactly.
using FloatJson = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t, std::uint64_t, float>;

nlohmann::json config_to_json(const CoilConfig& config);
CoilConfig config_from_json(const nlohmann::json& j);

nlohmann::json settings_to_json(const EncoderSettings& settings);
EncoderSettings settings_from_json(const nlohmann::json& j);

/// Quoted, escaped JSON string literal.
std::string quote(const std::string& s);

/// Appends the shortest text that reads back to exactly `v`. Rejects non-finite values.
void append_float(std::string& out, float v);

template <typename T>
T require(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) {
        throw IoError(where + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(where + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace coil::detail
