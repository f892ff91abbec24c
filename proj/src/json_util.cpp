#include "json_util.hpp"

#include <charconv>
#include <cmath>

namespace coil::detail {

nlohmann::json config_to_json(const CoilConfig& c) {
    return {{"n_lm", c.n_lm},
            {"n_t", c.n_t},
            {"n_c", c.n_c},
            {"max_doc_tokens", c.max_doc_tokens},
            {"cls_layer_norm", c.cls_layer_norm},
            {"mode", std::string(mode_name(c.mode))}};
}

CoilConfig config_from_json(const nlohmann::json& j) {
    const std::string where = "config";
    CoilConfig c;
    c.n_lm = require<std::size_t>(j, "n_lm", where);
    c.n_t = require<std::size_t>(j, "n_t", where);
    c.n_c = require<std::size_t>(j, "n_c", where);
    c.max_doc_tokens = require<std::size_t>(j, "max_doc_tokens", where);
    c.cls_layer_norm = require<bool>(j, "cls_layer_norm", where);
    c.mode = parse_mode(require<std::string>(j, "mode", where));
    return c;
}

nlohmann::json settings_to_json(const EncoderSettings& s) {
    return {{"config", config_to_json(s.config)},
            {"seed", s.stub.seed},
            {"window", s.stub.window},
            {"mix_weight", s.stub.mix_weight},
            {"lowercase", s.lowercase}};
}

EncoderSettings settings_from_json(const nlohmann::json& j) {
    const std::string where = "encoder settings";
    EncoderSettings s;
    if (!j.contains("config")) {
        throw IoError(where + ": missing field 'config'");
    }
    s.config = config_from_json(j.at("config"));
    s.stub.seed = require<std::uint64_t>(j, "seed", where);
    s.stub.window = require<std::size_t>(j, "window", where);
    s.stub.mix_weight = require<double>(j, "mix_weight", where);
    s.lowercase = require<bool>(j, "lowercase", where);
    return s;
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

void append_float(std::string& out, float v) {
    if (!std::isfinite(v)) {
        throw ValidationError("cannot serialize non-finite value");
    }
    if (v == 0.0F && std::signbit(v)) {
        out += "-0.0";  // "-0" would read back as the integer 0
        return;
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace coil::detail
