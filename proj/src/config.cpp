#include "coil/config.hpp"

#include <string>

#include "coil/errors.hpp"

namespace coil {

Mode parse_mode(std::string_view name) {
    if (name == "tok") {
        return Mode::kTok;
    }
    if (name == "full") {
        return Mode::kFull;
    }
    if (name == "cls_only") {
        return Mode::kClsOnly;
    }
    throw ValidationError("unknown mode '" + std::string(name) + "' (expected tok, full or cls_only)");
}

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::kTok:
            return "tok";
        case Mode::kFull:
            return "full";
        case Mode::kClsOnly:
            return "cls_only";
    }
    return "unknown";
}

bool uses_tokens(Mode mode) { return mode != Mode::kClsOnly; }
bool uses_cls(Mode mode) { return mode != Mode::kTok; }

void check_mode_supported(Mode mode, std::size_t n_t, std::size_t n_c) {
    switch (mode) {
        case Mode::kTok:
            if (n_t < 1) {
                throw ValidationError("mode=tok requires n_t ≥ 1");
            }
            break;
        case Mode::kClsOnly:
            if (n_c < 1) {
                throw ValidationError("mode=cls_only requires n_c ≥ 1");
            }
            break;
        case Mode::kFull:
            if (n_t < 1) {
                throw ValidationError("mode=full requires n_t ≥ 1");
            }
            if (n_c < 1) {
                throw ValidationError("mode=full requires n_c ≥ 1");
            }
            break;
    }
}

const CoilConfig& validate_config(const CoilConfig& config) {
    if (config.n_lm < 1) {
        throw ValidationError("n_lm must be ≥ 1");
    }
    if (config.max_doc_tokens < 1) {
        throw ValidationError("max_doc_tokens must be ≥ 1");
    }
    check_mode_supported(config.mode, config.n_t, config.n_c);
    if (config.n_t > config.n_lm) {
        throw ValidationError("n_t ≤ n_lm violated");
    }
    if (config.n_c > config.n_lm) {
        throw ValidationError("n_c ≤ n_lm violated");
    }
    return config;
}

Mode natural_mode(std::size_t n_t, std::size_t n_c) {
    if (n_t == 0) {
        return Mode::kClsOnly;
    }
    return n_c == 0 ? Mode::kTok : Mode::kFull;
}

}  // namespace coil
