#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace coil {

enum class Mode {
    kTok,      ///< exact-match token scoring only
    kFull,     ///< token scoring plus CLS dot product
    kClsOnly,  ///< CLS dot product only (dense retrieval)
};

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

bool uses_tokens(Mode mode);
bool uses_cls(Mode mode);

/// Dimensions and switches of a COIL model. A zero n_t or n_c disables that
/// component, so one config space covers COIL-tok (n_c = 0), dense-only
/// (n_t = 0) and the single-weight DeepCT-like variant (n_t = 1).
struct CoilConfig {
    std::size_t n_lm = 768;
    std::size_t n_t = 32;
    std::size_t n_c = 768;
    std::size_t max_doc_tokens = 512;
    bool cls_layer_norm = false;
    Mode mode = Mode::kFull;

    friend bool operator==(const CoilConfig&, const CoilConfig&) = default;
};

/// Returns `config` if every invariant holds, otherwise throws
/// ValidationError naming the first violated invariant.
const CoilConfig& validate_config(const CoilConfig& config);

/// The widest mode the dimensions support: full, tok (n_c = 0) or cls_only (n_t = 0).
Mode natural_mode(std::size_t n_t, std::size_t n_c);

/// Throws ValidationError unless `mode` can run on vectors of these dimensions.
void check_mode_supported(Mode mode, std::size_t n_t, std::size_t n_c);

}  // namespace coil
