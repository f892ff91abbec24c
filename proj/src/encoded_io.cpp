#include "coil/encoded_io.hpp"

#include <filesystem>
#include <limits>

#include "coil/errors.hpp"
#include "json_util.hpp"

namespace coil {

using detail::FloatJson;

namespace {

constexpr const char* kFormat = "coil-enc";
constexpr int kVersion = 1;

bool has_format(const nlohmann::json& j, std::string_view format) {
    return j.is_object() && j.contains("format") && j["format"].is_string() && j["format"].get<std::string>() == format;
}

std::vector<float> parse_vector(const FloatJson& j, const std::string& file, std::size_t line, const char* what) {
    if (!j.is_array()) {
        throw FormatError(file, line, std::string(what) + " must be an array of numbers");
    }
    std::vector<float> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (x.is_number_float()) {
            out.push_back(x.get<float>());
        } else if (x.is_number_unsigned()) {
            out.push_back(static_cast<float>(x.get<std::uint64_t>()));
        } else if (x.is_number_integer()) {
            out.push_back(static_cast<float>(x.get<std::int64_t>()));
        } else {
            throw FormatError(file, line, std::string(what) + " must contain only numbers");
        }
    }
    return out;
}

EncodedHeader parse_header(const std::string& line, const std::string& file) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(file, 1, std::string("malformed header: ") + e.what());
    }
    if (!has_format(j, kFormat)) {
        throw FormatError(file, 1, "not a coil-enc header");
    }
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kVersion) {
        throw FormatError(file, 1, "unsupported coil-enc version");
    }
    EncodedHeader h;
    for (const char* key : {"n_t", "n_c"}) {
        if (!j.contains(key) || !j[key].is_number_unsigned()) {
            throw FormatError(file, 1, std::string("header field '") + key + "' must be a non-negative integer");
        }
    }
    h.n_t = j["n_t"].get<std::size_t>();
    h.n_c = j["n_c"].get<std::size_t>();
    return h;
}

}  // namespace

std::string format_encoded_header(const EncodedHeader& header) {
    return std::string(R"({"format":"coil-enc","version":1,"n_t":)") + std::to_string(header.n_t) +
           ",\"n_c\":" + std::to_string(header.n_c) + "}";
}

std::string format_encoded_record(const EncodedSequence& record) {
    std::string out;
    out.reserve(32 + record.token_vecs.size() * 12 + record.cls_vec.size() * 12);
    out += "{\"id\":";
    out += detail::quote(record.id);
    out += ",\"token_ids\":[";
    for (std::size_t i = 0; i < record.token_ids.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(record.token_ids[i]);
    }
    out += "],\"token_vecs\":[";
    for (std::size_t i = 0; i < record.size(); ++i) {
        if (i) out += ',';
        out += '[';
        const auto v = record.token_vec(i);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k) out += ',';
            detail::append_float(out, v[k]);
        }
        out += ']';
    }
    out += ']';
    if (record.has_cls()) {
        out += ",\"cls_vec\":[";
        for (std::size_t k = 0; k < record.cls_vec.size(); ++k) {
            if (k) out += ',';
            detail::append_float(out, record.cls_vec[k]);
        }
        out += ']';
    }
    out += '}';
    return out;
}

EncodedSequence parse_encoded_record(const std::string& line, const EncodedHeader& header, const std::string& file,
                                     std::size_t line_no) {
    FloatJson j;
    try {
        j = FloatJson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(file, line_no, std::string("malformed record: ") + e.what());
    }
    if (!j.is_object()) {
        throw FormatError(file, line_no, "record must be a JSON object");
    }
    EncodedSequence rec;
    if (!j.contains("id") || !j["id"].is_string()) {
        throw FormatError(file, line_no, "record needs a string 'id'");
    }
    rec.id = j["id"].get<std::string>();
    if (!is_valid_id(rec.id)) {
        throw FormatError(file, line_no, "id must be non-empty and contain no whitespace");
    }
    if (!j.contains("token_ids") || !j["token_ids"].is_array()) {
        throw FormatError(file, line_no, "record needs a 'token_ids' array");
    }
    for (const auto& t : j["token_ids"]) {
        if (!t.is_number_unsigned() || t.get<std::uint64_t>() > std::numeric_limits<TokenId>::max()) {
            throw FormatError(file, line_no, "token_ids must be 32-bit non-negative integers");
        }
        rec.token_ids.push_back(static_cast<TokenId>(t.get<std::uint64_t>()));
    }
    if (!j.contains("token_vecs") || !j["token_vecs"].is_array()) {
        throw FormatError(file, line_no, "record needs a 'token_vecs' array");
    }
    const auto& vecs = j["token_vecs"];
    if (vecs.size() != rec.token_ids.size()) {
        throw ValidationError(file + ":" + std::to_string(line_no) + ": " + std::to_string(vecs.size()) +
                              " token_vecs for " + std::to_string(rec.token_ids.size()) + " token_ids");
    }
    rec.token_dim = header.n_t;
    rec.token_vecs.reserve(vecs.size() * header.n_t);
    for (const auto& v : vecs) {
        const auto values = parse_vector(v, file, line_no, "token_vecs entry");
        if (values.size() != header.n_t) {
            throw ValidationError(file + ":" + std::to_string(line_no) + ": token vector of dimension " +
                                  std::to_string(values.size()) + ", header n_t=" + std::to_string(header.n_t));
        }
        rec.token_vecs.insert(rec.token_vecs.end(), values.begin(), values.end());
    }
    if (j.contains("cls_vec")) {
        if (header.n_c == 0) {
            throw ValidationError(file + ":" + std::to_string(line_no) + ": cls_vec present but header n_c=0");
        }
        rec.cls_vec = parse_vector(j["cls_vec"], file, line_no, "cls_vec");
        if (rec.cls_vec.size() != header.n_c) {
            throw ValidationError(file + ":" + std::to_string(line_no) + ": cls_vec of dimension " +
                                  std::to_string(rec.cls_vec.size()) + ", header n_c=" + std::to_string(header.n_c));
        }
    } else if (header.n_c > 0) {
        throw ValidationError(file + ":" + std::to_string(line_no) + ": cls_vec missing but header n_c=" +
                              std::to_string(header.n_c));
    }
    return rec;
}

EncodedReader::EncodedReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) {
        throw IoError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in_, line)) {
        throw FormatError(path, 1, "missing coil-enc header");
    }
    header_ = parse_header(line, path);
}

std::optional<EncodedSequence> EncodedReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.empty()) {
            continue;
        }
        return parse_encoded_record(line, header_, path_, line_no_);
    }
    if (in_.bad()) {
        throw IoError("read error on " + path_);
    }
    return std::nullopt;
}

EncodedWriter::EncodedWriter(const std::string& path, const EncodedHeader& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), header_(header) {
    if (!out_) {
        throw IoError("cannot open " + path + " for writing");
    }
    out_ << format_encoded_header(header_) << '\n';
}

void EncodedWriter::write(const EncodedSequence& record) {
    if (record.token_vecs.size() != record.size() * header_.n_t ||
        (record.size() > 0 && record.token_dim != header_.n_t)) {
        throw ValidationError("record '" + record.id + "' token dimension does not match header n_t=" +
                              std::to_string(header_.n_t));
    }
    if (record.cls_vec.size() != header_.n_c) {
        throw ValidationError("record '" + record.id + "' cls dimension does not match header n_c=" +
                              std::to_string(header_.n_c));
    }
    out_ << format_encoded_record(record) << '\n';
    if (!out_) {
        throw IoError("write error on " + path_);
    }
    ++count_;
}

void EncodedWriter::close() {
    out_.close();
    if (!out_) {
        throw IoError("error closing " + path_);
    }
}

namespace {

template <typename T>
std::vector<T> read_all(const std::string& path, EncodedHeader* header) {
    EncodedReader reader(path);
    if (header) {
        *header = reader.header();
    }
    std::vector<T> out;
    while (auto rec = reader.next()) {
        out.push_back(T{std::move(*rec)});
    }
    return out;
}

}  // namespace

std::vector<EncodedDocument> read_encoded_documents(const std::string& path, EncodedHeader* header) {
    return read_all<EncodedDocument>(path, header);
}

std::vector<EncodedQuery> read_encoded_queries(const std::string& path, EncodedHeader* header) {
    return read_all<EncodedQuery>(path, header);
}

bool looks_like_encoded_file(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    if (!in || !std::getline(in, line)) {
        return false;
    }
    try {
        const auto j = nlohmann::json::parse(line);
        return has_format(j, kFormat);
    } catch (const nlohmann::json::exception&) {
        return false;
    }
}

std::string encoder_meta_path(const std::string& encoded_path) { return encoded_path + ".meta.json"; }

void save_encoder_meta(const std::string& path, const EncoderSettings& settings, const Vocabulary& vocab) {
    nlohmann::json j = {{"format", "coil-encoder"},
                        {"version", 1},
                        {"settings", detail::settings_to_json(settings)},
                        {"vocab", vocab.tokens()}};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << j.dump() << '\n';
    if (!out) {
        throw IoError("write error on " + path);
    }
}

std::optional<std::pair<EncoderSettings, Vocabulary>> load_encoder_meta(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path + ": malformed encoder metadata: " + e.what());
    }
    if (!has_format(j, "coil-encoder") || !j.contains("settings")) {
        throw IoError(path + ": not an encoder metadata file");
    }
    auto settings = detail::settings_from_json(j.at("settings"));
    auto vocab = Vocabulary::from_tokens(detail::require<std::vector<std::string>>(j, "vocab", path));
    return std::make_pair(settings, std::move(vocab));
}

}  // namespace coil
