#include "coil/corpus_io.hpp"

#include <fstream>
#include <unordered_set>

#include "coil/errors.hpp"
#include "json.hpp"

namespace coil {

namespace {

template <typename Record>
std::vector<Record> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<Record> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(path, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("text") ||
            !j["text"].is_string()) {
            throw FormatError(path, line_no, "expected {\"id\": <string>, \"text\": <string>}");
        }
        Record rec{j["id"].get<std::string>(), j["text"].get<std::string>()};
        if (!is_valid_id(rec.id)) {
            throw FormatError(path, line_no, "id must be non-empty and contain no whitespace");
        }
        if (!seen.insert(rec.id).second) {
            throw FormatError(path, line_no, "duplicate id '" + rec.id + "'");
        }
        out.push_back(std::move(rec));
    }
    if (in.bad()) {
        throw IoError("read error on " + path);
    }
    return out;
}

}  // namespace

std::vector<Document> read_documents(const std::string& path) { return read_records<Document>(path); }

std::vector<Query> read_queries(const std::string& path) { return read_records<Query>(path); }

void write_documents(const std::string& path, const std::vector<Document>& docs) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    for (const auto& d : docs) {
        out << nlohmann::json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
    }
    if (!out) {
        throw IoError("write error on " + path);
    }
}

}  // namespace coil
