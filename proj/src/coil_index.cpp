#include "coil/coil_index.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "coil/errors.hpp"
#include "json_util.hpp"

namespace coil {

namespace fs = std::filesystem;

namespace {

constexpr char kPostingsMagic[8] = {'C', 'O', 'I', 'L', 'P', 'O', 'S', 'T'};
constexpr char kClsMagic[8] = {'C', 'O', 'I', 'L', 'C', 'L', 'S', '0'};
constexpr std::uint32_t kBinaryVersion = 1;
constexpr int kMetaVersion = 1;

class ByteWriter {
  public:
    void bytes(const char* p, std::size_t n) { buf_.append(p, n); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffU));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    const std::string& str() const noexcept { return buf_; }

  private:
    std::string buf_;
};

class ByteReader {
  public:
    ByteReader(const std::string& buf, std::string name) : buf_(buf), name_(std::move(name)) {}

    void expect_magic(const char (&magic)[8]) {
        need(8);
        if (std::memcmp(buf_.data() + pos_, magic, 8) != 0) {
            throw StructuralError(name_ + ": bad magic");
        }
        pos_ += 8;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    /// Fails before allocating when `count` items of `width` bytes cannot fit.
    void need_items(std::uint64_t count, std::uint64_t width) {
        if (width != 0 && count > (buf_.size() - pos_) / width) {
            throw StructuralError("truncated " + name_);
        }
    }
    bool at_end() const noexcept { return pos_ == buf_.size(); }

  private:
    void need(std::size_t n) {
        if (buf_.size() - pos_ < n) {
            throw StructuralError("truncated " + name_);
        }
    }

    const std::string& buf_;
    std::string name_;
    std::size_t pos_ = 0;
};

std::string to_hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

std::uint64_t from_hex(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw StructuralError("meta.json: bad " + what + " '" + s + "'");
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read error on " + path.string());
    }
    return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw IoError("write error on " + path.string());
    }
}

std::uint64_t checksum_of(const std::string& bytes) {
    return fnv1a64(std::as_bytes(std::span(bytes.data(), bytes.size())));
}

std::string serialize_postings(const CoilIndex& index) {
    ByteWriter w;
    w.bytes(kPostingsMagic, 8);
    w.u32(kBinaryVersion);
    w.u32(static_cast<std::uint32_t>(index.n_t()));
    w.u64(index.lists.size());
    w.u64(index.num_docs());
    for (const auto& [token, list] : index.lists) {
        w.u32(token);
        w.u64(list.size());
        for (DocOrdinal d : list.doc_refs) w.u32(d);
        for (float x : list.vecs) w.f32(x);
    }
    return w.str();
}

std::string serialize_cls(const CoilIndex& index) {
    ByteWriter w;
    w.bytes(kClsMagic, 8);
    w.u32(kBinaryVersion);
    w.u32(static_cast<std::uint32_t>(index.n_c()));
    w.u64(index.num_docs());
    for (float x : index.cls_matrix) w.f32(x);
    return w.str();
}

}  // namespace

const InvertedList* CoilIndex::find_list(TokenId token) const {
    auto it = lists.find(token);
    return it == lists.end() ? nullptr : &it->second;
}

IndexBuilder::IndexBuilder(CoilConfig config) {
    validate_config(config);
    index_.config = config;
}

void IndexBuilder::add(const EncodedSequence& doc) {
    const std::size_t n_t = index_.config.n_t;
    const std::size_t n_c = index_.config.n_c;
    if (!is_valid_id(doc.id)) {
        throw ValidationError("document id '" + doc.id + "' is empty or contains whitespace");
    }
    if (doc.token_vecs.size() != doc.size() * n_t || (doc.size() > 0 && doc.token_dim != n_t)) {
        throw ValidationError("document '" + doc.id + "': token vectors do not have dimension n_t=" +
                              std::to_string(n_t));
    }
    if (doc.cls_vec.size() != n_c) {
        throw ValidationError("document '" + doc.id + "': CLS vector does not have dimension n_c=" +
                              std::to_string(n_c));
    }
    if (index_.doc_table.size() >= std::numeric_limits<DocOrdinal>::max()) {
        throw ValidationError("too many documents");
    }
    if (!seen_.insert(doc.id).second) {
        throw ValidationError("duplicate doc_id '" + doc.id + "'");
    }

    const auto ordinal = static_cast<DocOrdinal>(index_.doc_table.size());
    index_.doc_table.push_back(doc.id);
    for (std::size_t j = 0; j < doc.size(); ++j) {
        const TokenId t = doc.token_ids[j];
        auto& list = index_.lists[t];
        list.token_id = t;
        list.n_t = n_t;
        list.doc_refs.push_back(ordinal);
        const auto v = doc.token_vec(j);
        list.vecs.insert(list.vecs.end(), v.begin(), v.end());
    }
    index_.cls_matrix.insert(index_.cls_matrix.end(), doc.cls_vec.begin(), doc.cls_vec.end());

    checksum_.update(doc.id);
    checksum_.update_u64(doc.size());
    for (TokenId t : doc.token_ids) checksum_.update_u32(t);
    for (float x : doc.token_vecs) checksum_.update_u32(std::bit_cast<std::uint32_t>(x));
    for (float x : doc.cls_vec) checksum_.update_u32(std::bit_cast<std::uint32_t>(x));
}

CoilIndex IndexBuilder::finish(Vocabulary vocab, std::optional<EncoderSettings> encoder) && {
    index_.corpus_checksum = checksum_.digest();
    index_.vocab = std::move(vocab);
    index_.encoder = std::move(encoder);
    return std::move(index_);
}

CoilIndex build_index(std::span<const EncodedDocument> docs, const CoilConfig& config) {
    IndexBuilder builder(config);
    for (const auto& d : docs) {
        builder.add(d);
    }
    return std::move(builder).finish();
}

void save_index(const CoilIndex& index, const std::string& dir) {
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) {
        throw IoError("cannot create index directory " + dir + ": " + ec.message());
    }
    const std::string postings = serialize_postings(index);
    const std::string cls = serialize_cls(index);

    std::size_t total = 0;
    for (const auto& [t, l] : index.lists) total += l.size();

    nlohmann::json meta = {
        {"format", "coil-index"},
        {"version", kMetaVersion},
        {"config", detail::config_to_json(index.config)},
        {"num_docs", index.num_docs()},
        {"num_lists", index.lists.size()},
        {"total_postings", total},
        {"corpus_checksum", to_hex(index.corpus_checksum)},
        {"checksums", {{"postings.bin", to_hex(checksum_of(postings))}, {"cls.bin", to_hex(checksum_of(cls))}}},
        {"doc_table", index.doc_table},
        {"vocab", index.vocab.tokens()},
        {"encoder", index.encoder ? detail::settings_to_json(*index.encoder) : nlohmann::json(nullptr)},
    };

    write_file(root / "postings.bin", postings);
    write_file(root / "cls.bin", cls);
    write_file(root / "meta.json", meta.dump(1) + "\n");
}

CoilIndex load_index(const std::string& dir) {
    const fs::path root(dir);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(root / "meta.json"));
    } catch (const nlohmann::json::parse_error& e) {
        throw StructuralError("meta.json: " + std::string(e.what()));
    }
    if (!meta.is_object() || !meta.contains("format") || meta["format"] != "coil-index") {
        throw StructuralError("meta.json: not a coil index");
    }
    if (!meta.contains("version") || meta["version"] != kMetaVersion) {
        throw StructuralError("meta.json: version mismatch (expected " + std::to_string(kMetaVersion) + ")");
    }

    CoilIndex index;
    try {
        index.config = detail::config_from_json(meta.at("config"));
        index.doc_table = meta.at("doc_table").get<std::vector<std::string>>();
        index.vocab = Vocabulary::from_tokens(meta.at("vocab").get<std::vector<std::string>>());
        if (!meta.at("encoder").is_null()) {
            index.encoder = detail::settings_from_json(meta.at("encoder"));
        }
        index.corpus_checksum = from_hex(meta.at("corpus_checksum").get<std::string>(), "corpus checksum");
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("meta.json: ") + e.what());
    } catch (const ValidationError& e) {
        throw StructuralError(std::string("meta.json: ") + e.what());
    }
    const std::size_t n_t = index.config.n_t;
    const std::size_t n_c = index.config.n_c;
    const std::uint64_t num_docs = index.doc_table.size();

    auto load_checked = [&](const char* name) {
        std::string bytes = read_file(root / name);
        std::string expected;
        try {
            expected = meta.at("checksums").at(name).get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw StructuralError(std::string("meta.json: no checksum for ") + name);
        }
        if (to_hex(checksum_of(bytes)) != expected) {
            throw ChecksumError(std::string("checksum mismatch in ") + name);
        }
        return bytes;
    };

    const std::string postings = load_checked("postings.bin");
    {
        ByteReader r(postings, "postings.bin");
        r.expect_magic(kPostingsMagic);
        if (r.u32() != kBinaryVersion) {
            throw StructuralError("postings.bin: version mismatch");
        }
        const std::uint32_t file_n_t = r.u32();
        if (file_n_t != n_t) {
            throw StructuralError("postings.bin: vector dimension " + std::to_string(file_n_t) +
                                  " disagrees with meta.json n_t=" + std::to_string(n_t));
        }
        const std::uint64_t num_lists = r.u64();
        if (r.u64() != num_docs) {
            throw StructuralError("postings.bin: document count disagrees with meta.json");
        }
        bool first = true;
        TokenId prev = 0;
        for (std::uint64_t l = 0; l < num_lists; ++l) {
            InvertedList list;
            list.token_id = r.u32();
            list.n_t = n_t;
            if (!first && list.token_id <= prev) {
                throw StructuralError("postings.bin: lists out of token order");
            }
            first = false;
            prev = list.token_id;
            const std::uint64_t count = r.u64();
            if (count == 0) {
                throw StructuralError("postings.bin: empty inverted list");
            }
            r.need_items(count, 4 + 4 * static_cast<std::uint64_t>(n_t));
            list.doc_refs.resize(count);
            for (auto& d : list.doc_refs) {
                d = r.u32();
                if (d >= num_docs) {
                    throw StructuralError("postings.bin: document ordinal out of range");
                }
            }
            for (std::size_t i = 1; i < list.doc_refs.size(); ++i) {
                if (list.doc_refs[i] < list.doc_refs[i - 1]) {
                    throw StructuralError("postings.bin: columns out of document order");
                }
            }
            list.vecs.resize(count * n_t);
            for (auto& x : list.vecs) x = r.f32();
            index.lists.emplace(list.token_id, std::move(list));
        }
        if (!r.at_end()) {
            throw StructuralError("postings.bin: trailing bytes");
        }
    }

    const std::string cls = load_checked("cls.bin");
    {
        ByteReader r(cls, "cls.bin");
        r.expect_magic(kClsMagic);
        if (r.u32() != kBinaryVersion) {
            throw StructuralError("cls.bin: version mismatch");
        }
        const std::uint32_t file_n_c = r.u32();
        if (file_n_c != n_c) {
            throw StructuralError("cls.bin: vector dimension " + std::to_string(file_n_c) +
                                  " disagrees with meta.json n_c=" + std::to_string(n_c));
        }
        if (r.u64() != num_docs) {
            throw StructuralError("cls.bin: document count disagrees with meta.json");
        }
        r.need_items(num_docs, 4 * static_cast<std::uint64_t>(n_c));
        index.cls_matrix.resize(num_docs * n_c);
        for (auto& x : index.cls_matrix) x = r.f32();
        if (!r.at_end()) {
            throw StructuralError("cls.bin: trailing bytes");
        }
    }
    return index;
}

IndexStats index_stats(const CoilIndex& index) {
    IndexStats s;
    s.num_docs = index.num_docs();
    s.num_lists = index.lists.size();
    for (const auto& [token, list] : index.lists) {
        const std::size_t n = list.size();
        s.total_postings += n;
        s.bytes_on_disk += 4 + 8 + n * 4 + n * index.n_t() * 4;
        const auto bucket = static_cast<std::size_t>(std::bit_width(n) - 1);
        if (s.list_size_histogram.size() <= bucket) {
            s.list_size_histogram.resize(bucket + 1, 0);
        }
        ++s.list_size_histogram[bucket];
    }
    s.bytes_on_disk += index.cls_matrix.size() * 4;
    return s;
}

}  // namespace coil
