#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "coil/encoder.hpp"
#include "coil/types.hpp"

namespace coil {

/// Dimensions declared by an encoded-record file's header line.
struct EncodedHeader {
    std::size_t n_t = 0;
    std::size_t n_c = 0;

    friend bool operator==(const EncodedHeader&, const EncodedHeader&) = default;
};

/// Header line, without the trailing newline.
std::string format_encoded_header(const EncodedHeader& header);

/// One record line, without the trailing newline. Floats use the shortest
/// decimal form that reads back to the identical 32-bit value.
std::string format_encoded_record(const EncodedSequence& record);

/// Parses a record line and checks it against the header dimensions.
/// Throws FormatError (malformed JSON or fields) or ValidationError (dimensions).
EncodedSequence parse_encoded_record(const std::string& line, const EncodedHeader& header,
                                     const std::string& file = "<record>", std::size_t line_no = 1);

/// Streams records out of an encoded-record file in file order.
class EncodedReader {
  public:
    explicit EncodedReader(const std::string& path);

    const EncodedHeader& header() const noexcept { return header_; }

    /// Next record, or nullopt at end of file.
    std::optional<EncodedSequence> next();

  private:
    std::string path_;
    std::ifstream in_;
    EncodedHeader header_;
    std::size_t line_no_ = 1;
};

class EncodedWriter {
  public:
    EncodedWriter(const std::string& path, const EncodedHeader& header);

    /// Throws ValidationError if the record's dimensions disagree with the header.
    void write(const EncodedSequence& record);
    void close();
    std::size_t count() const noexcept { return count_; }

  private:
    std::string path_;
    std::ofstream out_;
    EncodedHeader header_;
    std::size_t count_ = 0;
};

std::vector<EncodedDocument> read_encoded_documents(const std::string& path, EncodedHeader* header = nullptr);
std::vector<EncodedQuery> read_encoded_queries(const std::string& path, EncodedHeader* header = nullptr);

/// True when the file's first line is an encoded-record header.
bool looks_like_encoded_file(const std::string& path);

/// Sidecar written next to an encoded corpus so queries can later be encoded
/// the same way: `<encoded>.meta.json`.
std::string encoder_meta_path(const std::string& encoded_path);
void save_encoder_meta(const std::string& path, const EncoderSettings& settings, const Vocabulary& vocab);
/// Returns nullopt when the file does not exist.
std::optional<std::pair<EncoderSettings, Vocabulary>> load_encoder_meta(const std::string& path);

}  // namespace coil
