#pragma once

#include <string>
#include <vector>

#include "coil/types.hpp"

namespace coil {

/// Reads a line-delimited `{"id": ..., "text": ...}` file. Blank lines are
/// skipped. Ids must be non-empty, whitespace free and unique.
std::vector<Document> read_documents(const std::string& path);
std::vector<Query> read_queries(const std::string& path);

void write_documents(const std::string& path, const std::vector<Document>& docs);

}  // namespace coil
