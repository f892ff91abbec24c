#include "coil/types.hpp"

#include <algorithm>
#include <unordered_set>

namespace coil {

void TokenSeq::truncate(std::size_t n) {
    if (token_ids.size() > n) {
        token_ids.resize(n);
        tokens.resize(std::min(tokens.size(), n));
    }
}

RankedList make_ranked_list(std::string query_id, std::vector<ScoredDoc> entries, std::size_t k) {
    if (entries.size() > k) {
        std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(k), entries.end(),
                          ranks_before);
        entries.resize(k);
    } else {
        std::sort(entries.begin(), entries.end(), ranks_before);
    }
    return RankedList{std::move(query_id), std::move(entries)};
}

bool is_well_ordered(const RankedList& list) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        if (!seen.insert(list.entries[i].doc_id).second) {
            return false;
        }
        if (i > 0 && !ranks_before(list.entries[i - 1], list.entries[i])) {
            return false;
        }
    }
    return true;
}

bool is_valid_id(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    return std::none_of(id.begin(), id.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    });
}

}  // namespace coil
