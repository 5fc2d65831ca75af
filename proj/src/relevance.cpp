#include "slarag/relevance.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "slarag/text.hpp"

namespace slarag {

double surrogate_relevance(std::string_view query, std::string_view answer) {
    auto qt = text::word_tokens(query);
    auto at = text::word_tokens(answer);
    std::set<std::string> a(qt.begin(), qt.end());
    std::set<std::string> b(at.begin(), at.end());
    std::size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace slarag
