#include "cffkit/witness.hpp"

#include <sstream>

namespace cffkit {

namespace {

void print_set(std::ostream& os, const std::vector<u64>& s) {
    os << '{';
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    os << '}';
}

}  // namespace

std::string Witness::pattern_string() const {
    std::string out;
    for (u32 j = 0; j < pattern_width; ++j)
        out.push_back((pattern_mask >> j) & 1 ? '1' : '0');
    return out;
}

std::string Witness::to_string() const {
    std::ostringstream os;
    os << kind << " cols ";
    print_set(os, index_set);
    if (pattern_width > 0) os << " pattern " << pattern_string();
    if (!second_set.empty() || kind == "shf" || kind == "minsep") {
        os << " vs ";
        print_set(os, second_set);
    }
    for (size_t b = 0; b < blocks.size(); ++b) {
        os << " block" << (b + 1) << ' ';
        print_set(os, blocks[b].first);
        os << " vs ";
        print_set(os, blocks[b].second);
    }
    if (!detail.empty()) os << " (" << detail << ')';
    return os.str();
}

}  // namespace cffkit
