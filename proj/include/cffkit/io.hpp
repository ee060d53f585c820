#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cffkit/bit_family.hpp"
#include "cffkit/fn_family.hpp"
#include "cffkit/rectangles.hpp"
#include "cffkit/report.hpp"
#include "cffkit/separators.hpp"

namespace cffkit {

/// Text formats, one artifact per file, always written byte-identically for
/// identical inputs:
///
///   CFF n=<n> r=<r> s=<s> N=<rows>     then <rows> lines of <n> chars {0,1}
///   FNF n=<n> q=<q> N=<count> kind=<k> then value lines (1-based, space
///                                      separated) or one `generator <json>`
///                                      line for lazy families
///   HS t=<t> k=<k> N=<points> mode=<m> then <points> lines of <k> coordinates
///   SEP n=<n> t=<t> k=<k> N=<count>    then <count> lines of <n> values in
///                                      [1..t+1]
///
/// Multiset separator files carry no header: each line is one member, <n>
/// multiplicities in [0..r]. Pool outcomes are a single line of {0,1} chars,
/// one per pool; decoded item lists are sorted 1-based indices, one per line.
/// Readers throw InvalidParams on any malformed or out-of-range content.

struct CffFile {
    u32 r = 0, s = 0;
    BitFamily family;
};

void write_cff(std::ostream& os, const BitFamily& family, u32 r, u32 s);
CffFile read_cff(std::istream& is);

void write_fn_family(std::ostream& os, const FnFamily& family);
FnFamily read_fn_family(std::istream& is);

void write_point_set(std::ostream& os, const PointSet& points);
PointSet read_point_set(std::istream& is);

struct SepFile {
    u64 n = 0;
    u32 t = 0, k = 0;
    std::vector<std::vector<u32>> rows;
};

void write_separating(std::ostream& os, const SeparatingFamily& family);
SepFile read_separating(std::istream& is);

void write_multisets(std::ostream& os, const std::vector<RMultiset>& family);
std::vector<RMultiset> read_multisets(std::istream& is, u32 r);

void write_outcomes(std::ostream& os, const std::vector<u8>& outcomes);
/// expected_pools == 0 accepts any length.
std::vector<u8> read_outcomes(std::istream& is, u64 expected_pools);

void write_item_list(std::ostream& os, const std::vector<u64>& items);
std::vector<u64> read_item_list(std::istream& is);

/// Serialize `report` as pretty JSON next to the family file (path + ".json").
void write_report_sidecar(const std::string& family_path, const SizeReport& report);

}  // namespace cffkit
