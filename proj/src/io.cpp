#include "cffkit/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cffkit {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidParams("io: " + what); }

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) bad(std::string("unexpected end of input reading ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

/// Parse "KEY a=<..> b=<..> ..." headers; every requested key must be present.
std::vector<u64> parse_header(const std::string& line, const std::string& magic,
                              const std::vector<std::string>& keys, std::string* tail_value) {
  std::istringstream ss(line);
  std::string word;
  if (!(ss >> word) || word != magic) bad("expected a " + magic + " header");
  std::vector<u64> out;
  for (const auto& key : keys) {
    if (!(ss >> word)) bad(magic + " header is missing " + key + "=");
    const auto eq = word.find('=');
    if (eq == std::string::npos || word.substr(0, eq) != key)
      bad(magic + " header: expected " + key + "=, got '" + word + "'");
    const std::string value = word.substr(eq + 1);
    if (tail_value != nullptr && &key == &keys.back()) {
      *tail_value = value;
      out.push_back(0);
      continue;
    }
    try {
      size_t used = 0;
      out.push_back(std::stoull(value, &used));
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      bad(magic + " header: " + key + "= wants an unsigned integer, got '" + value + "'");
    }
  }
  std::string extra;
  if (ss >> extra) bad(magic + " header has trailing content '" + extra + "'");
  return out;
}

std::vector<u32> parse_values(const std::string& line, u64 expect, u64 lo, u64 hi,
                              const char* what) {
  std::istringstream ss(line);
  std::vector<u32> vals;
  u64 v = 0;
  while (ss >> v) {
    if (v < lo || v > hi)
      bad(std::string(what) + ": value " + std::to_string(v) + " outside [" + std::to_string(lo) +
          ".." + std::to_string(hi) + "]");
    vals.push_back(static_cast<u32>(v));
  }
  if (!ss.eof()) bad(std::string(what) + ": non-numeric content");
  if (vals.size() != expect)
    bad(std::string(what) + ": expected " + std::to_string(expect) + " values, got " +
        std::to_string(vals.size()));
  return vals;
}

void put_values(std::ostream& os, const std::vector<u32>& vals) {
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) os << ' ';
    os << vals[i];
  }
  os << '\n';
}

}  // namespace

void write_cff(std::ostream& os, const BitFamily& family, u32 r, u32 s) {
  os << "CFF n=" << family.n() << " r=" << r << " s=" << s << " N=" << family.rows() << '\n';
  for (u64 i = 0; i < family.rows(); ++i) os << family.row_string(i) << '\n';
}

CffFile read_cff(std::istream& is) {
  const auto h = parse_header(next_line(is, "CFF header"), "CFF", {"n", "r", "s", "N"}, nullptr);
  const u64 n = h[0], rows = h[3];
  if (n == 0 || n > 0xFFFFFFFFull) bad("CFF: column count out of range");
  if (h[1] == 0 || h[1] > 0xFFFFFFFFull || h[2] == 0 || h[2] > 0xFFFFFFFFull)
    bad("CFF: r and s must be positive");
  CffFile out;
  out.r = static_cast<u32>(h[1]);
  out.s = static_cast<u32>(h[2]);
  out.family = BitFamily(static_cast<u32>(n));
  for (u64 i = 0; i < rows; ++i) {
    const std::string line = next_line(is, "CFF row");
    if (line.size() != n) bad("CFF row " + std::to_string(i) + ": wrong length");
    for (char c : line)
      if (c != '0' && c != '1') bad("CFF row " + std::to_string(i) + ": characters must be 0/1");
    out.family.append_row_string(line);
  }
  return out;
}

void write_fn_family(std::ostream& os, const FnFamily& family) {
  os << "FNF n=" << family.n() << " q=" << family.q() << " N=" << to_string_u128(family.count())
     << " kind=" << family.kind() << '\n';
  if (!family.materialized()) {
    os << "generator " << family.descriptor().dump() << '\n';
    return;
  }
  std::vector<u32> row(static_cast<size_t>(family.n()));
  for (u128 m = 0; m < family.count(); ++m) {
    for (u64 x = 0; x < family.n(); ++x) row[static_cast<size_t>(x)] = family.at(m, x);
    put_values(os, row);
  }
}

FnFamily read_fn_family(std::istream& is) {
  std::string kind;
  const auto h = parse_header(next_line(is, "FNF header"), "FNF", {"n", "q", "N", "kind"}, &kind);
  const u64 n = h[0], q = h[1], count = h[2];
  if (n == 0 || q == 0) bad("FNF: n and q must be positive");

  std::string line = next_line(is, "FNF body");
  if (line.rfind("generator ", 0) == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line.substr(10));
    } catch (const nlohmann::json::exception& e) {
      bad(std::string("FNF generator line: ") + e.what());
    }
    FnFamily fam = family_from_descriptor(j);
    if (fam.n() != n || fam.q() != q || fam.count() != u128(count))
      bad("FNF generator does not match the header parameters");
    return fam;
  }

  std::vector<u32> values;
  values.reserve(static_cast<size_t>(count * n));
  for (u64 m = 0; m < count; ++m) {
    if (m > 0) line = next_line(is, "FNF row");
    const auto row = parse_values(line, n, 1, q, "FNF row");
    values.insert(values.end(), row.begin(), row.end());
  }
  return FnFamily::from_table(n, q, std::move(values), kind);
}

void write_point_set(std::ostream& os, const PointSet& points) {
  os << "HS t=" << points.t << " k=" << points.k << " N=" << points.points.size()
     << " mode=" << points.mode << '\n';
  for (const auto& p : points.points) put_values(os, p);
}

PointSet read_point_set(std::istream& is) {
  std::string mode;
  const auto h = parse_header(next_line(is, "HS header"), "HS", {"t", "k", "N", "mode"}, &mode);
  PointSet out;
  out.t = h[0];
  out.k = h[1];
  out.mode = mode;
  if (out.t == 0 || out.k == 0) bad("HS: t and k must be positive");
  out.points.reserve(static_cast<size_t>(h[2]));
  for (u64 i = 0; i < h[2]; ++i)
    out.points.push_back(parse_values(next_line(is, "HS point"), out.k, 1, out.t, "HS point"));
  return out;
}

void write_separating(std::ostream& os, const SeparatingFamily& family) {
  os << "SEP n=" << family.n << " t=" << family.t << " k=" << family.k
     << " N=" << to_string_u128(family.count) << '\n';
  std::vector<u32> row(static_cast<size_t>(family.n));
  for (u128 m = 0; m < family.count; ++m) {
    for (u64 x = 0; x < family.n; ++x) row[static_cast<size_t>(x)] = family.at(m, x);
    put_values(os, row);
  }
}

SepFile read_separating(std::istream& is) {
  const auto h = parse_header(next_line(is, "SEP header"), "SEP", {"n", "t", "k", "N"}, nullptr);
  SepFile out;
  out.n = h[0];
  if (h[1] > 0xFFFFFFFFull || h[2] == 0 || h[2] > 0xFFFFFFFFull)
    bad("SEP: parameter out of range");
  out.t = static_cast<u32>(h[1]);
  out.k = static_cast<u32>(h[2]);
  out.rows.reserve(static_cast<size_t>(h[3]));
  for (u64 i = 0; i < h[3]; ++i)
    out.rows.push_back(
        parse_values(next_line(is, "SEP row"), out.n, 1, u64(out.t) + 1, "SEP row"));
  return out;
}

void write_multisets(std::ostream& os, const std::vector<RMultiset>& family) {
  for (const auto& f : family) put_values(os, f.v);
}

std::vector<RMultiset> read_multisets(std::istream& is, u32 r) {
  std::vector<RMultiset> out;
  std::string line;
  u64 n = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    RMultiset f;
    f.r = r;
    if (out.empty()) {
      std::istringstream probe(line);
      u64 v;
      while (probe >> v) ++n;
    }
    f.v = parse_values(line, n, 0, r, "multiset row");
    out.push_back(std::move(f));
  }
  return out;
}

void write_outcomes(std::ostream& os, const std::vector<u8>& outcomes) {
  for (u8 b : outcomes) os << (b ? '1' : '0');
  os << '\n';
}

std::vector<u8> read_outcomes(std::istream& is, u64 expected_pools) {
  const std::string line = next_line(is, "outcome line");
  if (expected_pools != 0 && line.size() != expected_pools)
    bad("outcomes: expected " + std::to_string(expected_pools) + " characters, got " +
        std::to_string(line.size()));
  std::vector<u8> out;
  out.reserve(line.size());
  for (char c : line) {
    if (c != '0' && c != '1') bad("outcomes: characters must be 0/1");
    out.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

void write_item_list(std::ostream& os, const std::vector<u64>& items) {
  for (u64 it : items) os << it << '\n';
}

std::vector<u64> read_item_list(std::istream& is) {
  std::vector<u64> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoull(line, &used));
      if (used != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      bad("item list: '" + line + "' is not an index");
    }
  }
  return out;
}

void write_report_sidecar(const std::string& family_path, const SizeReport& report) {
  std::ofstream os(family_path + ".json", std::ios::binary);
  if (!os) bad("cannot open " + family_path + ".json for writing");
  os << report.to_json().dump(2) << '\n';
}

}  // namespace cffkit
