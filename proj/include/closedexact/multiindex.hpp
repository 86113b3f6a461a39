#pragma once

#include <algorithm>
#include <cctype>
#include <iterator>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "closedexact/errors.hpp"

namespace closedexact {

/**
 * @brief A point of the integer lattice Z^N.
 *
 * Degree-zero objects are represented by the empty point.  A cone point is a
 * lattice point with 0 <= z_1 <= ... <= z_N.
 */
struct LatticePoint {
  std::vector<int> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<int> c) : coords(std::move(c)) {}
  LatticePoint(std::initializer_list<int> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  bool empty() const { return coords.empty(); }
  int operator[](std::size_t i) const { return coords[i]; }
  int& operator[](std::size_t i) { return coords[i]; }
  auto begin() const { return coords.begin(); }
  auto end() const { return coords.end(); }

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

inline LatticePoint sorted(LatticePoint z) {
  std::sort(z.coords.begin(), z.coords.end());
  return z;
}

inline bool is_cone_point(const LatticePoint& z) {
  return std::is_sorted(z.begin(), z.end()) && (z.empty() || z[0] >= 0);
}

inline std::ostream& operator<<(std::ostream& os, const LatticePoint& z) {
  os << '(';
  for (std::size_t i = 0; i < z.dim(); ++i) os << (i ? "," : "") << z[i];
  return os << ')';
}

/// Space-separated integers, the textual lattice point form.
inline std::string to_text(const LatticePoint& z) {
  std::ostringstream os;
  for (std::size_t i = 0; i < z.dim(); ++i) os << (i ? " " : "") << z[i];
  return os.str();
}

/**
 * @brief Finitely supported map site -> particle count.
 *
 * Stored as the nondecreasing list of occupied sites repeated by multiplicity,
 * which is exactly the coding z_I.  Equality and ordering are structural.
 */
class MultiIndex {
 public:
  MultiIndex() = default;

  /// Build from a list of occupied sites (any order, repeated by multiplicity).
  static MultiIndex from_sites(std::vector<int> sites) {
    MultiIndex m;
    std::sort(sites.begin(), sites.end());
    m.sites_ = std::move(sites);
    return m;
  }

  static MultiIndex from_counts(const std::map<int, int>& counts) {
    std::vector<int> sites;
    for (auto [site, count] : counts) {
      if (count < 0) throw PreconditionError("multi-index counts must be nonnegative");
      sites.insert(sites.end(), static_cast<std::size_t>(count), site);
    }
    return from_sites(std::move(sites));
  }

  static MultiIndex delta(int site, int count = 1) { return from_counts({{site, count}}); }

  int degree() const { return static_cast<int>(sites_.size()); }
  bool is_zero() const { return sites_.empty(); }

  int count(int site) const {
    auto [lo, hi] = std::equal_range(sites_.begin(), sites_.end(), site);
    return static_cast<int>(hi - lo);
  }

  /// (site, count) pairs in increasing site order; counts are >= 1.
  std::vector<std::pair<int, int>> entries() const {
    std::vector<std::pair<int, int>> out;
    for (int s : sites_) {
      if (!out.empty() && out.back().first == s)
        ++out.back().second;
      else
        out.emplace_back(s, 1);
    }
    return out;
  }

  /// Occupied sites s(I), without repetition.
  std::vector<int> support() const {
    std::vector<int> out;
    for (auto [s, c] : entries()) out.push_back(s);
    return out;
  }

  const std::vector<int>& sites() const { return sites_; }
  int min_site() const { return sites_.front(); }
  int max_site() const { return sites_.back(); }

  MultiIndex plus(int site) const {
    auto s = sites_;
    s.insert(std::upper_bound(s.begin(), s.end(), site), site);
    return from_sorted(std::move(s));
  }

  /// I - delta_site, or nullopt when that entry would become negative.
  std::optional<MultiIndex> minus(int site) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
    if (it == sites_.end() || *it != site) return std::nullopt;
    auto s = sites_;
    s.erase(s.begin() + (it - sites_.begin()));
    return from_sorted(std::move(s));
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    std::vector<int> s;
    s.reserve(a.sites_.size() + b.sites_.size());
    std::merge(a.sites_.begin(), a.sites_.end(), b.sites_.begin(), b.sites_.end(),
               std::back_inserter(s));
    return from_sorted(std::move(s));
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  static MultiIndex from_sorted(std::vector<int> s) {
    MultiIndex m;
    m.sites_ = std::move(s);
    return m;
  }

  std::vector<int> sites_;
};

inline int degree(const MultiIndex& I) { return I.degree(); }

/// The coding z_I: occupied sites in increasing order, with multiplicity.
inline LatticePoint encode(const MultiIndex& I) { return LatticePoint(I.sites()); }

/// Inverse of encode; unsorted input is sorted first so S_N-classes collapse.
inline MultiIndex decode(const LatticePoint& z) { return MultiIndex::from_sites(z.coords); }

/// tau^n on indices: a particle at site k moves to k - n.
inline MultiIndex shift(const MultiIndex& I, int n) {
  std::vector<int> s = I.sites();
  for (int& x : s) x -= n;
  return MultiIndex::from_sites(std::move(s));
}

/// n . I = tau^n (I - delta_n + delta_0); nullopt when an entry goes negative.
inline std::optional<MultiIndex> dot_action(int n, const MultiIndex& I) {
  if (n == 0) return I;
  auto removed = I.minus(n);
  if (!removed) return std::nullopt;
  return shift(removed->plus(0), n);
}

/// The orbit shadow o(I) = { n . I : n in s(I) or n = 0 }, sorted.
inline std::vector<MultiIndex> orbit(const MultiIndex& I) {
  std::vector<MultiIndex> out{I};
  for (int n : I.support())
    if (n != 0) out.push_back(*dot_action(n, I));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Unique member of o(I) supported on the nonnegative sites.
inline MultiIndex representative(const MultiIndex& I) {
  if (I.is_zero() || I.min_site() >= 0) return I;
  return *dot_action(I.min_site(), I);
}

inline LatticePoint cone_point(const MultiIndex& I) { return encode(representative(I)); }

/// All cone points of dimension N with largest coordinate <= bound, lexicographic.
inline std::vector<LatticePoint> enumerate_orbits(int N, int bound) {
  if (N < 0) throw PreconditionError("degree must be nonnegative");
  std::vector<LatticePoint> out;
  if (N == 0) {
    out.emplace_back();
    return out;
  }
  if (bound < 0) return out;
  std::vector<int> z(static_cast<std::size_t>(N), 0);
  while (true) {
    out.emplace_back(z);
    int i = N - 1;
    while (i >= 0 && z[static_cast<std::size_t>(i)] == bound) --i;
    if (i < 0) break;
    int v = z[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < N; ++j) z[static_cast<std::size_t>(j)] = v;
  }
  return out;
}

/// All nondecreasing lattice points of dimension N with coordinates in [lo, hi].
inline std::vector<LatticePoint> enumerate_sorted_points(int N, int lo, int hi) {
  std::vector<LatticePoint> out;
  if (N == 0) {
    out.emplace_back();
    return out;
  }
  if (hi < lo) return out;
  for (auto& z : enumerate_orbits(N, hi - lo)) {
    for (int& c : z.coords) c += lo;
    out.push_back(std::move(z));
  }
  return out;
}

/// Textual form: "site:count" pairs separated by commas; the zero multi-index is "0".
inline std::string to_text(const MultiIndex& I) {
  if (I.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [s, c] : I.entries()) {
    os << (first ? "" : ",") << s << ':' << c;
    first = false;
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& I) { return os << to_text(I); }

inline MultiIndex parse_multiindex(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text == "0") return {};
  std::map<int, int> counts;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("multi-index entry without ':' in '" + std::string(item) + "'");
    int site = 0, count = 0;
    try {
      std::size_t used = 0;
      std::string a(trim(item.substr(0, colon))), b(trim(item.substr(colon + 1)));
      site = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      count = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw ParseError("malformed multi-index entry '" + std::string(item) + "'");
    }
    if (count < 0) throw ParseError("negative count in multi-index");
    counts[site] += count;
  }
  return MultiIndex::from_counts(counts);
}

}  // namespace closedexact
