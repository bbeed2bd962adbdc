#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectra/spectral_calc.hpp"

namespace spectra {

struct SearchBounds {
  int max_points = 4;      // p + 1
  int max_pole = 5;        // pole order per point
  long long max_rank = 14;
  int max_blocks = 5;      // blocks per point
  int max_chain = 8;       // eigenvalue-chain length

  SearchBounds with_margin() const {
    SearchBounds b = *this;
    b.max_rank += 4;
    b.max_points += 1;
    return b;
  }
  nlohmann::json to_json() const;
  static SearchBounds from_json(const nlohmann::json& j);
};

// Canonical key of a shape: minimal (adjacency, HNF of the parameter kernel,
// base reduced modulo the kernel lattice) over admissible node relabelings.
// Two shapes describe the same Xi-fiber family iff their keys coincide.
std::string canonical_shape(const Shape& s);

// Coxeter type of <s_a : s_a(alpha) = alpha>: finite components printed as
// e.g. "A3", "D4xA1"; affine components as "E8(1)"; "" when empty. Throws
// MathError when a component is neither finite nor affine.
std::string winv_of(const SpectralType& st);

struct EnumEntry {
  SpectralType st;
  Shape shape;
  std::string shape_key;
  std::string winv;
};

struct EnumerationResult {
  long long idx = 0;
  SearchBounds bounds;
  std::vector<EnumEntry> types;                       // sorted, deduplicated
  std::map<std::string, std::vector<int>> by_shape;   // key -> indices

  nlohmann::json to_json() const;
};

// Exhaustive enumeration of fundamental (reduced + basic + effective)
// spectral types with rigidity index `idx` within `bounds`. `parallel`
// selects the OpenMP filtering path; results are identical either way.
EnumerationResult enumerate_fundamental(long long idx, const SearchBounds& bounds,
                                        bool parallel = false);

struct FixtureEntry {
  std::string name;
  Shape shape;
  std::vector<std::string> spectral_types;
  std::string winv;
};

struct FixtureTable {
  long long idx = 0;
  std::vector<FixtureEntry> entries;

  nlohmann::json to_json() const;
  static FixtureTable from_json(const nlohmann::json& j);
};

// Transcriptions of the published idx = 0 and idx = -2 classification tables.
FixtureTable builtin_fixture(long long idx);

struct FixtureDiff {
  std::vector<std::string> missing;  // fixture entries not enumerated
  std::vector<std::string> extra;    // enumerated shapes not in the fixture
  int matched = 0;
  bool clean() const { return missing.empty() && extra.empty(); }
  nlohmann::json to_json() const;
};

FixtureDiff compare_with_fixture(const EnumerationResult& result, const FixtureTable& fixture);

}  // namespace spectra
