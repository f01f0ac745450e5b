#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include "json.hpp"

#include "advrc/sample.hpp"

namespace advrc {

using Json = nlohmann::ordered_json;

// FNV-1a over a canonical byte stream; reports embed the hex digest so a
// re-run over the same inputs is recognizable.
class Digest {
 public:
  Digest& add(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    return add_u64(bits);
  }
  Digest& add(std::int64_t v) { return add_u64(static_cast<std::uint64_t>(v)); }
  Digest& add(const std::string& s) {
    for (unsigned char c : s) step(c);
    step(0xff);
    return *this;
  }
  Digest& add(const Vec& v) {
    add(static_cast<std::int64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) add(v[i]);
    return *this;
  }
  Digest& add(const Mat& m) {
    add(static_cast<std::int64_t>(m.rows()));
    add(static_cast<std::int64_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) add(m(i, j));
    return *this;
  }
  Digest& add(const Sample& s) { return add(s.X).add(s.y); }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  Digest& add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) step(static_cast<unsigned char>(v >> (8 * i)));
    return *this;
  }
  void step(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// Norm orders serialize as numbers, with "inf" as a string to stay portable.
Json exponent_json(const Exponent& p);
Exponent exponent_from_json(const Json& j);

struct Estimate;
struct PerturbResult;
struct BoundReport;
struct PartitionSummary;
struct ShatterStats;
struct SignPattern;

Json json_of(const Estimate& est);
Json json_of(const PerturbResult& res);
Json json_of(const BoundReport& rep);
Json json_of(const SignPattern& pat);
Json json_of(const PartitionSummary& summary, int neurons);
Json json_of(const ShatterStats& stats);

}  // namespace advrc
