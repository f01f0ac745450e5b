#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "advrc/normkit.hpp"

namespace advrc {

// Labeled dataset: columns of X are the points, y holds the +/-1 labels.
struct Sample {
  Mat X;  // d x m
  Vec y;  // m

  int dim() const { return static_cast<int>(X.rows()); }
  int size() const { return static_cast<int>(X.cols()); }
  void validate() const;
};

struct CsvParseError : std::runtime_error {
  CsvParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

// CSV layout: header "label,f1,...,fd", one row per point, label in {-1,+1}.
Sample load_sample_csv(const std::string& path);
// Values are written with 17 significant digits so a round trip is exact.
void save_sample_csv(const Sample& s, const std::string& path);

enum class SampleDistribution { gaussian, sphere, grid };

// Synthetic sample with balanced labels, deterministic under the seed.
Sample generate_sample(int d, int m, SampleDistribution dist, std::uint64_t seed);

}  // namespace advrc
