#include "advrc/sample.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "advrc/rng.hpp"

namespace advrc {

void Sample::validate() const {
  if (X.cols() != y.size())
    throw std::invalid_argument("Sample: column count does not match label count");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw std::invalid_argument("Sample: labels must be +/-1");
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      if (!std::isfinite(X(i, j))) throw std::invalid_argument("Sample: non-finite feature");
}

Sample load_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw CsvParseError(path, 1, "missing header");
  ++lineno;
  // header: label,f1,...,fd
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "label")
    throw CsvParseError(path, lineno, "header must start with 'label'");
  const int d = static_cast<int>(header.size()) - 1;
  if (d < 1) throw CsvParseError(path, lineno, "no feature columns");

  std::vector<double> labels;
  std::vector<double> features;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      double v;
      try {
        size_t pos = 0;
        v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw CsvParseError(path, lineno, "cannot parse field " + std::to_string(col + 1) +
                                              " ('" + cell + "')");
      }
      if (col == 0) {
        if (v != 1.0 && v != -1.0)
          throw CsvParseError(path, lineno, "label must be +1 or -1");
        labels.push_back(v);
      } else {
        if (!std::isfinite(v)) throw CsvParseError(path, lineno, "non-finite feature");
        features.push_back(v);
      }
      ++col;
    }
    if (col != d + 1)
      throw CsvParseError(path, lineno, "expected " + std::to_string(d + 1) + " fields, got " +
                                            std::to_string(col));
  }

  Sample s;
  const int m = static_cast<int>(labels.size());
  s.X.resize(d, m);
  s.y.resize(m);
  for (int j = 0; j < m; ++j) {
    s.y[j] = labels[j];
    for (int i = 0; i < d; ++i) s.X(i, j) = features[static_cast<size_t>(j) * d + i];
  }
  return s;
}

void save_sample_csv(const Sample& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sample file: " + path);
  out << "label";
  for (int i = 1; i <= s.dim(); ++i) out << ",f" << i;
  out << "\n";
  char buf[64];
  for (int j = 0; j < s.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%d", s.y[j] > 0 ? 1 : -1);
    out << buf;
    for (int i = 0; i < s.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.X(i, j));
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Sample generate_sample(int d, int m, SampleDistribution dist, std::uint64_t seed) {
  if (d < 1 || m < 1) throw std::invalid_argument("generate_sample: d and m must be >= 1");
  rng::Engine eng(rng::derive(seed, "sample-gen"));
  Sample s;
  s.X.resize(d, m);
  s.y.resize(m);
  for (int j = 0; j < m; ++j) {
    s.y[j] = (j % 2 == 0) ? 1.0 : -1.0;  // balanced labels
    Vec col(d);
    switch (dist) {
      case SampleDistribution::gaussian:
        for (int i = 0; i < d; ++i) col[i] = eng.normal();
        break;
      case SampleDistribution::sphere: {
        double n2 = 0.0;
        do {
          for (int i = 0; i < d; ++i) col[i] = eng.normal();
          n2 = col.norm();
        } while (n2 == 0.0);
        col /= n2;
        break;
      }
      case SampleDistribution::grid: {
        // lattice points in [-1, 1]^d, visited in row-major order
        int idx = j;
        const int side = std::max(2, static_cast<int>(std::ceil(std::pow(m, 1.0 / d))));
        for (int i = 0; i < d; ++i) {
          col[i] = -1.0 + 2.0 * (idx % side) / (side - 1);
          idx /= side;
        }
        break;
      }
    }
    s.X.col(j) = col;
  }
  return s;
}

}  // namespace advrc
