#include "advrc/shatter.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "advrc/normkit.hpp"
#include "advrc/rng.hpp"

namespace advrc {

SignPattern sign_pattern(const NetParams& net, const Vec& x, double y, const PerturbSpec& pert,
                         const ShatterOptions& opts) {
  return net_adversarial(net, x, y, pert, opts.budget, opts.enumeration).pattern;
}

PartitionSummary growth_function(const Sample& sample, const NetParams& net,
                                 const PerturbSpec& pert, const ShatterOptions& opts) {
  sample.validate();
  const int n = net.neurons();
  std::map<std::string, std::pair<SignPattern, std::vector<int>>> groups;
  for (int i = 0; i < sample.size(); ++i) {
    SignPattern pat = sign_pattern(net, sample.X.col(i), sample.y[i], pert, opts);
    auto [it, fresh] = groups.try_emplace(pat.encode(n));
    if (fresh) it->second.first = pat;
    it->second.second.push_back(i);
  }
  PartitionSummary out;
  out.pi = static_cast<int>(groups.size());
  for (auto& [enc, entry] : groups) {
    out.patterns.emplace_back(entry.first, static_cast<int>(entry.second.size()));
    out.parts.push_back(std::move(entry.second));
  }
  return out;
}

bool is_adversarially_shattered(const Sample& sample, const NetParams& net,
                                const PerturbSpec& pert, const ShatterOptions& opts) {
  sample.validate();
  const int n = net.neurons();
  if (n > 30) throw BudgetExceeded("is_adversarially_shattered: too many neurons");
  std::set<std::uint32_t> pos_sets;
  for (int i = 0; i < sample.size(); ++i) {
    SignPattern pat = sign_pattern(net, sample.X.col(i), sample.y[i], pert, opts);
    if (!pat.zero.empty()) continue;  // only empty-Z patterns witness
    std::uint32_t mask = 0;
    for (int j : pat.pos) mask |= (1u << j);
    pos_sets.insert(mask);
  }
  return pos_sets.size() == (1ull << n);
}

long long sauer_bound(int n, int t) {
  if (n < 0 || n > 60) throw std::invalid_argument("sauer_bound: n must lie in [0, 60]");
  if (t < 0 || t > n) throw std::invalid_argument("sauer_bound: t must lie in [0, n]");
  long long sum = 0;
  long long binom = 1;  // C(n, 0)
  for (int i = 0; i <= t; ++i) {
    sum += binom;
    binom = binom * (n - i) / (i + 1);
  }
  return sum;
}

double orthogonal_capacity_bound(double tau, const Exponent& p, double x_norm_p_inf, double eps,
                                 double w_min) {
  if (!(tau > 0.0) || !(x_norm_p_inf > 0.0) || !(eps > 0.0) || !(w_min > 0.0))
    throw std::invalid_argument("orthogonal_capacity_bound: inputs must be > 0");
  if (p.value() <= 1.0)
    throw std::invalid_argument("orthogonal_capacity_bound: requires p > 1");
  const double c2 = constants(p).c2;
  const double num = 2.0 * tau * c2 * x_norm_p_inf / (eps * w_min);
  return num * num;
}

ShatterStats partition_stats(const Sample& sample, const PerturbSpec& pert,
                             const std::vector<NetParams>& candidates,
                             const ShatterOptions& opts) {
  if (candidates.empty())
    throw std::invalid_argument("partition_stats: candidate set must be non-empty");
  ShatterStats stats;
  stats.candidates = static_cast<int>(candidates.size());
  std::set<std::string> partitions;
  for (const NetParams& net : candidates) {
    PartitionSummary g = growth_function(sample, net, pert, opts);
    stats.pi_star = std::max(stats.pi_star, g.pi);
    // canonical encoding: sorted (pattern, index-set) pairs
    std::string enc;
    for (size_t k = 0; k < g.parts.size(); ++k) {
      enc += g.patterns[k].first.encode(net.neurons());
      enc += ':';
      for (int i : g.parts[k]) enc += std::to_string(i) + ",";
      enc += ';';
    }
    partitions.insert(enc);
  }
  stats.c_star_estimate = static_cast<int>(partitions.size());
  return stats;
}

}  // namespace advrc
