#pragma once

#include <cstdint>
#include <vector>

#include "advrc/perturb.hpp"
#include "advrc/sample.hpp"

namespace advrc {

// Distinct sign patterns a sample induces on a fixed net at the optimal
// perturbations, with the grouping of sample indices.
struct PartitionSummary {
  std::vector<std::pair<SignPattern, int>> patterns;  // pattern with multiplicity
  int pi = 0;                                         // number of distinct patterns
  std::vector<std::vector<int>> parts;                // index groups, one per pattern
};

struct ShatterStats {
  int c_star_estimate = 0;  // distinct induced partitions over the candidates
  int pi_star = 0;          // max per-candidate pattern count
  int candidates = 0;
  // Both counts are lower estimates: the data-dependent suprema range over a
  // continuum of weight matrices, the candidate set is finite.
};

struct ShatterOptions {
  SearchBudget budget;
  EnumerationOptions enumeration;
};

// Sign pattern at the optimal perturbation of one point.
SignPattern sign_pattern(const NetParams& net, const Vec& x, double y, const PerturbSpec& pert,
                         const ShatterOptions& opts = {});

// Groups the sample by induced pattern; parts are listed in pattern-encoding
// order (deterministic canonical form).
PartitionSummary growth_function(const Sample& sample, const NetParams& net,
                                 const PerturbSpec& pert, const ShatterOptions& opts = {});

// True iff every subset of neuron indices arises as the positive set P of
// some sample point. Points with a nonempty Z at the optimum do not witness
// (the binomial-tail count applies to empty Z-sets); they are tallied
// separately by growth_function.
bool is_adversarially_shattered(const Sample& sample, const NetParams& net,
                                const PerturbSpec& pert, const ShatterOptions& opts = {});

// Exact binomial tail sum_{i=0}^{t} C(n, i); n is capped at 60 to stay within
// 64-bit integers.
long long sauer_bound(int n, int t);

// Capacity bound for orthogonal weight rows: 4 tau^2 c2(p)^2 |X|_{p,inf}^2 /
// (eps^2 w_min^2).
double orthogonal_capacity_bound(double tau, const Exponent& p, double x_norm_p_inf, double eps,
                                 double w_min);

// Distinct partitions and max pattern counts over an explicit candidate set.
ShatterStats partition_stats(const Sample& sample, const PerturbSpec& pert,
                             const std::vector<NetParams>& candidates,
                             const ShatterOptions& opts = {});

}  // namespace advrc
