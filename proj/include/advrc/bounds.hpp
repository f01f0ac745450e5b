#pragma once

#include <string>
#include <utility>
#include <vector>

#include "advrc/rademacher.hpp"

namespace advrc {

struct BoundReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> components;
  std::string inputs_digest;

  double component(const std::string& key) const;
  bool has_component(const std::string& key) const;
  void add(const std::string& key, double v) { components.emplace_back(key, v); }
};

// The empirical complexity term inside composite bounds can be either a
// Monte Carlo estimate or the analytic linear-class bound.
enum class CleanTermMode { monte_carlo, analytic };

struct McParams {
  int draws = 2000;
  std::uint64_t seed = 0;
  EstimateOptions opts;
};

struct HypothesisViolated : std::runtime_error {
  HypothesisViolated(const std::string& msg, std::vector<int> idx)
      : std::runtime_error(msg), offending(std::move(idx)) {}
  std::vector<int> offending;
};

// Complexity bounds for the clean linear family: the group-norm bound
// (case-selected over p) and, for p <= 2, the classical sqrt(p*-1) form.
// Components: new_bound, classical_bound (when defined), p_case,
// new_is_smaller.
BoundReport linear_complexity_bounds(const Sample& sample, const LinearFamilySpec& spec);

// Adversarial linear sandwich: upper = clean + eps W max(1, d^(1-1/r-1/p)) / (2 sqrt(m)),
// lower = max(clean, eps W max(...) / (2 sqrt(2m))).
BoundReport adversarial_linear_bounds(const Sample& sample, const LinearFamilySpec& spec,
                                      const PerturbSpec& pert, CleanTermMode mode,
                                      const McParams& mc = {});

// Single-ReLU sandwich. The clean term is the linear complexity restricted to
// T_eps = {i : y_i = -1 or (y_i = +1 and |x_i|_r > eps)}; the lower bound is a
// best-found direction search (any feasible direction is valid), and the
// refined lower bound counts the delta-margin set at the norm-ratio witness.
BoundReport relu_complexity_bounds(const Sample& sample, const LinearFamilySpec& spec,
                                   const PerturbSpec& pert, double delta_refine,
                                   CleanTermMode mode, const McParams& mc = {});

// Lipschitz one-hidden-layer bound. Two log-term variants are reported:
// the fixed-constant form 1 + sqrt(d(n+1) log 36) and the sample-size form
// 1 + sqrt(2 d(n+1) log(6 sqrt(m))); the discrepancy between them is
// surfaced rather than resolved.
BoundReport net_lipschitz_bound(const Sample& sample, const NetFamilySpec& spec,
                                const PerturbSpec& pert);

enum class ShatterBoundVariant { infty_norm, two_norm };

// Growth-function bound with data-dependent counts c_star and pi_star.
// Requires |x_i|_r >= eps for every point (HypothesisViolated lists
// offenders) and 1 < r < inf.
BoundReport net_shatter_bound(const Sample& sample, const NetFamilySpec& spec,
                              const PerturbSpec& pert, long long c_star, long long pi_star,
                              ShatterBoundVariant variant);

struct MarginBoundInputs {
  double rho = 1.0;        // margin
  double delta = 0.05;     // confidence
  double loss_cap = 1.0;   // c
  double complexity = 0.0; // adversarial Rademacher term

  void validate() const;
};

// Clamped ramp min(1, max(0, 1 - x/rho)).
double margin_loss(double x, double rho);

// risk + (2/rho) complexity + 3 c sqrt(log(2/delta) / (2m)).
double robust_margin_bound(double empirical_margin_risk, const MarginBoundInputs& in, int m);

// Covering number bound (3R/eps)^d, evaluated in log space.
double covering_size_bound(double R, double eps, int d);

}  // namespace advrc
