#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advrc/normkit.hpp"

namespace advrc {

// Attack geometry: perturbations live in the eps-ball of the r-norm.
struct PerturbSpec {
  Exponent r;
  double eps = 0.0;

  PerturbSpec() = default;
  PerturbSpec(Exponent r_, double eps_) : r(r_), eps(eps_) {
    if (!(eps >= 0.0)) throw std::invalid_argument("PerturbSpec: eps must be >= 0");
  }
};

// One-hidden-layer ReLU network weights: columns of W are the neurons w_j,
// u holds the output weights.
struct NetParams {
  Mat W;  // d x n
  Vec u;  // n

  int dim() const { return static_cast<int>(W.rows()); }
  int neurons() const { return static_cast<int>(W.cols()); }
};

// Partition of neuron indices by the sign of w_j.(x + eps s) at a perturbation.
struct SignPattern {
  std::vector<int> pos, zero, neg;

  bool operator==(const SignPattern& o) const;
  // Base-3 string over neuron index order (deterministic canonical form).
  std::string encode(int n) const;
};

SignPattern classify_pattern(const NetParams& net, const Vec& x, const Vec& s, double eps,
                             double tau_zero = 1e-9);

enum class PerturbMethod { closed_form, enumeration_r2, search };

struct PerturbResult {
  double value = 0.0;  // min of y * sum_j u_j (w_j.(x+eps s))_+
  Vec s_star;
  SignPattern pattern;
  bool on_sphere = false;
  PerturbMethod method = PerturbMethod::search;
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct NoFeasiblePattern : std::runtime_error {
  explicit NoFeasiblePattern(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateDual : std::runtime_error {
  explicit DegenerateDual(const std::string& m) : std::runtime_error(m) {}
};
struct OptimalityViolation : std::runtime_error {
  explicit OptimalityViolation(const std::string& m) : std::runtime_error(m) {}
};

// Worst case of y <w, x'> over the eps-ball: y <w, x> - eps |w|_{r*}.
double linear_adversarial_margin(const Vec& w, const Vec& x, double y, const PerturbSpec& spec);

// Worst case of y (<w, x'>)_+ over the eps-ball: y (w.x - eps y |w|_{r*})_+.
double relu_adversarial_margin(const Vec& w, const Vec& x, double y, const PerturbSpec& spec);

struct EnumerationOptions {
  int max_neurons = 12;
  double tau_zero = 1e-9;
  double rank_tol = 1e-10;
};

// Exact minimizer of y sum_j u_j (w_j.(x + eps s))_+ over the unit 2-ball of
// s, by enumerating candidate sign patterns (P, Z, N). Throws BudgetExceeded
// when n exceeds the enumeration cap and NoFeasiblePattern on numerical
// degeneracy (callers fall back to the generic search).
PerturbResult net_adversarial_exact_r2(const NetParams& net, const Vec& x, double y, double eps,
                                       const EnumerationOptions& opts = {});

struct SearchBudget {
  int restarts = 32;
  int steps = 500;
  double step_scale = 0.1;  // step c/sqrt(k) with c = step_scale * eps
  std::uint64_t seed = 0;
};

struct Activation {
  enum class Kind { relu, leaky_relu, tanh };
  Kind kind = Kind::relu;
  double alpha = 0.0;  // leaky slope

  static Activation relu() { return {Kind::relu, 0.0}; }
  static Activation leaky_relu(double a) { return {Kind::leaky_relu, a}; }
  static Activation tanh() { return {Kind::tanh, 0.0}; }

  double operator()(double z) const;
  double slope(double z) const;  // (sub)derivative
  double lipschitz() const;
  std::string name() const;
};

// Projected subgradient search over the r-ball, 1 < r < inf (r = 2 included;
// eps = 0 returns the clean value at s = 0). The result is an upper bound on
// the true minimum. Best-found points are polished on their local sign
// pattern before the final comparison.
PerturbResult net_adversarial_search(const NetParams& net, const Vec& x, double y,
                                     const PerturbSpec& spec, const SearchBudget& budget,
                                     const Activation& act = Activation::relu());

// Exact r = 2 path when applicable, otherwise search; NoFeasiblePattern and
// BudgetExceeded fall through to the search.
PerturbResult net_adversarial(const NetParams& net, const Vec& x, double y,
                              const PerturbSpec& spec, const SearchBudget& budget,
                              const EnumerationOptions& opts = {});

struct NecessaryConditionReport {
  double lambda = 0.0;      // multiplier of the norm constraint, >= 0
  Vec t;                    // multipliers for the Z-set, clamped to [0,1]
  double residual = 0.0;    // stationarity defect, 2-norm
  double constraint_defect = 0.0;  // | |s|_r - 1 | plus Z-constraint violation
};

// First-order check at a unit-r-sphere point for the folded objective
// sum_j u_j (w_j.(x+eps s))_+ (fold the label into u before calling).
// Solves the multipliers (t, lambda) and reports the stationarity residual
//   | eps (sum_P u_j w_j + sum_Z t_j u_j w_j) + lambda |s|^{r-1} sgn(s) |_2.
// Throws DegenerateDual when r < 2 and s has a zero coordinate.
NecessaryConditionReport verify_necessary_condition(const NetParams& net, const Vec& x,
                                                    const Vec& s, const SignPattern& pattern,
                                                    const Exponent& r, double eps);

// Deterministic draws from the unit r-ball: generalized-Gaussian directions
// normalized to the r-sphere, radius U^(1/d). Ball-uniform at r = 2,
// approximately uniform otherwise.
std::vector<Vec> sample_r_ball(int d, const Exponent& r, int count, std::uint64_t seed);

enum class SphereOptimality { MustBeOnSphere, SphereOrCenter };

// Classifies which attainment case applies and asserts the exact result
// matches it; throws OptimalityViolation otherwise.
SphereOptimality check_sphere_optimality(const PerturbResult& result, const Vec& x,
                                         const PerturbSpec& spec, int n, int d);

// Objective y sum_j u_j rho(w_j.(x + eps s)) evaluated at s.
double net_objective(const NetParams& net, const Vec& x, double y, double eps, const Vec& s,
                     const Activation& act = Activation::relu());

}  // namespace advrc
