#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "advrc/perturb.hpp"
#include "advrc/sample.hpp"

namespace advrc {

// Linear family: x -> <w, x> over the p-ball of radius weight_bound.
struct LinearFamilySpec {
  Exponent p;
  double weight_bound = 1.0;  // W

  LinearFamilySpec() = default;
  LinearFamilySpec(Exponent p_, double w) : p(p_), weight_bound(w) {
    if (!(w > 0.0)) throw std::invalid_argument("LinearFamilySpec: weight bound must be > 0");
  }
};

// One-hidden-layer family: per-neuron p-ball of radius weight_bound, output
// weights in the l1-ball of radius output_l1_bound.
struct NetFamilySpec {
  Exponent p;
  double weight_bound = 1.0;    // W
  double output_l1_bound = 1.0; // Lambda
  int neurons = 1;              // n
  Activation activation = Activation::relu();

  NetFamilySpec() = default;
  NetFamilySpec(Exponent p_, double w, double lambda, int n, Activation act)
      : p(p_), weight_bound(w), output_l1_bound(lambda), neurons(n), activation(act) {
    if (!(w > 0.0) || !(lambda > 0.0) || n < 1)
      throw std::invalid_argument("NetFamilySpec: invalid parameters");
  }
};

enum class InnerMethod { closed, direction_search, param_search };

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;  // 1-sigma, from the i.i.d. per-draw values
  int draws = 0;
  std::uint64_t seed = 0;
  InnerMethod inner_method = InnerMethod::closed;
  std::vector<double> draw_values;
};

struct EstimateOptions {
  int workers = 1;
  int restarts = 4;  // projected-gradient restarts per draw
  int steps = 60;
};

struct NetEstimateOptions {
  int workers = 1;
  int restarts = 6;  // parameter-ascent restarts per draw
  int ascent_steps = 30;
  int inner_restarts = 3;  // budget of the per-point perturbation search
  int inner_steps = 40;
  int enumeration_cap = 12;
};

// Shared direction-search helper: maximizes `value` over the unit p-sphere
// starting from the given candidates plus seeded random directions. Monotone
// in the candidate set. Returns the best value (and direction through
// arg_best when non-null).
double sphere_direction_search(const Exponent& p, int d,
                               const std::function<double(const Vec&)>& value,
                               const std::function<Vec(const Vec&)>& grad,
                               const std::vector<Vec>& candidates, int restarts, int steps,
                               std::uint64_t seed, Vec* arg_best = nullptr);

// Deterministic sign draw for Monte Carlo draw `index` of a run keyed by
// `seed`; shared by all estimators so runs over the same sample align
// draw-by-draw.
Vec rademacher_signs(int m, std::uint64_t seed, std::uint64_t index);

// Monte Carlo adversarial Rademacher complexity of the linear family. Per
// draw the supremum over the p-ball of <w, u_sigma> - eps v_sigma |w|_{r*} is
// taken; at eps = 0 it is the closed form W |u_sigma|_{p*}.
Estimate estimate_linear(const Sample& sample, const LinearFamilySpec& spec,
                         const PerturbSpec& pert, int draws, std::uint64_t seed,
                         const EstimateOptions& opts = {});

// Monte Carlo adversarial Rademacher complexity of the single-ReLU family,
// by direction search on the positively homogeneous per-draw objective.
// Search may undershoot, so the mean is a lower estimate.
Estimate estimate_relu(const Sample& sample, const LinearFamilySpec& spec,
                       const PerturbSpec& pert, int draws, std::uint64_t seed,
                       const EstimateOptions& opts = {});

// Monte Carlo adversarial Rademacher complexity of the one-hidden-layer
// family by multi-restart projected ascent over (W, u); inner per-point
// values come from the exact r = 2 ReLU solver or the generic search. The
// mean is a certified lower estimate of the empirical complexity.
Estimate estimate_net(const Sample& sample, const NetFamilySpec& spec, const PerturbSpec& pert,
                      int draws, std::uint64_t seed, const NetEstimateOptions& opts = {});

}  // namespace advrc
