#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "advrc/bounds.hpp"
#include "advrc/rng.hpp"

using namespace advrc;

namespace {
const Exponent two(2.0);
const Exponent inf = Exponent::infinity();

Sample gaussian_sample(int d, int m, std::uint64_t seed) {
  return generate_sample(d, m, SampleDistribution::gaussian, seed);
}
}  // namespace

TEST_CASE("linear complexity bounds coincide at p = 2") {
  const Sample s = gaussian_sample(4, 6, 7);
  const BoundReport rep = linear_complexity_bounds(s, LinearFamilySpec(two, 1.0));
  CHECK(rep.component("new_bound") ==
        doctest::Approx(rep.component("classical_bound")).epsilon(1e-12));
  // both equal the Frobenius norm over m
  CHECK(rep.value == doctest::Approx(s.X.norm() / s.size()).epsilon(1e-12));
}

TEST_CASE("linear complexity bound for p = 1 on the identity") {
  Sample s;
  s.X = Mat::Identity(4, 4);
  s.y = Vec::Ones(4);
  const BoundReport rep = linear_complexity_bounds(s, LinearFamilySpec(Exponent(1.0), 1.0));
  CHECK(rep.value == doctest::Approx(0.25 * std::sqrt(2.0 * std::log(8.0))).epsilon(1e-13));
}

TEST_CASE("group-norm bound undercuts the classical one for p in (1,2]") {
  rng::Engine eng(rng::derive(3, "lin-vs-classical"));
  for (int trial = 0; trial < 100; ++trial) {
    Sample s = gaussian_sample(4, 4, rng::derive(3, "mat", trial));
    for (double pv : {1.2, 1.5, 1.8, 2.0}) {
      const BoundReport rep = linear_complexity_bounds(s, LinearFamilySpec(Exponent(pv), 1.0));
      CHECK(rep.component("new_bound") <=
            rep.component("classical_bound") * (1.0 + 1e-12));
      CHECK(rep.component("new_is_smaller") == 1.0);
    }
  }
}

TEST_CASE("adversarial linear bounds degenerate at eps = 0") {
  const Sample s = gaussian_sample(3, 10, 11);
  const BoundReport rep = adversarial_linear_bounds(
      s, LinearFamilySpec(two, 1.0), PerturbSpec(two, 0.0), CleanTermMode::analytic);
  CHECK(rep.component("upper") == rep.component("lower"));
  CHECK(rep.component("upper") == rep.component("clean_term"));
}

TEST_CASE("adversarial linear dimension term formula") {
  Sample s = gaussian_sample(4, 100, 13);
  const BoundReport rep = adversarial_linear_bounds(
      s, LinearFamilySpec(inf, 1.0), PerturbSpec(inf, 0.1), CleanTermMode::analytic);
  CHECK(rep.component("dimension_term") == doctest::Approx(0.02).epsilon(1e-13));
  CHECK(rep.component("upper") ==
        doctest::Approx(rep.component("clean_term") + rep.component("dimension_term"))
            .epsilon(1e-12));

  // 1/p + 1/r >= 1 collapses the factor to one
  const BoundReport flat = adversarial_linear_bounds(
      s, LinearFamilySpec(Exponent(1.0), 1.0), PerturbSpec(two, 0.3), CleanTermMode::analytic);
  CHECK(flat.component("max_factor") == 1.0);
  CHECK(flat.component("dimension_term") == doctest::Approx(0.3 / (2.0 * 10.0)).epsilon(1e-13));
}

TEST_CASE("adversarial linear upper dominates lower") {
  rng::Engine eng(rng::derive(17, "sandwich-shape"));
  for (int trial = 0; trial < 25; ++trial) {
    Sample s = gaussian_sample(eng.uniform_int(2, 5), eng.uniform_int(3, 12),
                               rng::derive(17, "s", trial));
    const double orders[] = {1.0, 1.5, 2.0, std::numeric_limits<double>::infinity()};
    const LinearFamilySpec spec(Exponent(orders[trial % 4]), 0.5 + eng.uniform());
    const PerturbSpec pert(Exponent(orders[(trial / 4) % 4]), eng.uniform());
    const BoundReport rep = adversarial_linear_bounds(s, spec, pert, CleanTermMode::analytic);
    CHECK(rep.component("upper") >= rep.component("lower") - 1e-14);
    CHECK(rep.component("upper") >= 0.0);
  }
}

TEST_CASE("relu bounds prune the T_eps set") {
  Sample s;
  s.X = Mat::Zero(3, 4);
  for (int i = 0; i < 4; ++i) s.X(0, i) = 0.1;
  s.y = Vec::Ones(4);
  const BoundReport rep = relu_complexity_bounds(s, LinearFamilySpec(two, 1.0),
                                                 PerturbSpec(two, 0.5), 0.0,
                                                 CleanTermMode::analytic);
  CHECK(rep.component("t_eps_count") == 0.0);
  CHECK(rep.component("clean_term") == 0.0);
  CHECK(rep.component("refined_lower") == 0.0);  // delta = 0
}

TEST_CASE("relu lower bound on a single clean point") {
  Sample s;
  s.X = Mat::Zero(2, 1);
  s.X(0, 0) = 1.0;
  s.y = Vec::Ones(1);
  const BoundReport rep = relu_complexity_bounds(s, LinearFamilySpec(two, 1.0),
                                                 PerturbSpec(two, 0.0), 0.0,
                                                 CleanTermMode::analytic);
  CHECK(rep.component("lower") == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-10));
}

TEST_CASE("net lipschitz bound single-line arithmetic") {
  Sample s;
  s.X = Mat::Zero(1, 1);
  s.X(0, 0) = 1.0;
  s.y = Vec::Ones(1);
  const NetFamilySpec spec(two, 1.0, 1.0, 1, Activation::relu());
  const BoundReport rep = net_lipschitz_bound(s, spec, PerturbSpec(two, 0.0));
  const double expect = 1.0 * (1.0 + std::sqrt(2.0 * std::log(36.0)));
  CHECK(rep.component("bound_fixed_log") == doctest::Approx(expect).epsilon(1e-13));
  CHECK(rep.component("bound_fixed_log") == doctest::Approx(3.677).epsilon(1e-3));
  CHECK(rep.component("bound_sample_log") ==
        doctest::Approx(1.0 + std::sqrt(4.0 * std::log(6.0))).epsilon(1e-13));
}

TEST_CASE("net lipschitz bound is linear in eps and activation-insensitive for small slope") {
  const Sample s = gaussian_sample(3, 9, 19);
  const NetFamilySpec relu_spec(two, 1.0, 2.0, 3, Activation::relu());
  const BoundReport b1 = net_lipschitz_bound(s, relu_spec, PerturbSpec(two, 0.2));
  const BoundReport b2 = net_lipschitz_bound(s, relu_spec, PerturbSpec(two, 0.4));
  const double m = s.size();
  const double per_eps = relu_spec.weight_bound * relu_spec.output_l1_bound / std::sqrt(m) *
                         b1.component("log_term_fixed") * b1.component("max_factor");
  CHECK(b2.component("bound_fixed_log") - b1.component("bound_fixed_log") ==
        doctest::Approx(0.2 * per_eps).epsilon(1e-10));

  const NetFamilySpec leaky_spec(two, 1.0, 2.0, 3, Activation::leaky_relu(0.1));
  const BoundReport b3 = net_lipschitz_bound(s, leaky_spec, PerturbSpec(two, 0.2));
  CHECK(b3.component("lipschitz") == 1.0);
  CHECK(b3.value == b1.value);
}

TEST_CASE("shatter bound K factor and collapsed form") {
  const Sample s = gaussian_sample(4, 8, 23);
  const PerturbSpec pert(two, 0.0);
  const NetFamilySpec p2(two, 1.0, 1.0, 3, Activation::relu());
  const BoundReport rep2 = net_shatter_bound(s, p2, pert, 1, 1, ShatterBoundVariant::infty_norm);
  CHECK(rep2.component("k_factor") == 1.0);
  CHECK(rep2.value == doctest::Approx(group_norm(s.X.transpose(), inf, two) /
                                      std::sqrt(static_cast<double>(s.size())))
                          .epsilon(1e-12));

  const NetFamilySpec p1(Exponent(1.0), 1.0, 1.0, 3, Activation::relu());
  const BoundReport rep1 = net_shatter_bound(s, p1, pert, 1, 1, ShatterBoundVariant::infty_norm);
  CHECK(rep1.component("k_factor") == doctest::Approx(std::sqrt(2.0 * std::log(8.0))));
}

TEST_CASE("shatter bound rejects points inside the perturbation ball") {
  Sample s = gaussian_sample(3, 5, 29);
  for (int i = 0; i < s.size(); ++i) s.X.col(i) /= s.X.col(i).norm();
  s.X.col(2) *= 1e-3;  // push one point inside the eps-ball
  const NetFamilySpec spec(two, 1.0, 1.0, 2, Activation::relu());
  try {
    net_shatter_bound(s, spec, PerturbSpec(two, 0.5), 1, 1, ShatterBoundVariant::infty_norm);
    FAIL("expected HypothesisViolated");
  } catch (const HypothesisViolated& e) {
    CHECK(e.offending == std::vector<int>{2});
  }
  CHECK_THROWS_AS(net_shatter_bound(s, spec, PerturbSpec(inf, 0.0), 1, 1,
                                    ShatterBoundVariant::infty_norm),
                  std::invalid_argument);
}

TEST_CASE("margin loss ramp") {
  CHECK(margin_loss(1.0, 1.0) == 0.0);
  CHECK(margin_loss(0.0, 1.0) == 1.0);
  CHECK(margin_loss(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(margin_loss(-3.0, 2.0) == 1.0);
  CHECK(margin_loss(7.0, 2.0) == 0.0);
}

TEST_CASE("robust margin bound evaluation") {
  MarginBoundInputs in;
  in.rho = 1.0;
  in.delta = 2.0 / std::exp(2.0);  // log(2/delta) = 2
  in.loss_cap = 1.0;
  in.complexity = 0.0;
  CHECK(robust_margin_bound(0.0, in, 2) == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-13));

  in.complexity = 5.0;
  in.rho = 1e9;
  const double nearly = robust_margin_bound(0.25, in, 2);
  CHECK(nearly == doctest::Approx(0.25 + 3.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("covering size bound") {
  CHECK(covering_size_bound(1.0 / 3.0, 1.0, 2) == doctest::Approx(1.0));
  CHECK(covering_size_bound(1.0, 1.0, 2) == doctest::Approx(9.0));
  // radius Lambda covered at resolution Lambda/(2 sqrt m) gives (6 sqrt m)^d
  const double m = 16.0, lambda = 2.5;
  CHECK(covering_size_bound(lambda, lambda / (2.0 * std::sqrt(m)), 3) ==
        doctest::Approx(std::pow(6.0 * std::sqrt(m), 3)).epsilon(1e-10));
}

TEST_CASE("bounds are monotone in eps, W and Lambda") {
  rng::Engine eng(rng::derive(31, "monotone-bounds"));
  for (int trial = 0; trial < 10; ++trial) {
    Sample s = gaussian_sample(3, 8, rng::derive(31, "s", trial));
    const double base_eps = 0.1 + 0.3 * eng.uniform();
    double prev = -1.0;
    for (double scale : {1.0, 1.5, 2.0}) {
      const BoundReport rep =
          adversarial_linear_bounds(s, LinearFamilySpec(two, 1.0),
                                    PerturbSpec(two, base_eps * scale), CleanTermMode::analytic);
      CHECK(rep.value >= prev);
      prev = rep.value;
    }
    prev = -1.0;
    for (double wb : {0.5, 1.0, 2.0}) {
      const BoundReport rep = net_lipschitz_bound(
          s, NetFamilySpec(two, wb, 1.0, 2, Activation::relu()), PerturbSpec(two, base_eps));
      CHECK(rep.value >= prev);
      prev = rep.value;
    }
    prev = -1.0;
    for (double lam : {0.5, 1.0, 2.0}) {
      const BoundReport rep = net_lipschitz_bound(
          s, NetFamilySpec(two, 1.0, lam, 2, Activation::relu()), PerturbSpec(two, base_eps));
      CHECK(rep.value >= prev);
      prev = rep.value;
    }
  }
}

TEST_CASE("component combination stays consistent") {
  const Sample s = gaussian_sample(4, 12, 37);
  const BoundReport rep = adversarial_linear_bounds(
      s, LinearFamilySpec(Exponent(1.5), 1.2), PerturbSpec(Exponent(3.0), 0.25),
      CleanTermMode::analytic);
  CHECK(rep.value ==
        doctest::Approx(rep.component("clean_term") + rep.component("dimension_term"))
            .epsilon(1e-12));
  CHECK(rep.inputs_digest.size() == 16);
}
