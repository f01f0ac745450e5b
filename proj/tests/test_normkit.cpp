#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "advrc/normkit.hpp"
#include "advrc/perturb.hpp"
#include "advrc/rng.hpp"

using namespace advrc;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// independent oracle: direct power sum, no scaling tricks
double lp_oracle(const Vec& v, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
  return std::pow(acc, 1.0 / p);
}

Exponent ex(double p) { return Exponent(p); }
const Exponent inf = Exponent::infinity();

}  // namespace

TEST_CASE("lp_norm basic values") {
  CHECK(lp_norm(vec({3, 4}), ex(2)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(lp_norm(vec({1, -1, 1}), inf) == 1.0);
  CHECK(lp_norm(vec({1, 1, 1, 1}), ex(3)) ==
        doctest::Approx(lp_oracle(vec({1, 1, 1, 1}), 3)).epsilon(1e-13));
  CHECK(lp_norm(vec({1, 1, 1, 1}), ex(3)) == doctest::Approx(1.587401).epsilon(1e-6));
  CHECK(lp_norm(Vec(), ex(2)) == 0.0);
  CHECK(lp_norm(vec({0, 0}), ex(1.5)) == 0.0);
  CHECK_THROWS_AS(lp_norm(vec({1, std::numeric_limits<double>::quiet_NaN()}), ex(2)),
                  std::invalid_argument);
}

TEST_CASE("lp_norm agrees with the power-sum oracle on random inputs") {
  rng::Engine eng(rng::derive(11, "lp-oracle"));
  for (int trial = 0; trial < 200; ++trial) {
    const int d = eng.uniform_int(1, 8);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = eng.normal() * std::pow(10.0, eng.uniform_int(-3, 3));
    const double p = 1.0 + 4.0 * eng.uniform();
    CHECK(lp_norm(v, ex(p)) == doctest::Approx(lp_oracle(v, p)).epsilon(1e-12));
  }
}

TEST_CASE("dual exponent pairs") {
  CHECK(ex(2).dual() == ex(2));
  CHECK(ex(1).dual().is_inf());
  CHECK(inf.dual() == ex(1));
  CHECK(ex(4).dual().value() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  // exact round trip for arbitrary orders
  for (double p : {1.0, 1.1, 4.0 / 3.0, 1.5, 2.0, 2.7, 3.0, 10.0, 97.3}) {
    const Exponent e = ex(p);
    CHECK(e.dual().dual().value() == e.value());
    CHECK(1.0 == doctest::Approx(e.inv() + e.dual().inv()).epsilon(1e-15));
  }
  CHECK(inf.dual().dual().is_inf());
  CHECK_THROWS_AS(ex(0.5), std::invalid_argument);
}

TEST_CASE("dual_witness attains the dual norm") {
  const Vec u1 = vec({3, 4});
  const Vec w1 = dual_witness(u1, ex(2));
  CHECK(w1[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(w1[1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(u1.dot(w1) == doctest::Approx(5.0).epsilon(1e-14));

  const Vec u2 = vec({5, -2});
  const Vec w2 = dual_witness(u2, inf);
  CHECK(w2[0] == 1.0);
  CHECK(w2[1] == -1.0);
  CHECK(u2.dot(w2) == doctest::Approx(7.0));  // the 1-norm

  const Vec u3 = vec({1, 1, 1});
  const Vec w3 = dual_witness(u3, ex(1));
  CHECK(w3[0] == 1.0);  // tie broken at the lowest index
  CHECK(w3[1] == 0.0);
  CHECK(w3[2] == 0.0);

  CHECK_THROWS_AS(dual_witness(vec({0, 0}), ex(2)), ZeroVectorError);
}

TEST_CASE("Holder inequality with witness attainment") {
  rng::Engine eng(rng::derive(17, "holder"));
  const double ps[] = {1.0, 1.3, 1.5, 2.0, 3.0, 7.0,
                       std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = eng.uniform_int(1, 7);
    Vec w(d), x(d);
    for (int i = 0; i < d; ++i) {
      w[i] = eng.normal();
      x[i] = eng.normal();
    }
    const Exponent p(ps[trial % 7]);
    const double lhs = std::abs(w.dot(x));
    const double rhs = lp_norm(w, p) * lp_norm(x, p.dual());
    CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-300);

    if (lp_norm(x, ex(1)) > 1e-12) {
      const Vec v = dual_witness(x, p);  // |v|_p = 1, x.v = |x|_{p*}
      CHECK(lp_norm(v, p) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(x.dot(v) == doctest::Approx(lp_norm(x, p.dual())).epsilon(1e-10));
    }
  }
}

TEST_CASE("group_norm values") {
  CHECK(group_norm(Mat::Identity(2, 2), ex(2), inf) == doctest::Approx(1.0));
  for (double ps : {1.5, 2.0, 3.0, 10.0})
    CHECK(group_norm(Mat::Identity(4, 4), ex(ps), ex(2)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(group_norm(Mat::Ones(3, 2), ex(1), ex(1)) == doctest::Approx(6.0));
}

TEST_CASE("group_norm entrywise symmetry is exact") {
  rng::Engine eng(rng::derive(23, "gn-sym"));
  for (int trial = 0; trial < 50; ++trial) {
    const int d = eng.uniform_int(1, 8), m = eng.uniform_int(1, 8);
    Mat M(d, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < d; ++i) M(i, j) = eng.normal();
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      CHECK(group_norm(M, ex(p), ex(p)) == group_norm(M.transpose(), ex(p), ex(p)));
    }
    CHECK(group_norm(M, inf, inf) == group_norm(M.transpose(), inf, inf));
  }
}

TEST_CASE("norm_ratio_sup formula and witness") {
  CHECK(norm_ratio_sup(ex(2), ex(2), 5).value == 1.0);
  CHECK(norm_ratio_sup(inf, inf, 4).value == doctest::Approx(4.0));
  const NormRatio nr = norm_ratio_sup(ex(2), inf, 9);
  CHECK(nr.value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lp_norm(nr.witness, ex(2)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lp_norm(nr.witness, ex(1)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("norm_ratio_sup dominates random unit vectors and the witness attains it") {
  rng::Engine eng(rng::derive(29, "nr-dom"));
  const double orders[] = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 1 + trial % 6;
    const Exponent p(orders[trial % 5]);
    const Exponent r(orders[(trial / 5) % 5]);
    Vec w(d);
    for (int i = 0; i < d; ++i) w[i] = eng.normal();
    if (lp_norm(w, ex(1)) < 1e-12) continue;
    w /= lp_norm(w, p);
    const NormRatio nr = norm_ratio_sup(p, r, d);
    CHECK(lp_norm(w, r.dual()) <= nr.value + 1e-12);
    CHECK(lp_norm(nr.witness, r.dual()) == doctest::Approx(nr.value).epsilon(1e-12));
  }
}

TEST_CASE("constants at p = 2 and the Khintchine value") {
  const ConstantsReport c = constants(ex(2));
  CHECK(c.c1 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c.c2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c.b_qstar == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(constants(ex(1)), std::domain_error);
}

TEST_CASE("constants envelope at p = 1.1") {
  // p* = 11: membership checked against the analytic envelope
  const ConstantsReport c = constants(ex(1.1));
  CHECK(c.p.dual().value() == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(c.c2 >= std::exp(-0.5) * std::sqrt(11.0));
  CHECK(c.c2 <= std::exp(-0.5) * std::sqrt(12.0));
  CHECK(c.c2 >= 2.0113);
  CHECK(c.c2 <= 2.1010);
}

TEST_CASE("constants envelopes over the p* grid") {
  for (double q : {2.0, 3.0, 5.0, 10.0, 20.0, 50.0}) {
    const Exponent p = Exponent(q).dual();
    const ConstantsReport c = constants(p);
    CHECK(c.c2_lower <= c.c2);
    CHECK(c.c2 <= c.c2_upper);
    CHECK(c.c2 <= c.c1 * (1.0 + 1e-13));
  }
}

TEST_CASE("group norm chains on identity blocks and all-ones matrices") {
  // block [I | 0] with d <= m: the lower chain is tight
  for (int d : {2, 3}) {
    const int m = d + 2;
    Mat M = Mat::Zero(d, m);
    M.leftCols(d) = Mat::Identity(d, d);
    for (double pv : {2.0, 3.0}) {
      for (double qv : {1.0, 1.5, 2.0}) {
        if (qv > pv) continue;
        const GroupNormReport rep = check_group_norm_inequalities(M, ex(pv), ex(qv));
        CHECK(!rep.reversed);
        CHECK(rep.lower_holds);
        CHECK(rep.upper_holds);
        CHECK(rep.ratio == doctest::Approx(rep.ratio_lower).epsilon(1e-12));
      }
    }
  }
  // all-ones: |M|_{q,p} equals |M^T|_{p,q}
  const Mat ones = Mat::Ones(3, 5);
  for (double pv : {1.5, 2.0, 3.0})
    for (double qv : {1.0, 1.5}) {
      if (qv > pv) continue;
      const GroupNormReport rep = check_group_norm_inequalities(ones, ex(pv), ex(qv));
      CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rep.lower_holds);
      CHECK(rep.upper_holds);
    }
}

TEST_CASE("4x4 identity comparison across p*") {
  // |I^T|_{2,p*} = 4^(1/p*) vs |I|_{p*,2} = 2, with the ratio bound tight
  for (double qs : {1.2, 1.5, 1.9}) {  // p* in (1,2), i.e. p > 2
    const Mat I = Mat::Identity(4, 4);
    const double mt = group_norm(I.transpose(), ex(2), ex(qs));
    const double mq = group_norm(I, ex(qs), ex(2));
    CHECK(mt == doctest::Approx(std::pow(4.0, 1.0 / qs)).epsilon(1e-13));
    CHECK(mq == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(mt >= mq);  // q = p* < 2 = p branch: |M^T|_{p,q} >= |M|_{q,p}
    CHECK(mt / mq <= std::pow(4.0, 1.0 / qs - 0.5) * (1 + 1e-12));
  }
}

TEST_CASE("group norm chains hold on random Gaussian matrices") {
  rng::Engine eng(rng::derive(31, "gn-chains"));
  const double orders[] = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 100; ++trial) {
    const int d = eng.uniform_int(1, 8), m = eng.uniform_int(1, 8);
    Mat M(d, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < d; ++i) M(i, j) = eng.normal();
    for (double pv : orders)
      for (double qv : orders) {
        if (qv <= pv && std::isinf(qv) && !std::isinf(pv)) continue;
        const GroupNormReport rep = check_group_norm_inequalities(M, Exponent(pv), Exponent(qv));
        CHECK(rep.lower_holds);
        CHECK(rep.upper_holds);
      }
  }
}
