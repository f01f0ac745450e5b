#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace advrc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ZeroVectorError : std::runtime_error {
  ZeroVectorError() : std::runtime_error("dual_witness: zero vector has no witness") {}
};

// Extended-real norm order in [1, inf]. Infinity is the IEEE infinity used as
// a tag: every formula special-cases 1/inf = 0 instead of approximating with a
// large exponent. The Holder conjugate is stored alongside the value so that
// dual().dual() round-trips bit-exactly for every order, not just (1, inf)
// and (2, 2).
class Exponent {
 public:
  Exponent() : value_(2.0), dual_(2.0) {}

  explicit Exponent(double p) : value_(p), dual_(conjugate(p)) {
    if (std::isnan(p) || p < 1.0)
      throw std::invalid_argument("Exponent: order must lie in [1, inf]");
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  double value() const { return value_; }
  bool is_inf() const { return std::isinf(value_); }
  // 1/p with the exact convention 1/inf = 0.
  double inv() const { return is_inf() ? 0.0 : 1.0 / value_; }

  Exponent dual() const { return Exponent(dual_, value_); }

  bool operator==(const Exponent& o) const { return value_ == o.value_; }
  bool operator!=(const Exponent& o) const { return !(*this == o); }

  std::string str() const { return is_inf() ? "inf" : std::to_string(value_); }

 private:
  Exponent(double v, double d) : value_(v), dual_(d) {}

  static double conjugate(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    if (p == 2.0) return 2.0;
    return p / (p - 1.0);
  }

  double value_;
  double dual_;
};

inline Exponent dual_exponent(const Exponent& p) { return p.dual(); }

// (sum |v_i|^p)^(1/p); max |v_i| for p = inf; 0 on empty input. Rejects
// non-finite entries. Scaled by the max entry to avoid overflow.
double lp_norm(const Vec& v, const Exponent& p);

// Maximizer of u.v over the unit q-ball: |v|_q = 1 and u.v = |u|_{q*}.
// q = inf gives the sign vector (sgn(0) = 0); q = 1 gives a signed basis
// vector at the first index of max |u_i|.
Vec dual_witness(const Vec& u, const Exponent& q);

// p2-norm of the vector of column p1-norms.
double group_norm(const Mat& M, const Exponent& p1, const Exponent& p2);

struct NormRatio {
  double value;  // max(1, d^(1 - 1/r - 1/p))
  Vec witness;   // unit-p vector attaining the supremum of |w|_{r*}
};

// sup over the unit p-ball of the r*-norm, with the attaining witness.
NormRatio norm_ratio_sup(const Exponent& p, const Exponent& r, int d);

struct ConstantsReport {
  Exponent p;
  double c1;        // sqrt(p* - 1)
  double c2;        // sqrt(2) (Gamma((p*+1)/2)/sqrt(pi))^(1/p*)
  double c2_lower;  // e^(-1/2) sqrt(p*)
  double c2_upper;  // e^(-1/2) sqrt(p* + 1)
  double b_qstar;   // Khintchine moment constant B_{p*}
};

// Constants of the two linear-class complexity bounds plus their envelopes.
// Requires p > 1 (p* finite).
ConstantsReport constants(const Exponent& p);

struct GroupNormReport {
  double norm_mt_pq;   // |M^T|_{p,q}
  double norm_m_qp;    // |M|_{q,p}
  double ratio;        // |M|_{q,p} / |M^T|_{p,q}  (1 for a zero matrix)
  double ratio_lower;  // lower endpoint of the applicable chain
  double ratio_upper;  // upper endpoint
  bool lower_holds;
  bool upper_holds;
  bool reversed;  // true when the q >= p chain applies
};

// Evaluates the two-sided comparison between |M^T|_{p,q} and |M|_{q,p}:
// for q <= p (q finite), min(m,d)^(1/p-1/q) |M^T|_{p,q} <= |M|_{q,p} <= |M^T|_{p,q};
// for q >= p the chain is reversed.
GroupNormReport check_group_norm_inequalities(const Mat& M, const Exponent& p,
                                              const Exponent& q);

}  // namespace advrc
