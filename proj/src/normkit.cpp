#include "advrc/normkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace advrc {

namespace {

void require_finite(const Vec& v, const char* who) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw std::invalid_argument(std::string(who) + ": non-finite entry");
}

}  // namespace

double lp_norm(const Vec& v, const Exponent& p) {
  require_finite(v, "lp_norm");
  if (v.size() == 0) return 0.0;
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return 0.0;
  if (p.is_inf()) return vmax;
  const double pe = p.value();
  if (pe == 1.0) return v.cwiseAbs().sum();
  if (pe == 2.0) return v.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / vmax, pe);
  return vmax * std::pow(acc, 1.0 / pe);
}

Vec dual_witness(const Vec& u, const Exponent& q) {
  require_finite(u, "dual_witness");
  const double umax = u.size() > 0 ? u.cwiseAbs().maxCoeff() : 0.0;
  if (umax == 0.0) throw ZeroVectorError{};

  Vec v = Vec::Zero(u.size());
  if (q.value() == 1.0) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < u.size(); ++i)
      if (std::abs(u[i]) > std::abs(u[best])) best = i;  // ties keep the lowest index
    v[best] = u[best] > 0 ? 1.0 : -1.0;
    return v;
  }
  if (q.is_inf()) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
      v[i] = u[i] > 0 ? 1.0 : (u[i] < 0 ? -1.0 : 0.0);
    return v;
  }
  // General case: v = sgn(u) |u|^(q*-1) / |u|_{q*}^(q*-1), computed on the
  // rescaled vector u/umax for overflow safety.
  const double qs = q.dual().value();
  Vec scaled = u / umax;
  double norm_qs = lp_norm(scaled, q.dual());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double a = std::abs(scaled[i]);
    const double mag = a == 0.0 ? 0.0 : std::pow(a / norm_qs, qs - 1.0);
    v[i] = scaled[i] > 0 ? mag : (scaled[i] < 0 ? -mag : 0.0);
  }
  return v;
}

double group_norm(const Mat& M, const Exponent& p1, const Exponent& p2) {
  if (p1 == p2) {
    // entrywise norm; summing the sorted terms makes the result independent
    // of orientation, so |M|_{p,p} == |M^T|_{p,p} holds bit-exactly
    if (M.size() == 0) return 0.0;
    const double vmax = M.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return 0.0;
    if (p1.is_inf()) return vmax;
    const double pe = p1.value();
    std::vector<double> terms;
    terms.reserve(M.size());
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        if (!std::isfinite(M(i, j)))
          throw std::invalid_argument("group_norm: non-finite entry");
        terms.push_back(std::pow(std::abs(M(i, j)) / vmax, pe));
      }
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return vmax * std::pow(acc, 1.0 / pe);
  }
  Vec cols(M.cols());
  for (Eigen::Index j = 0; j < M.cols(); ++j) cols[j] = lp_norm(M.col(j), p1);
  return lp_norm(cols, p2);
}

NormRatio norm_ratio_sup(const Exponent& p, const Exponent& r, int d) {
  if (d < 1) throw std::invalid_argument("norm_ratio_sup: d must be >= 1");
  const double expo = 1.0 - r.inv() - p.inv();
  NormRatio out;
  // log-space power to keep large d / extreme exponents from overflowing
  out.value = expo <= 0.0 ? 1.0 : std::exp(expo * std::log(static_cast<double>(d)));
  if (expo >= 0.0) {
    const double coeff = std::exp(-p.inv() * std::log(static_cast<double>(d)));
    out.witness = Vec::Constant(d, coeff);
  } else {
    out.witness = Vec::Zero(d);
    out.witness[0] = 1.0;
  }
  return out;
}

ConstantsReport constants(const Exponent& p) {
  if (p.value() <= 1.0)
    throw std::domain_error("constants: c1/c2 comparison requires p > 1");
  const double q = p.dual().value();  // p*, finite
  ConstantsReport rep;
  rep.p = p;
  rep.c1 = std::sqrt(q - 1.0);
  const double half_log_pi = 0.5 * std::log(M_PI);
  rep.c2 = std::sqrt(2.0) * std::exp((std::lgamma((q + 1.0) / 2.0) - half_log_pi) / q);
  rep.c2_lower = std::exp(-0.5) * std::sqrt(q);
  rep.c2_upper = std::exp(-0.5) * std::sqrt(q + 1.0);
  rep.b_qstar = q <= 2.0 ? 1.0
                         : std::exp(0.5 * q * std::log(2.0) +
                                    std::lgamma((q + 1.0) / 2.0) - half_log_pi);
  return rep;
}

GroupNormReport check_group_norm_inequalities(const Mat& M, const Exponent& p,
                                              const Exponent& q) {
  GroupNormReport rep;
  rep.norm_mt_pq = group_norm(M.transpose(), p, q);
  rep.norm_m_qp = group_norm(M, q, p);
  rep.ratio = rep.norm_mt_pq == 0.0 ? 1.0 : rep.norm_m_qp / rep.norm_mt_pq;

  const double mind = static_cast<double>(std::min(M.rows(), M.cols()));
  const double expo = p.inv() - q.inv();  // <= 0 iff q <= p
  const double factor = mind == 0.0 ? 1.0 : std::exp(expo * std::log(mind));

  // q <= p uses ratio in [min(m,d)^(1/p-1/q), 1]; the proof needs q finite
  // there, so p = q = inf is routed through the reversed chain.
  rep.reversed = q.value() > p.value() || (q.is_inf() && p.is_inf());
  if (rep.reversed) {
    rep.ratio_lower = 1.0;
    rep.ratio_upper = factor;
  } else {
    rep.ratio_lower = factor;
    rep.ratio_upper = 1.0;
  }
  const double tol = 1e-12 * (1.0 + rep.ratio);
  rep.lower_holds = rep.ratio >= rep.ratio_lower - tol;
  rep.upper_holds = rep.ratio <= rep.ratio_upper + tol;
  return rep;
}

}  // namespace advrc
