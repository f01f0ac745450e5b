#include "advrc/bounds.hpp"

#include <cmath>

#include "advrc/report.hpp"
#include "advrc/rng.hpp"

namespace advrc {

double BoundReport::component(const std::string& key) const {
  for (const auto& [k, v] : components)
    if (k == key) return v;
  throw std::out_of_range("BoundReport: no component '" + key + "'");
}

bool BoundReport::has_component(const std::string& key) const {
  for (const auto& [k, v] : components)
    if (k == key) return true;
  return false;
}

namespace {

double max_dim_factor(const Exponent& p, const Exponent& r, int d) {
  return norm_ratio_sup(p, r, d).value;
}

// |T_eps| indices: negatively labeled points always count, positives only
// when they stick out of the perturbation ball.
std::vector<int> t_eps_indices(const Sample& sample, const PerturbSpec& pert) {
  std::vector<int> idx;
  for (int i = 0; i < sample.size(); ++i)
    if (sample.y[i] < 0 || lp_norm(sample.X.col(i), pert.r) > pert.eps) idx.push_back(i);
  return idx;
}

double linear_clean_term(const Sample& sub, const LinearFamilySpec& spec, const Exponent& r,
                         CleanTermMode mode, const McParams& mc) {
  if (sub.size() == 0) return 0.0;
  if (mode == CleanTermMode::analytic) return linear_complexity_bounds(sub, spec).value;
  return estimate_linear(sub, spec, PerturbSpec(r, 0.0), mc.draws, mc.seed, mc.opts).mean;
}

}  // namespace

BoundReport linear_complexity_bounds(const Sample& sample, const LinearFamilySpec& spec) {
  sample.validate();
  if (sample.size() < 1) throw std::invalid_argument("linear_complexity_bounds: empty sample");
  const double m = sample.size();
  const int d = sample.dim();
  const double W = spec.weight_bound;
  const Exponent pstar = spec.p.dual();

  BoundReport rep;
  rep.name = "linear_complexity";
  double newb = 0.0;
  double classical = std::numeric_limits<double>::quiet_NaN();
  double pcase;
  if (spec.p.value() == 1.0) {
    pcase = 1;
    const double logt = std::sqrt(2.0 * std::log(2.0 * d));
    newb = W / m * logt * group_norm(sample.X.transpose(), Exponent(2.0), Exponent::infinity());
    classical = W * std::sqrt(2.0 * std::log(2.0 * d) / m) * sample.X.cwiseAbs().maxCoeff();
  } else if (spec.p.value() <= 2.0) {
    pcase = 2;
    newb = constants(spec.p).c2 * W / m *
           group_norm(sample.X.transpose(), Exponent(2.0), pstar);
    classical = W / m * std::sqrt(pstar.value() - 1.0) * group_norm(sample.X, pstar, Exponent(2.0));
  } else {
    pcase = 3;
    newb = W / m * group_norm(sample.X.transpose(), Exponent(2.0), pstar);
  }
  rep.value = newb;
  rep.add("new_bound", newb);
  if (std::isfinite(classical)) {
    rep.add("classical_bound", classical);
    rep.add("new_is_smaller", newb <= classical * (1.0 + 1e-12) ? 1.0 : 0.0);
  }
  rep.add("p_case", pcase);
  rep.inputs_digest = Digest().add(sample).add(spec.p.value()).add(spec.weight_bound).hex();
  return rep;
}

BoundReport adversarial_linear_bounds(const Sample& sample, const LinearFamilySpec& spec,
                                      const PerturbSpec& pert, CleanTermMode mode,
                                      const McParams& mc) {
  sample.validate();
  const double m = sample.size();
  const double W = spec.weight_bound;
  const double factor = max_dim_factor(spec.p, pert.r, sample.dim());

  const double clean = linear_clean_term(sample, spec, pert.r, mode, mc);
  const double dim_upper = pert.eps * W * factor / (2.0 * std::sqrt(m));
  const double dim_lower = pert.eps * W * factor / (2.0 * std::sqrt(2.0 * m));

  BoundReport rep;
  rep.name = "adversarial_linear";
  rep.value = clean + dim_upper;
  rep.add("clean_term", clean);
  rep.add("dimension_term", dim_upper);
  rep.add("upper", clean + dim_upper);
  rep.add("lower", std::max(clean, dim_lower));
  rep.add("max_factor", factor);
  rep.inputs_digest = Digest()
                          .add(sample)
                          .add(spec.p.value())
                          .add(spec.weight_bound)
                          .add(pert.r.value())
                          .add(pert.eps)
                          .hex();
  return rep;
}

BoundReport relu_complexity_bounds(const Sample& sample, const LinearFamilySpec& spec,
                                   const PerturbSpec& pert, double delta_refine,
                                   CleanTermMode mode, const McParams& mc) {
  sample.validate();
  if (delta_refine < 0.0) throw std::invalid_argument("delta_refine must be >= 0");
  const double m = sample.size();
  const int d = sample.dim();
  const double W = spec.weight_bound;
  const double factor = max_dim_factor(spec.p, pert.r, d);
  const Exponent rstar = pert.r.dual();

  const auto teps = t_eps_indices(sample, pert);
  Sample sub;
  sub.X.resize(d, teps.size());
  sub.y.resize(teps.size());
  for (size_t k = 0; k < teps.size(); ++k) {
    sub.X.col(k) = sample.X.col(teps[k]);
    sub.y[k] = sample.y[teps[k]];
  }
  const double clean = linear_clean_term(sub, spec, pert.r, mode, mc);
  const double dim_upper = pert.eps * W * factor / (2.0 * std::sqrt(m));

  // best-found direction for the square-sum lower bound
  auto margins = [&](const Vec& s) {
    Vec c(sample.size());
    const double sn = pert.eps == 0.0 ? 0.0 : lp_norm(s, rstar);
    for (int i = 0; i < sample.size(); ++i)
      c[i] = s.dot(sample.X.col(i)) - pert.eps * sample.y[i] * sn;
    return c;
  };
  auto value = [&](const Vec& s) {
    const Vec c = margins(s);
    double acc = 0.0;
    for (int i = 0; i < c.size(); ++i)
      if (c[i] > 0.0) acc += c[i] * c[i];
    return std::sqrt(acc);
  };
  auto grad = [&](const Vec& s) -> Vec {
    const Vec c = margins(s);
    Vec dn = Vec::Zero(d);
    if (pert.eps > 0.0 && s.cwiseAbs().maxCoeff() > 0.0) dn = dual_witness(s, pert.r);
    Vec g = Vec::Zero(d);
    double L = 0.0;
    for (int i = 0; i < c.size(); ++i)
      if (c[i] > 0.0) {
        g += c[i] * (sample.X.col(i) - pert.eps * sample.y[i] * dn);
        L += c[i] * c[i];
      }
    if (L > 0.0) g /= std::sqrt(L);
    return g;
  };
  std::vector<Vec> cands;
  {
    const NormRatio nr = norm_ratio_sup(spec.p, pert.r, d);
    cands.push_back(nr.witness);
    cands.push_back(-nr.witness);
    for (int j = 0; j < d; ++j) {
      Vec e = Vec::Zero(d);
      e[j] = 1.0;
      cands.push_back(e);
      cands.push_back(-e);
    }
    for (int i = 0; i < sample.size(); ++i)
      if (sample.X.col(i).cwiseAbs().maxCoeff() > 0.0) {
        cands.push_back(sample.X.col(i));
        cands.push_back(-sample.X.col(i));
      }
  }
  const double sup = sphere_direction_search(spec.p, d, value, grad, cands, mc.opts.restarts,
                                             std::max(mc.opts.steps, 100),
                                             rng::derive(mc.seed, "relu-lower"));
  const double lower = W / (2.0 * std::sqrt(2.0) * m) * std::max(0.0, sup);

  // refined lower bound at the norm-ratio witness
  double refined = 0.0;
  {
    const NormRatio nr = norm_ratio_sup(spec.p, pert.r, d);
    const Vec& s = nr.witness;
    const double sn = lp_norm(s, rstar);
    int count = 0;
    for (int i = 0; i < sample.size(); ++i) {
      const double c =
          s.dot(sample.X.col(i)) - (1.0 + delta_refine * sample.y[i]) * sample.y[i] * pert.eps * sn;
      if (c > 0.0) ++count;
    }
    refined = W * delta_refine * pert.eps / (2.0 * std::sqrt(2.0) * m) * count * factor;
  }

  BoundReport rep;
  rep.name = "relu_complexity";
  rep.value = clean + dim_upper;
  rep.add("clean_term", clean);
  rep.add("dimension_term", dim_upper);
  rep.add("upper", clean + dim_upper);
  rep.add("lower", lower);
  rep.add("refined_lower", refined);
  rep.add("t_eps_count", static_cast<double>(teps.size()));
  rep.add("max_factor", factor);
  rep.inputs_digest = Digest()
                          .add(sample)
                          .add(spec.p.value())
                          .add(spec.weight_bound)
                          .add(pert.r.value())
                          .add(pert.eps)
                          .add(delta_refine)
                          .hex();
  return rep;
}

BoundReport net_lipschitz_bound(const Sample& sample, const NetFamilySpec& spec,
                                const PerturbSpec& pert) {
  sample.validate();
  const double m = sample.size();
  const int d = sample.dim();
  const double L = spec.activation.lipschitz();
  const double factor = max_dim_factor(spec.p, pert.r, d);
  const double xnorm = group_norm(sample.X, pert.r, Exponent::infinity());
  const double scale = L * spec.weight_bound * spec.output_l1_bound * factor *
                       (xnorm + pert.eps) / std::sqrt(m);
  const double dn1 = static_cast<double>(d) * (spec.neurons + 1);
  const double log_fixed = 1.0 + std::sqrt(dn1 * std::log(36.0));
  const double log_sample = 1.0 + std::sqrt(2.0 * dn1 * std::log(6.0 * std::sqrt(m)));

  BoundReport rep;
  rep.name = "net_lipschitz";
  rep.value = scale * log_fixed;
  rep.add("scale", scale);
  rep.add("lipschitz", L);
  rep.add("log_term_fixed", log_fixed);
  rep.add("log_term_sample_size", log_sample);
  rep.add("bound_fixed_log", scale * log_fixed);
  rep.add("bound_sample_log", scale * log_sample);
  rep.add("max_factor", factor);
  rep.inputs_digest = Digest()
                          .add(sample)
                          .add(spec.p.value())
                          .add(spec.weight_bound)
                          .add(spec.output_l1_bound)
                          .add(static_cast<std::int64_t>(spec.neurons))
                          .add(spec.activation.name())
                          .add(pert.r.value())
                          .add(pert.eps)
                          .hex();
  return rep;
}

BoundReport net_shatter_bound(const Sample& sample, const NetFamilySpec& spec,
                              const PerturbSpec& pert, long long c_star, long long pi_star,
                              ShatterBoundVariant variant) {
  sample.validate();
  if (pert.r.value() <= 1.0 || pert.r.is_inf())
    throw std::invalid_argument("net_shatter_bound: requires 1 < r < inf");
  if (c_star < 1 || pi_star < 1)
    throw std::invalid_argument("net_shatter_bound: counts must be >= 1");
  std::vector<int> offending;
  for (int i = 0; i < sample.size(); ++i)
    if (lp_norm(sample.X.col(i), pert.r) < pert.eps) offending.push_back(i);
  if (!offending.empty()) {
    std::string msg = "sample-norm hypothesis violated: requires |x_i|_r >= eps; offending indices:";
    for (int i : offending) msg += " " + std::to_string(i);
    throw HypothesisViolated(msg, offending);
  }

  const double m = sample.size();
  const int d = sample.dim();
  const Exponent pstar = spec.p.dual();
  const double factor = max_dim_factor(spec.p, pert.r, d);

  double k_factor;
  if (spec.p.value() == 1.0)
    k_factor = std::sqrt(2.0 * std::log(2.0 * d));
  else if (spec.p.value() >= 2.0)
    k_factor = 1.0;
  else
    k_factor = constants(spec.p).c2;

  double data_term, growth;
  if (variant == ShatterBoundVariant::infty_norm) {
    data_term = k_factor * group_norm(sample.X.transpose(), Exponent::infinity(), pstar) + pert.eps;
    growth = static_cast<double>(c_star) * std::sqrt(static_cast<double>(pi_star));
  } else {
    const double mfac = std::max(1.0, std::pow(m, pstar.inv() - 0.5));
    data_term = k_factor * mfac * group_norm(sample.X, pstar, Exponent(2.0)) + pert.eps;
    growth = static_cast<double>(c_star) * static_cast<double>(pi_star);
  }
  const double bound =
      spec.weight_bound * spec.output_l1_bound * factor * data_term / std::sqrt(m) * growth;

  BoundReport rep;
  rep.name = variant == ShatterBoundVariant::infty_norm ? "net_shatter_infty_norm"
                                                        : "net_shatter_two_norm";
  rep.value = bound;
  rep.add("k_factor", k_factor);
  rep.add("data_term", data_term);
  rep.add("growth_factor", growth);
  rep.add("max_factor", factor);
  rep.add("c_star", static_cast<double>(c_star));
  rep.add("pi_star", static_cast<double>(pi_star));
  rep.add("bound", bound);
  rep.inputs_digest = Digest()
                          .add(sample)
                          .add(spec.p.value())
                          .add(spec.weight_bound)
                          .add(spec.output_l1_bound)
                          .add(static_cast<std::int64_t>(c_star))
                          .add(static_cast<std::int64_t>(pi_star))
                          .add(pert.r.value())
                          .add(pert.eps)
                          .hex();
  return rep;
}

void MarginBoundInputs::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("margin rho must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(loss_cap >= 0.0)) throw std::invalid_argument("loss cap must be >= 0");
}

double margin_loss(double x, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("margin rho must be > 0");
  return std::min(1.0, std::max(0.0, 1.0 - x / rho));
}

double robust_margin_bound(double empirical_margin_risk, const MarginBoundInputs& in, int m) {
  in.validate();
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  return empirical_margin_risk + 2.0 / in.rho * in.complexity +
         3.0 * in.loss_cap * std::sqrt(std::log(2.0 / in.delta) / (2.0 * m));
}

double covering_size_bound(double R, double eps, int d) {
  if (!(R > 0.0) || !(eps > 0.0)) throw std::invalid_argument("R and eps must be > 0");
  if (d < 0) throw std::invalid_argument("d must be >= 0");
  return std::exp(d * std::log(3.0 * R / eps));
}

}  // namespace advrc
