#include "advrc/rademacher.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "advrc/rng.hpp"

namespace advrc {

namespace {

Vec normalize_p(Vec w, const Exponent& p) {
  const double n = lp_norm(w, p);
  if (n > 0.0) w /= n;
  return w;
}

// Draw-parallel runner; values are reduced in draw-index order so the result
// is independent of the worker count.
template <class PerDraw>
Estimate run_draws(int draws, std::uint64_t seed, int workers, InnerMethod method,
                   PerDraw&& per_draw) {
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  Estimate est;
  est.draws = draws;
  est.seed = seed;
  est.inner_method = method;
  est.draw_values.assign(draws, 0.0);

  workers = std::clamp(workers, 1, draws);
  if (workers == 1) {
    for (int t = 0; t < draws; ++t) est.draw_values[t] = per_draw(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < draws; t = next.fetch_add(1))
          est.draw_values[t] = per_draw(t);
      });
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  for (double v : est.draw_values) sum += v;
  est.mean = sum / draws;
  if (draws > 1) {
    double ss = 0.0;
    for (double v : est.draw_values) ss += (v - est.mean) * (v - est.mean);
    est.std_err = std::sqrt(ss / (static_cast<double>(draws) * (draws - 1)));
  }
  return est;
}

std::vector<Vec> base_direction_candidates(const Exponent& p, const Exponent& r, int d) {
  std::vector<Vec> cands;
  const NormRatio nr = norm_ratio_sup(p, r, d);
  cands.push_back(nr.witness);
  cands.push_back(-nr.witness);
  for (int j = 0; j < d; ++j) {
    Vec e = Vec::Zero(d);
    e[j] = 1.0;
    cands.push_back(e);
    cands.push_back(-e);
  }
  return cands;
}

}  // namespace

double sphere_direction_search(const Exponent& p, int d,
                               const std::function<double(const Vec&)>& value,
                               const std::function<Vec(const Vec&)>& grad,
                               const std::vector<Vec>& candidates, int restarts, int steps,
                               std::uint64_t seed, Vec* arg_best) {
  double best = -std::numeric_limits<double>::infinity();
  Vec best_w;
  std::vector<Vec> starts;
  for (const Vec& c : candidates) {
    if (c.size() != d || c.cwiseAbs().maxCoeff() == 0.0) continue;
    Vec w = normalize_p(c, p);
    const double v = value(w);
    if (v > best) {
      best = v;
      best_w = w;
    }
    starts.push_back(std::move(w));
  }
  if (restarts > 0) {
    auto rnd = sample_r_ball(d, p, restarts, rng::derive(seed, "dir-search"));
    for (Vec& w : rnd) starts.push_back(normalize_p(std::move(w), p));
  }

  // ascend from the best candidate plus every start; each ascent ends with a
  // few linearization jumps to the maximizing ball vertex, which reaches the
  // sparse optima that radial gradient steps stall short of
  if (best_w.size() == d) starts.insert(starts.begin(), best_w);
  for (const Vec& s0 : starts) {
    Vec w = s0;
    for (int k = 1; k <= steps; ++k) {
      Vec g = grad(w);
      const double gn = g.norm();
      if (gn == 0.0) break;
      w = normalize_p(w + (0.3 / std::sqrt(static_cast<double>(k))) * (g / gn), p);
      const double v = value(w);
      if (v > best) {
        best = v;
        best_w = w;
      }
    }
    for (int k = 0; k < 8; ++k) {
      Vec g = grad(w);
      if (g.cwiseAbs().maxCoeff() == 0.0) break;
      Vec jump = dual_witness(g, p);
      const double v = value(jump);
      if (v > best) {
        best = v;
        best_w = jump;
      }
      if ((jump - w).cwiseAbs().maxCoeff() < 1e-14) break;
      w = std::move(jump);
    }
  }
  if (arg_best != nullptr) *arg_best = best_w;
  return best;
}

Vec rademacher_signs(int m, std::uint64_t seed, std::uint64_t index) {
  rng::Engine eng(rng::derive(seed, "sigma", index));
  Vec sigma(m);
  for (int i = 0; i < m; ++i) sigma[i] = eng.sign();
  return sigma;
}

Estimate estimate_linear(const Sample& sample, const LinearFamilySpec& spec,
                         const PerturbSpec& pert, int draws, std::uint64_t seed,
                         const EstimateOptions& opts) {
  sample.validate();
  const int m = sample.size();
  const int d = sample.dim();
  const double W = spec.weight_bound;
  const Exponent rstar = pert.r.dual();
  const auto base = base_direction_candidates(spec.p, pert.r, d);

  auto per_draw = [&](int t) {
    const Vec sigma = rademacher_signs(m, seed, t);
    const Vec usig_raw = sample.X * sigma.cwiseProduct(sample.y);
    if (pert.eps == 0.0) return W / m * lp_norm(usig_raw, spec.p.dual());
    const Vec usig = usig_raw / m;
    const double vsig = sigma.mean();

    auto value = [&](const Vec& w) {
      return w.dot(usig) - pert.eps * vsig * lp_norm(w, rstar);
    };
    auto grad = [&](const Vec& w) -> Vec {
      Vec g = usig;
      if (w.cwiseAbs().maxCoeff() > 0.0) g -= pert.eps * vsig * dual_witness(w, pert.r);
      return g;
    };
    std::vector<Vec> cands = base;
    if (usig.cwiseAbs().maxCoeff() > 0.0) {
      cands.push_back(dual_witness(usig, spec.p));
      cands.push_back(-cands.back());
    }
    const double sup = sphere_direction_search(spec.p, d, value, grad, cands, opts.restarts,
                                               opts.steps, rng::derive(seed, "linear-pgd", t));
    return W * std::max(0.0, sup);
  };

  return run_draws(draws, seed, opts.workers,
                   pert.eps == 0.0 ? InnerMethod::closed : InnerMethod::direction_search,
                   per_draw);
}

Estimate estimate_relu(const Sample& sample, const LinearFamilySpec& spec,
                       const PerturbSpec& pert, int draws, std::uint64_t seed,
                       const EstimateOptions& opts) {
  sample.validate();
  const int m = sample.size();
  const int d = sample.dim();
  const double W = spec.weight_bound;
  const Exponent rstar = pert.r.dual();
  auto base = base_direction_candidates(spec.p, pert.r, d);
  for (int i = 0; i < m; ++i)
    if (sample.X.col(i).cwiseAbs().maxCoeff() > 0.0) {
      base.push_back(normalize_p(sample.X.col(i), spec.p));
      base.push_back(-base.back());
    }

  auto per_draw = [&](int t) {
    const Vec sigma = rademacher_signs(m, seed, t);
    const Vec usig = sample.X * sigma.cwiseProduct(sample.y) / m;

    auto value = [&](const Vec& w) {
      const double wn = pert.eps == 0.0 ? 0.0 : lp_norm(w, rstar);
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = w.dot(sample.X.col(i)) - sample.y[i] * pert.eps * wn;
        if (a > 0.0) acc += sigma[i] * a;
      }
      return acc / m;
    };
    auto grad = [&](const Vec& w) -> Vec {
      Vec dn = Vec::Zero(d);
      double wn = 0.0;
      if (pert.eps > 0.0 && w.cwiseAbs().maxCoeff() > 0.0) {
        wn = lp_norm(w, rstar);
        dn = dual_witness(w, pert.r);
      }
      Vec g = Vec::Zero(d);
      for (int i = 0; i < m; ++i) {
        const double a = w.dot(sample.X.col(i)) - sample.y[i] * pert.eps * wn;
        if (a > 0.0) g += sigma[i] * (sample.X.col(i) - sample.y[i] * pert.eps * dn);
      }
      return g / m;
    };
    std::vector<Vec> cands = base;
    if (usig.cwiseAbs().maxCoeff() > 0.0) {
      cands.push_back(dual_witness(usig, spec.p));
      cands.push_back(-cands.back());
    }
    const double sup = sphere_direction_search(spec.p, d, value, grad, cands, opts.restarts,
                                               opts.steps, rng::derive(seed, "relu-pgd", t));
    return W * std::max(0.0, sup);
  };

  return run_draws(draws, seed, opts.workers, InnerMethod::direction_search, per_draw);
}

Estimate estimate_net(const Sample& sample, const NetFamilySpec& spec, const PerturbSpec& pert,
                      int draws, std::uint64_t seed, const NetEstimateOptions& opts) {
  sample.validate();
  const int m = sample.size();
  const int d = sample.dim();
  const int n = spec.neurons;
  const double W = spec.weight_bound;
  const double Lam = spec.output_l1_bound;
  const Activation act = spec.activation;
  const bool exact_inner = act.kind == Activation::Kind::relu && pert.r == Exponent(2.0) &&
                           n <= opts.enumeration_cap && pert.eps > 0.0;
  EnumerationOptions eopts;
  eopts.max_neurons = opts.enumeration_cap;

  struct InnerEval {
    double value_sum;            // (1/m) sum_i sigma_i * inner_i
    std::vector<Vec> z;          // x_i + eps s_i*
  };

  auto per_draw = [&](int t) {
    const Vec sigma = rademacher_signs(m, seed, t);

    auto inner = [&](const NetParams& net) {
      InnerEval ev;
      ev.value_sum = 0.0;
      ev.z.resize(m);
      for (int i = 0; i < m; ++i) {
        double val;
        if (pert.eps == 0.0) {
          val = net_objective(net, sample.X.col(i), sample.y[i], 0.0, Vec::Zero(d), act);
          ev.z[i] = sample.X.col(i);
        } else if (exact_inner) {
          SearchBudget light{opts.inner_restarts, opts.inner_steps, 0.1,
                             rng::derive(seed, "net-inner", t, i)};
          PerturbResult pr = net_adversarial(net, sample.X.col(i), sample.y[i], pert, light, eopts);
          val = pr.value;
          ev.z[i] = sample.X.col(i) + pert.eps * pr.s_star;
        } else {
          SearchBudget light{opts.inner_restarts, opts.inner_steps, 0.1,
                             rng::derive(seed, "net-inner", t, i)};
          PerturbResult pr = net_adversarial_search(net, sample.X.col(i), sample.y[i], pert,
                                                    light, act);
          val = pr.value;
          ev.z[i] = sample.X.col(i) + pert.eps * pr.s_star;
        }
        ev.value_sum += sigma[i] * val;
      }
      ev.value_sum /= m;
      return ev;
    };

    double best = 0.0;  // u = 0 is in the family, so the per-draw sup is >= 0

    for (int rs = 0; rs < opts.restarts; ++rs) {
      rng::Engine eng(rng::derive(seed, "net-start", t, rs));
      NetParams net;
      net.W.resize(d, n);
      net.u.resize(n);
      if (rs == 0 || rs == 1) {
        // structured start: a single active neuron along the sign-weighted
        // data direction, extreme output weight
        const Vec usig = sample.X * sigma.cwiseProduct(sample.y) / m;
        Vec dir = usig.cwiseAbs().maxCoeff() > 0.0 ? normalize_p(usig, spec.p)
                                                   : normalize_p(Vec::Ones(d), spec.p);
        for (int j = 0; j < n; ++j) net.W.col(j) = W * dir;
        net.u.setZero();
        net.u[0] = (rs == 0 ? Lam : -Lam);
      } else {
        for (int j = 0; j < n; ++j) {
          Vec w(d);
          for (int i = 0; i < d; ++i) w[i] = eng.normal();
          net.W.col(j) = W * normalize_p(w, spec.p);
        }
        double l1 = 0.0;
        for (int j = 0; j < n; ++j) {
          net.u[j] = eng.normal();
          l1 += std::abs(net.u[j]);
        }
        if (l1 > 0.0) net.u *= Lam / l1;
      }

      InnerEval ev = inner(net);
      best = std::max(best, ev.value_sum);

      for (int k = 1; k <= opts.ascent_steps; ++k) {
        // Danskin direction at the current inner optima
        Mat gw = Mat::Zero(d, n);
        Vec gu = Vec::Zero(n);
        for (int i = 0; i < m; ++i) {
          const double c = sigma[i] * sample.y[i] / m;
          for (int j = 0; j < n; ++j) {
            const double a = net.W.col(j).dot(ev.z[i]);
            gw.col(j) += c * net.u[j] * act.slope(a) * ev.z[i];
            gu[j] += c * act(a);
          }
        }
        const double gwn = gw.norm();
        const double gun = gu.norm();
        const double eta = 0.3 / std::sqrt(static_cast<double>(k));
        if (gwn > 0.0) net.W += (eta * W / gwn) * gw;
        if (gun > 0.0) net.u += (eta * Lam / gun) * gu;
        for (int j = 0; j < n; ++j) {
          const double wn = lp_norm(net.W.col(j), spec.p);
          if (wn > W) net.W.col(j) *= W / wn;
        }
        const double l1 = net.u.cwiseAbs().sum();
        if (l1 > Lam) net.u *= Lam / l1;

        ev = inner(net);
        best = std::max(best, ev.value_sum);
      }
    }
    return best;
  };

  return run_draws(draws, seed, opts.workers, InnerMethod::param_search, per_draw);
}

}  // namespace advrc
