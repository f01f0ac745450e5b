#include "advrc/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

#include "advrc/rng.hpp"

namespace advrc {

namespace {

void validate_net(const NetParams& net) {
  if (net.neurons() < 1) throw std::invalid_argument("NetParams: need at least one neuron");
  if (net.u.size() != net.W.cols())
    throw std::invalid_argument("NetParams: output weight count must match neuron count");
  for (Eigen::Index i = 0; i < net.u.size(); ++i)
    if (!std::isfinite(net.u[i])) throw std::invalid_argument("NetParams: non-finite u");
  for (Eigen::Index j = 0; j < net.W.cols(); ++j)
    for (Eigen::Index i = 0; i < net.W.rows(); ++i)
      if (!std::isfinite(net.W(i, j))) throw std::invalid_argument("NetParams: non-finite W");
}

// Orthonormal basis of span{w_j : j in mask} by pivoted QR.
struct SubspaceInfo {
  Mat Q;  // d x rank
  int rank = 0;
};

SubspaceInfo subspace_basis(const Mat& W, const std::vector<int>& idx, double rank_tol) {
  SubspaceInfo info;
  const int d = static_cast<int>(W.rows());
  if (idx.empty()) {
    info.Q = Mat::Zero(d, 0);
    return info;
  }
  Mat Wz(d, idx.size());
  for (size_t c = 0; c < idx.size(); ++c) Wz.col(c) = W.col(idx[c]);
  Eigen::ColPivHouseholderQR<Mat> qr(Wz);
  qr.setThreshold(rank_tol);
  info.rank = static_cast<int>(qr.rank());
  info.Q = qr.householderQ() * Mat::Identity(d, info.rank);
  return info;
}

// Lawson-Hanson nonnegative least squares: min |A z - b|_2 s.t. z >= 0.
Vec nnls(const Mat& A, const Vec& b) {
  const int n = static_cast<int>(A.cols());
  Vec z = Vec::Zero(n);
  if (n == 0) return z;
  std::vector<bool> passive(n, false);
  const double grad_tol = 1e-12 * (1.0 + b.norm()) * (1.0 + A.norm());

  int outer_guard = 6 * n + 12;
  while (outer_guard-- > 0) {
    Vec grad = A.transpose() * (b - A * z);
    int enter = -1;
    double best = grad_tol;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && grad[i] > best) {
        best = grad[i];
        enter = i;
      }
    if (enter < 0) break;
    passive[enter] = true;

    int inner_guard = 6 * n + 12;
    while (inner_guard-- > 0) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (passive[i]) idx.push_back(i);
      Mat Ap(A.rows(), idx.size());
      for (size_t c = 0; c < idx.size(); ++c) Ap.col(c) = A.col(idx[c]);
      Vec zp = Ap.colPivHouseholderQr().solve(b);

      bool all_pos = true;
      for (Eigen::Index c = 0; c < zp.size(); ++c)
        if (zp[c] <= 0.0) all_pos = false;
      if (all_pos) {
        z.setZero();
        for (size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[c];
        break;
      }
      double alpha = 1.0;
      for (size_t c = 0; c < idx.size(); ++c)
        if (zp[c] <= 0.0) {
          const double zi = z[idx[c]];
          const double a = zi / (zi - zp[c]);
          alpha = std::min(alpha, a);
        }
      for (size_t c = 0; c < idx.size(); ++c) {
        z[idx[c]] += alpha * (zp[c] - z[idx[c]]);
        if (z[idx[c]] <= 1e-14) {
          z[idx[c]] = 0.0;
          passive[idx[c]] = false;
        }
      }
    }
  }
  return z;
}

constexpr int kTritNeg = 0;
constexpr int kTritZero = 1;
constexpr int kTritPos = 2;

// Candidate perturbations for one assigned (P, Z, N) pattern at r = 2. Every
// emitted vector is later evaluated through the true objective, so extra
// candidates cost time, never correctness.
void pattern_candidates_r2(const Mat& W, const Vec& ue, const Vec& x, double eps,
                           const std::vector<int8_t>& trits, const SubspaceInfo& zi,
                           double rank_tol, std::vector<Vec>& out) {
  const int n = static_cast<int>(W.cols());
  const int d = static_cast<int>(W.rows());

  Vec pzx = Vec::Zero(d);
  if (zi.rank > 0) pzx = zi.Q * (zi.Q.transpose() * x);
  const double pzx_norm = pzx.norm();
  bool has_zero = false;
  for (int j = 0; j < n; ++j) has_zero |= trits[j] == kTritZero;
  if (has_zero && pzx_norm > eps * (1.0 + 1e-9) + 1e-15) return;

  const double arg_raw = 1.0 - (pzx_norm * pzx_norm) / (eps * eps);
  if (arg_raw < -1e-12) return;
  const double arg = std::max(0.0, arg_raw);

  Vec g = Vec::Zero(d);
  bool has_pos = false;
  for (int j = 0; j < n; ++j)
    if (trits[j] == kTritPos) {
      g += ue[j] * W.col(j);
      has_pos = true;
    }

  auto sphere_completion = [&](const Vec& dir) {
    Vec dper = dir;
    if (zi.rank > 0) dper -= zi.Q * (zi.Q.transpose() * dir);
    const double dn = dper.norm();
    if (dn <= rank_tol) return;
    out.push_back(-(std::sqrt(arg) * dper / dn + pzx / eps));
  };

  if (has_pos) {
    Vec gper = g;
    if (zi.rank > 0) gper -= zi.Q * (zi.Q.transpose() * g);
    const double gn = gper.norm();
    if (gn > rank_tol * (1.0 + g.norm())) {
      out.push_back(-(std::sqrt(arg) * gper / gn + pzx / eps));
    } else {
      // degenerate direction: the objective is constant over the region, so
      // probe a few span-complement directions for a point inside it
      sphere_completion(x);
      sphere_completion(-x);
      for (int i = 0; i < d && zi.rank > 0; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = 1.0;
        sphere_completion(e);
      }
      if (has_zero) out.push_back(-pzx / eps);
    }
    return;
  }

  if (has_zero) {
    if (pzx_norm > 0.0) out.push_back(-pzx / pzx_norm);
    out.push_back(-pzx / eps);
    sphere_completion(x);
    sphere_completion(-x);
  }
}

struct ScoredCandidate {
  double value;
  Vec s;
  SignPattern pattern;
  std::string enc;
  bool on_sphere;
};

}  // namespace

bool SignPattern::operator==(const SignPattern& o) const {
  return pos == o.pos && zero == o.zero && neg == o.neg;
}

std::string SignPattern::encode(int n) const {
  std::string code(static_cast<size_t>(n), '0');
  for (int j : zero) code[j] = '1';
  for (int j : pos) code[j] = '2';
  return code;
}

SignPattern classify_pattern(const NetParams& net, const Vec& x, const Vec& s, double eps,
                             double tau_zero) {
  SignPattern pat;
  for (int j = 0; j < net.neurons(); ++j) {
    const double a = net.W.col(j).dot(x + eps * s);
    if (a > tau_zero)
      pat.pos.push_back(j);
    else if (a < -tau_zero)
      pat.neg.push_back(j);
    else
      pat.zero.push_back(j);
  }
  return pat;
}

double linear_adversarial_margin(const Vec& w, const Vec& x, double y, const PerturbSpec& spec) {
  return y * w.dot(x) - spec.eps * lp_norm(w, spec.r.dual());
}

double relu_adversarial_margin(const Vec& w, const Vec& x, double y, const PerturbSpec& spec) {
  return y * std::max(0.0, w.dot(x) - spec.eps * y * lp_norm(w, spec.r.dual()));
}

double Activation::operator()(double z) const {
  switch (kind) {
    case Kind::relu: return z > 0 ? z : 0.0;
    case Kind::leaky_relu: return z > 0 ? z : alpha * z;
    case Kind::tanh: return std::tanh(z);
  }
  return 0.0;
}

double Activation::slope(double z) const {
  switch (kind) {
    case Kind::relu: return z > 0 ? 1.0 : 0.0;
    case Kind::leaky_relu: return z > 0 ? 1.0 : alpha;
    case Kind::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 0.0;
}

double Activation::lipschitz() const {
  switch (kind) {
    case Kind::relu: return 1.0;
    case Kind::leaky_relu: return std::max(1.0, alpha);
    case Kind::tanh: return 1.0;
  }
  return 1.0;
}

std::string Activation::name() const {
  switch (kind) {
    case Kind::relu: return "relu";
    case Kind::leaky_relu: return "leaky_relu";
    case Kind::tanh: return "tanh";
  }
  return "?";
}

double net_objective(const NetParams& net, const Vec& x, double y, double eps, const Vec& s,
                     const Activation& act) {
  double v = 0.0;
  const Vec z = x + eps * s;
  for (int j = 0; j < net.neurons(); ++j) v += net.u[j] * act(net.W.col(j).dot(z));
  return y * v;
}

PerturbResult net_adversarial_exact_r2(const NetParams& net, const Vec& x, double y, double eps,
                                       const EnumerationOptions& opts) {
  validate_net(net);
  const int n = net.neurons();
  const int d = net.dim();
  if (n > opts.max_neurons)
    throw BudgetExceeded("net_adversarial_exact_r2: " + std::to_string(n) +
                         " neurons exceed the enumeration cap of " +
                         std::to_string(opts.max_neurons));
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");

  const Vec ue = y * net.u;
  NetParams folded{net.W, ue};

  PerturbResult res;
  if (eps == 0.0) {
    res.s_star = Vec::Zero(d);
    res.value = net_objective(folded, x, 1.0, 0.0, res.s_star);
    res.pattern = classify_pattern(net, x, res.s_star, 0.0, opts.tau_zero);
    res.on_sphere = false;
    res.method = PerturbMethod::closed_form;
    return res;
  }

  std::vector<Vec> raw;
  std::unordered_map<std::uint32_t, SubspaceInfo> zcache;
  const int zcap = std::min(n, d);

  std::vector<int8_t> trits(n, kTritNeg);
  const long total = static_cast<long>(std::pow(3.0, n) + 0.5);
  for (long code = 0; code < total; ++code) {
    long c = code;
    int nzero = 0;
    std::uint32_t zmask = 0;
    for (int j = 0; j < n; ++j) {
      trits[j] = static_cast<int8_t>(c % 3);
      if (trits[j] == kTritZero) {
        ++nzero;
        zmask |= (1u << j);
      }
      c /= 3;
    }
    if (nzero > zcap) continue;
    bool all_neg = true;
    for (int j = 0; j < n; ++j) all_neg &= trits[j] == kTritNeg;
    if (all_neg) continue;  // handled by the cone projection below

    auto it = zcache.find(zmask);
    if (it == zcache.end()) {
      std::vector<int> zidx;
      for (int j = 0; j < n; ++j)
        if (zmask & (1u << j)) zidx.push_back(j);
      it = zcache.emplace(zmask, subspace_basis(net.W, zidx, opts.rank_tol)).first;
    }
    pattern_candidates_r2(net.W, ue, x, eps, trits, it->second, opts.rank_tol, raw);
  }

  // Zero attainability: all activations can be pushed <= 0 iff the distance
  // from x to the cone {z : W^T z <= 0} is at most eps. The projection splits
  // x = proj_K(x) + W a with a >= 0 (Moreau), computable by NNLS.
  {
    const Vec a = nnls(net.W, x);
    const Vec wpart = net.W * a;
    if (wpart.norm() <= eps * (1.0 + 1e-9)) {
      const Vec s0 = -wpart / eps;
      raw.push_back(s0);
      Vec dir = x - wpart;  // stays in the cone when scaled up
      if (dir.norm() <= opts.rank_tol * (1.0 + x.norm())) {
        // x is (numerically) inside the dual cone; use a null direction of W^T
        Eigen::ColPivHouseholderQR<Mat> qr(net.W);
        qr.setThreshold(opts.rank_tol);
        const int rank = static_cast<int>(qr.rank());
        if (rank < d) {
          Mat Qfull = qr.householderQ() * Mat::Identity(d, d);
          dir = Qfull.col(rank);
        } else {
          dir.setZero();
        }
      }
      const double dn = dir.norm();
      if (dn > 0.0) {
        // extend s0 along dir/eps until the 2-sphere is hit
        const Vec v = dir / (eps * dn);
        const double b = s0.dot(v);
        const double c0 = s0.squaredNorm() - 1.0;
        const double disc = b * b - v.squaredNorm() * c0;
        if (disc >= 0.0) {
          const double t = (-b + std::sqrt(disc)) / v.squaredNorm();
          if (t >= 0.0) raw.push_back(s0 + t * v);
        }
      }
    }
  }

  if (x.norm() <= eps) raw.push_back(-x / eps);
  raw.push_back(Vec::Zero(d));

  std::vector<ScoredCandidate> scored;
  scored.reserve(raw.size());
  for (Vec& s : raw) {
    double ns = s.norm();
    if (ns > 1.0 + 1e-9) continue;
    if (ns > 1.0) {
      s /= ns;
      ns = 1.0;
    }
    ScoredCandidate sc;
    sc.value = net_objective(folded, x, 1.0, eps, s);
    sc.s = std::move(s);
    sc.pattern = classify_pattern(net, x, sc.s, eps, opts.tau_zero);
    sc.enc = sc.pattern.encode(n);
    sc.on_sphere = std::abs(ns - 1.0) <= 1e-8;
    scored.push_back(std::move(sc));
  }
  if (scored.empty())
    throw NoFeasiblePattern("net_adversarial_exact_r2: no feasible candidate pattern");

  double vmin = scored.front().value;
  for (const auto& sc : scored) vmin = std::min(vmin, sc.value);
  const double tie = 1e-12 * (1.0 + std::abs(vmin));
  const ScoredCandidate* best = nullptr;
  for (const auto& sc : scored) {
    if (sc.value > vmin + tie) continue;
    if (best == nullptr || (sc.on_sphere && !best->on_sphere) ||
        (sc.on_sphere == best->on_sphere &&
         (sc.enc < best->enc || (sc.enc == best->enc && sc.value < best->value))))
      best = &sc;
  }

  res.value = best->value;
  res.s_star = best->s;
  res.pattern = best->pattern;
  res.on_sphere = best->on_sphere;
  res.method = PerturbMethod::enumeration_r2;
  return res;
}

namespace {

Vec subgradient(const NetParams& folded, const Vec& x, double eps, const Vec& s,
                const Activation& act) {
  Vec g = Vec::Zero(folded.dim());
  const Vec z = x + eps * s;
  for (int j = 0; j < folded.neurons(); ++j) {
    const double a = folded.W.col(j).dot(z);
    g += folded.u[j] * act.slope(a) * folded.W.col(j);
  }
  return eps * g;
}

}  // namespace

PerturbResult net_adversarial_search(const NetParams& net, const Vec& x, double y,
                                     const PerturbSpec& spec, const SearchBudget& budget,
                                     const Activation& act) {
  validate_net(net);
  const int n = net.neurons();
  const int d = net.dim();
  const double eps = spec.eps;
  const Vec ue = y * net.u;
  NetParams folded{net.W, ue};

  PerturbResult res;
  res.method = PerturbMethod::search;
  if (eps == 0.0) {
    res.s_star = Vec::Zero(d);
    res.value = net_objective(folded, x, 1.0, 0.0, res.s_star, act);
    res.pattern = classify_pattern(net, x, res.s_star, 0.0);
    res.on_sphere = false;
    return res;
  }

  auto clip = [&](Vec s) {
    const double nr = lp_norm(s, spec.r);
    if (nr > 1.0) s /= nr;
    return s;
  };
  auto objective = [&](const Vec& s) { return net_objective(folded, x, 1.0, eps, s, act); };

  std::vector<Vec> starts;
  starts.push_back(Vec::Zero(d));
  if (lp_norm(x, spec.r) <= eps) starts.push_back(-x / eps);
  {
    Vec g0 = subgradient(folded, x, eps, Vec::Zero(d), act);
    if (g0.cwiseAbs().maxCoeff() > 0.0) starts.push_back(-dual_witness(g0, spec.r));
  }
  for (int j = 0; j < n && static_cast<int>(starts.size()) < budget.restarts; ++j)
    if (net.W.col(j).cwiseAbs().maxCoeff() > 0.0)
      starts.push_back(-dual_witness(net.W.col(j), spec.r));
  if (budget.restarts > static_cast<int>(starts.size())) {
    auto fill = sample_r_ball(d, spec.r, budget.restarts - static_cast<int>(starts.size()),
                              rng::derive(budget.seed, "perturb-search"));
    for (Vec& s : fill) {
      const double nr = lp_norm(s, spec.r);
      if (nr > 0.0) s /= nr;  // start on the sphere for coverage
      starts.push_back(std::move(s));
    }
  }
  if (static_cast<int>(starts.size()) > budget.restarts && budget.restarts > 0)
    starts.resize(budget.restarts);

  const double step0 = budget.step_scale * eps;
  double best_val = std::numeric_limits<double>::infinity();
  Vec best_s;
  std::vector<std::pair<double, Vec>> pool;
  for (const Vec& s0 : starts) {
    Vec s = clip(s0);
    double local_best = objective(s);
    Vec local_s = s;
    for (int k = 1; k <= budget.steps; ++k) {
      Vec g = subgradient(folded, x, eps, s, act);
      const double gn = g.norm();
      if (gn == 0.0) break;
      s = clip(s - (step0 / std::sqrt(static_cast<double>(k))) * (g / gn));
      const double v = objective(s);
      if (v < local_best) {
        local_best = v;
        local_s = s;
      }
    }
    pool.emplace_back(local_best, local_s);
    if (local_best < best_val) {
      best_val = local_best;
      best_s = local_s;
    }
  }

  // Polish the most promising basins.
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const int polish_count = std::min<int>(3, static_cast<int>(pool.size()));
  const bool exact_polish = act.kind == Activation::Kind::relu && spec.r == Exponent(2.0);
  for (int pi = 0; pi < polish_count; ++pi) {
    const Vec sp = pool[pi].second;
    if (exact_polish) {
      // re-solve the first-order conditions on the local sign pattern,
      // enumerating borderline neurons through all three classes
      const Vec z = x + eps * sp;
      std::vector<std::pair<double, int>> near;
      std::vector<int8_t> base(n, kTritNeg);
      for (int j = 0; j < n; ++j) {
        const double a = net.W.col(j).dot(z);
        const double kappa = 1e-4 * (1.0 + net.W.col(j).norm() * (x.norm() + eps));
        base[j] = a > 0 ? static_cast<int8_t>(kTritPos) : static_cast<int8_t>(kTritNeg);
        if (std::abs(a) <= kappa) near.emplace_back(std::abs(a) / kappa, j);
      }
      std::sort(near.begin(), near.end());
      if (near.size() > 6) near.resize(6);
      const int nn = static_cast<int>(near.size());
      const long combos = static_cast<long>(std::pow(3.0, nn) + 0.5);
      std::vector<Vec> cands;
      for (long code = 0; code < combos; ++code) {
        std::vector<int8_t> trits = base;
        long c = code;
        std::vector<int> zidx;
        for (int t = 0; t < nn; ++t) {
          trits[near[t].second] = static_cast<int8_t>(c % 3);
          c /= 3;
        }
        for (int j = 0; j < n; ++j)
          if (trits[j] == kTritZero) zidx.push_back(j);
        if (static_cast<int>(zidx.size()) > std::min(n, d)) continue;
        SubspaceInfo zi = subspace_basis(net.W, zidx, 1e-10);
        pattern_candidates_r2(net.W, ue, x, eps, trits, zi, 1e-10, cands);
      }
      for (Vec& cs : cands) {
        double nr = cs.norm();
        if (nr > 1.0 + 1e-9) continue;
        if (nr > 1.0) cs /= nr;
        const double v = objective(cs);
        if (v < best_val) {
          best_val = v;
          best_s = cs;
        }
      }
    }
    // linearization fixed point, valid for any activation and 1 < r < inf
    Vec sf = sp;
    for (int t = 0; t < 15; ++t) {
      Vec g = subgradient(folded, x, eps, sf, act);
      if (g.cwiseAbs().maxCoeff() == 0.0) break;
      Vec cand = -dual_witness(g, spec.r);
      const double v = objective(cand);
      if (v < best_val) {
        best_val = v;
        best_s = cand;
      }
      if ((cand - sf).norm() < 1e-14) break;
      sf = cand;
    }
  }

  res.value = best_val;
  res.s_star = best_s;
  res.pattern = classify_pattern(net, x, best_s, eps);
  res.on_sphere = std::abs(lp_norm(best_s, spec.r) - 1.0) <= 1e-8;
  return res;
}

PerturbResult net_adversarial(const NetParams& net, const Vec& x, double y,
                              const PerturbSpec& spec, const SearchBudget& budget,
                              const EnumerationOptions& opts) {
  if (spec.r == Exponent(2.0) && net.neurons() <= opts.max_neurons) {
    try {
      return net_adversarial_exact_r2(net, x, y, spec.eps, opts);
    } catch (const NoFeasiblePattern&) {
      // numerical degeneracy; the search below still yields a valid upper bound
    }
  }
  return net_adversarial_search(net, x, y, spec, budget);
}

NecessaryConditionReport verify_necessary_condition(const NetParams& net, const Vec& x,
                                                    const Vec& s, const SignPattern& pattern,
                                                    const Exponent& r, double eps) {
  validate_net(net);
  if (r.value() <= 1.0 || r.is_inf())
    throw std::invalid_argument("verify_necessary_condition: requires 1 < r < inf");
  if (!(eps > 0.0))
    throw std::invalid_argument("verify_necessary_condition: requires eps > 0");
  const int d = net.dim();
  const double rv = r.value();

  const double smax = s.cwiseAbs().maxCoeff();
  if (rv < 2.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (std::abs(s[i]) <= 1e-14 * smax)
        throw DegenerateDual("verify_necessary_condition: zero coordinate with r < 2");

  Vec v(d);  // gradient direction of |s|_r^r / r at the sphere
  for (int i = 0; i < d; ++i) {
    const double a = std::abs(s[i]);
    const double mag = a == 0.0 ? 0.0 : std::pow(a, rv - 1.0);
    v[i] = s[i] > 0 ? mag : (s[i] < 0 ? -mag : 0.0);
  }

  Vec h = Vec::Zero(d);
  for (int j : pattern.pos) h += net.u[j] * net.W.col(j);
  const int k = static_cast<int>(pattern.zero.size());

  NecessaryConditionReport rep;
  rep.t = Vec::Zero(k);
  if (pattern.pos.empty()) {
    rep.lambda = 0.0;
    rep.residual = 0.0;
  } else if (k == 0) {
    rep.lambda = eps * lp_norm(h, r.dual());
    rep.residual = (eps * h + rep.lambda * v).norm();
  } else {
    Mat A(d, k + 1);
    for (int c = 0; c < k; ++c) A.col(c) = eps * net.u[pattern.zero[c]] * net.W.col(pattern.zero[c]);
    A.col(k) = v;
    Vec sol = A.colPivHouseholderQr().solve(Vec(-eps * h));
    for (int c = 0; c < k; ++c) rep.t[c] = std::clamp(sol[c], 0.0, 1.0);
    rep.lambda = std::max(0.0, sol[k]);
    Vec resid = eps * h + rep.lambda * v;
    for (int c = 0; c < k; ++c) resid += rep.t[c] * A.col(c);
    rep.residual = resid.norm();
  }

  rep.constraint_defect = std::abs(lp_norm(s, r) - 1.0);
  if (k > 0) {
    SubspaceInfo zi = subspace_basis(net.W, pattern.zero, 1e-10);
    if (zi.rank > 0) {
      const Vec pzs = zi.Q * (zi.Q.transpose() * s);
      const Vec pzx = zi.Q * (zi.Q.transpose() * x);
      rep.constraint_defect += (pzs + pzx / eps).norm();
    }
  }
  return rep;
}

std::vector<Vec> sample_r_ball(int d, const Exponent& r, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_r_ball: count must be >= 1");
  if (d < 1) throw std::invalid_argument("sample_r_ball: d must be >= 1");
  rng::Engine eng(rng::derive(seed, "r-ball"));
  std::vector<Vec> out;
  out.reserve(count);
  const double shape = r.is_inf() ? 0.0 : 1.0 / r.value();
  while (static_cast<int>(out.size()) < count) {
    Vec t(d);
    for (int i = 0; i < d; ++i) {
      if (r.is_inf()) {
        t[i] = eng.uniform(-1.0, 1.0);
      } else {
        const double g = eng.gamma(shape);
        const double mag = std::pow(g, 1.0 / r.value());
        t[i] = eng.sign() * mag;
      }
    }
    const double nr = lp_norm(t, r);
    if (nr == 0.0 || !std::isfinite(nr)) continue;
    const double radius = std::pow(eng.uniform(), 1.0 / d);
    out.push_back(t * (radius / nr));
  }
  return out;
}

SphereOptimality check_sphere_optimality(const PerturbResult& result, const Vec& x,
                                         const PerturbSpec& spec, int n, int d) {
  if (spec.eps == 0.0) return SphereOptimality::SphereOrCenter;  // every point is optimal
  const double sn = lp_norm(result.s_star, spec.r);
  const bool on_sphere = std::abs(sn - 1.0) <= 1e-8;
  if (lp_norm(x, spec.r) >= spec.eps || n < d) {
    if (!on_sphere)
      throw OptimalityViolation("optimum expected on the r-sphere but |s*|_r = " +
                                std::to_string(sn));
    return SphereOptimality::MustBeOnSphere;
  }
  const bool at_center = (result.s_star + x / spec.eps).norm() <= 1e-8 * (1.0 + x.norm() / spec.eps);
  if (!on_sphere && !at_center)
    throw OptimalityViolation("optimum expected on the r-sphere or at -x/eps");
  return SphereOptimality::SphereOrCenter;
}

}  // namespace advrc
