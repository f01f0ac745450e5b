#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "advrc/bounds.hpp"
#include "advrc/figures.hpp"
#include "advrc/perturb.hpp"
#include "advrc/rademacher.hpp"
#include "advrc/report.hpp"
#include "advrc/rng.hpp"
#include "advrc/sample.hpp"
#include "advrc/shatter.hpp"
#include "advrc/verify.hpp"

namespace {

using namespace advrc;

Exponent parse_exponent(const std::string& s) {
  if (s == "inf") return Exponent::infinity();
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad norm order: " + s);
  return Exponent(v);
}

Activation parse_activation(const std::string& name, double alpha) {
  if (name == "relu") return Activation::relu();
  if (name == "leaky_relu") return Activation::leaky_relu(alpha);
  if (name == "tanh") return Activation::tanh();
  throw std::invalid_argument("unknown activation: " + name);
}

void emit(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write report: " + out_path);
    f << text;
  }
}

NetParams seeded_net(int d, int n, const Exponent& p, double W, double lambda,
                     std::uint64_t key) {
  rng::Engine eng(key);
  NetParams net;
  net.W.resize(d, n);
  net.u.resize(n);
  for (int j = 0; j < n; ++j) {
    Vec w(d);
    for (int i = 0; i < d; ++i) w[i] = eng.normal();
    const double nn = lp_norm(w, p);
    net.W.col(j) = nn > 0 ? Vec(W * w / nn) : w;
    net.u[j] = eng.normal();
  }
  const double l1 = net.u.cwiseAbs().sum();
  if (l1 > 0) net.u *= lambda / l1;
  return net;
}

std::vector<NetParams> seeded_candidates(int count, int d, int n, const Exponent& p, double W,
                                         double lambda, std::uint64_t seed) {
  std::vector<NetParams> nets;
  nets.reserve(count);
  for (int c = 0; c < count; ++c)
    nets.push_back(seeded_net(d, n, p, W, lambda, rng::derive(seed, "candidate-net", c)));
  return nets;
}

struct CommonParams {
  std::string input, out;
  std::string p_str = "2", r_str = "2";
  double eps = 0.0;
  double weight_bound = 1.0;
  double lambda = 1.0;
  int neurons = 1;
  std::string activation = "relu";
  double alpha = 0.1;
  int draws = 2000;
  std::uint64_t seed = 0;
  int workers = 1;
};

void add_family_flags(CLI::App* cmd, CommonParams& c, bool with_input = true) {
  if (with_input)
    cmd->add_option("--input", c.input, "sample CSV path")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "write the JSON report here instead of stdout");
  cmd->add_option("--p", c.p_str, "weight norm order (number or 'inf')");
  cmd->add_option("--r", c.r_str, "attack norm order (number or 'inf')");
  cmd->add_option("--eps", c.eps, "perturbation budget")->check(CLI::NonNegativeNumber);
  cmd->add_option("--W", c.weight_bound, "weight norm bound");
  cmd->add_option("--lambda", c.lambda, "output-weight l1 bound");
  cmd->add_option("--n", c.neurons, "hidden neurons")->check(CLI::PositiveNumber);
  cmd->add_option("--activation", c.activation, "relu | leaky_relu | tanh");
  cmd->add_option("--alpha", c.alpha, "leaky_relu slope");
  cmd->add_option("--seed", c.seed, "root seed; all randomness derives from it");
  cmd->add_option("--workers", c.workers, "worker threads (results are independent of it)");
}

Json params_json(const CommonParams& c, bool with_net) {
  Json j;
  j["p"] = exponent_json(parse_exponent(c.p_str));
  j["r"] = exponent_json(parse_exponent(c.r_str));
  j["eps"] = c.eps;
  j["W"] = c.weight_bound;
  if (with_net) {
    j["lambda"] = c.lambda;
    j["n"] = c.neurons;
    j["activation"] = c.activation;
  }
  return j;
}

int cmd_gen(int d, int m, const std::string& dist, std::uint64_t seed, const std::string& out) {
  SampleDistribution sd;
  if (dist == "gaussian")
    sd = SampleDistribution::gaussian;
  else if (dist == "sphere")
    sd = SampleDistribution::sphere;
  else if (dist == "grid")
    sd = SampleDistribution::grid;
  else
    throw std::invalid_argument("unknown distribution: " + dist);
  save_sample_csv(generate_sample(d, m, sd, seed), out);
  return 0;
}

int cmd_estimate(const std::string& family, const CommonParams& c) {
  const Sample sample = load_sample_csv(c.input);
  const Exponent p = parse_exponent(c.p_str);
  const Exponent r = parse_exponent(c.r_str);
  const PerturbSpec pert(r, c.eps);

  Estimate est;
  if (family == "linear" || family == "relu") {
    const LinearFamilySpec spec(p, c.weight_bound);
    EstimateOptions opts;
    opts.workers = c.workers;
    est = family == "linear" ? estimate_linear(sample, spec, pert, c.draws, c.seed, opts)
                             : estimate_relu(sample, spec, pert, c.draws, c.seed, opts);
  } else if (family == "net") {
    const NetFamilySpec spec(p, c.weight_bound, c.lambda, c.neurons,
                             parse_activation(c.activation, c.alpha));
    NetEstimateOptions opts;
    opts.workers = c.workers;
    est = estimate_net(sample, spec, pert, c.draws, c.seed, opts);
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }

  Json j;
  j["command"] = "estimate";
  j["family"] = family;
  j["params"] = params_json(c, family == "net");
  j["seed"] = c.seed;
  j["inputs_digest"] = Digest()
                           .add(sample)
                           .add(parse_exponent(c.p_str).value())
                           .add(parse_exponent(c.r_str).value())
                           .add(c.eps)
                           .add(c.weight_bound)
                           .add(family)
                           .hex();
  j["estimate"] = json_of(est);
  emit(j, c.out);
  return 0;
}

int cmd_bounds(const std::string& family, const CommonParams& c, const std::string& mode,
               double delta_refine, const std::string& variant, int candidates) {
  const Sample sample = load_sample_csv(c.input);
  const Exponent p = parse_exponent(c.p_str);
  const Exponent r = parse_exponent(c.r_str);
  const PerturbSpec pert(r, c.eps);
  const CleanTermMode clean_mode =
      mode == "analytic" ? CleanTermMode::analytic : CleanTermMode::monte_carlo;
  McParams mc;
  mc.draws = c.draws;
  mc.seed = c.seed;
  mc.opts.workers = c.workers;

  Json j;
  j["command"] = "bounds";
  j["family"] = family;
  j["params"] = params_json(c, family == "net-lipschitz" || family == "net-shatter");
  j["seed"] = c.seed;

  if (family == "linear") {
    const LinearFamilySpec spec(p, c.weight_bound);
    j["report"] = json_of(adversarial_linear_bounds(sample, spec, pert, clean_mode, mc));
    j["clean_bounds"] = json_of(linear_complexity_bounds(sample, spec));
  } else if (family == "relu") {
    const LinearFamilySpec spec(p, c.weight_bound);
    j["report"] =
        json_of(relu_complexity_bounds(sample, spec, pert, delta_refine, clean_mode, mc));
  } else if (family == "net-lipschitz") {
    const NetFamilySpec spec(p, c.weight_bound, c.lambda, c.neurons,
                             parse_activation(c.activation, c.alpha));
    j["report"] = json_of(net_lipschitz_bound(sample, spec, pert));
  } else if (family == "net-shatter") {
    const NetFamilySpec spec(p, c.weight_bound, c.lambda, c.neurons, Activation::relu());
    const auto nets = seeded_candidates(candidates, sample.dim(), c.neurons, p, c.weight_bound,
                                        c.lambda, c.seed);
    ShatterOptions sopts;
    sopts.budget.seed = rng::derive(c.seed, "shatter-search");
    const ShatterStats stats = partition_stats(sample, pert, nets, sopts);
    const ShatterBoundVariant v = variant == "two_norm" ? ShatterBoundVariant::two_norm
                                                        : ShatterBoundVariant::infty_norm;
    j["stats"] = json_of(stats);
    j["report"] = json_of(net_shatter_bound(sample, spec, pert, stats.c_star_estimate,
                                            std::max(1, stats.pi_star), v));
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  emit(j, c.out);
  return 0;
}

int cmd_perturb(const CommonParams& c, int index) {
  const Sample sample = load_sample_csv(c.input);
  if (index < 0 || index >= sample.size())
    throw std::invalid_argument("--index out of range");
  const Exponent p = parse_exponent(c.p_str);
  const Exponent r = parse_exponent(c.r_str);
  const PerturbSpec pert(r, c.eps);
  const NetParams net = seeded_net(sample.dim(), c.neurons, p, c.weight_bound, c.lambda,
                                   rng::derive(c.seed, "perturb-net"));
  SearchBudget budget;
  budget.seed = rng::derive(c.seed, "perturb-budget");
  const PerturbResult res =
      net_adversarial(net, sample.X.col(index), sample.y[index], pert, budget);

  Json j;
  j["command"] = "perturb";
  j["params"] = params_json(c, true);
  j["index"] = index;
  j["seed"] = c.seed;
  j["inputs_digest"] = Digest().add(sample).add(static_cast<std::int64_t>(index)).add(c.eps).hex();
  j["result"] = json_of(res);
  if (res.on_sphere && !r.is_inf() && r.value() > 1.0 && c.eps > 0.0) {
    NetParams folded{net.W, sample.y[index] * net.u};
    const NecessaryConditionReport nc = verify_necessary_condition(
        folded, sample.X.col(index), res.s_star, res.pattern, r, c.eps);
    Json njson;
    njson["lambda"] = nc.lambda;
    njson["residual"] = nc.residual;
    njson["constraint_defect"] = nc.constraint_defect;
    j["necessary_condition"] = njson;
  }
  emit(j, c.out);
  return 0;
}

int cmd_shatter(const CommonParams& c, int candidates) {
  const Sample sample = load_sample_csv(c.input);
  const Exponent p = parse_exponent(c.p_str);
  const PerturbSpec pert(parse_exponent(c.r_str), c.eps);
  const auto nets = seeded_candidates(candidates, sample.dim(), c.neurons, p, c.weight_bound,
                                      c.lambda, c.seed);
  ShatterOptions sopts;
  sopts.budget.seed = rng::derive(c.seed, "shatter-search");

  Json j;
  j["command"] = "shatter";
  j["params"] = params_json(c, true);
  j["seed"] = c.seed;
  j["inputs_digest"] =
      Digest().add(sample).add(c.eps).add(static_cast<std::int64_t>(candidates)).hex();
  j["growth"] = json_of(growth_function(sample, nets.front(), pert, sopts), c.neurons);
  j["shattered"] = is_adversarially_shattered(sample, nets.front(), pert, sopts);
  j["stats"] = json_of(partition_stats(sample, pert, nets, sopts));
  emit(j, c.out);
  return 0;
}

int cmd_figures(const std::string& which, const std::string& out_dir) {
  if (which == "constants")
    write_constants_csv(out_dir + "/constants.csv");
  else if (which == "norm_comparison")
    write_norm_comparison_csv(out_dir + "/norm_comparison.csv");
  else
    throw std::invalid_argument("unknown figure: " + which);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial Rademacher complexity toolkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a synthetic sample CSV");
  int gen_d = 2, gen_m = 10;
  std::string gen_dist = "gaussian", gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--d", gen_d, "feature dimension")->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_m, "sample size")->check(CLI::PositiveNumber);
  gen->add_option("--dist", gen_dist, "gaussian | sphere | grid");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  auto* est = app.add_subcommand("estimate", "Monte Carlo complexity estimate");
  CommonParams est_params;
  std::string est_family = "linear";
  est->add_option("--family", est_family, "linear | relu | net");
  est->add_option("--draws", est_params.draws, "Monte Carlo draws")->check(CLI::PositiveNumber);
  add_family_flags(est, est_params);

  auto* bnd = app.add_subcommand("bounds", "closed-form bound evaluation");
  CommonParams bnd_params;
  std::string bnd_family = "linear", bnd_mode = "analytic", bnd_variant = "infty_norm";
  double bnd_delta = 0.0;
  int bnd_candidates = 50;
  bnd->add_option("--family", bnd_family, "linear | relu | net-lipschitz | net-shatter");
  bnd->add_option("--mode", bnd_mode, "clean term source: analytic | mc");
  bnd->add_option("--delta", bnd_delta, "margin refinement delta")->check(CLI::NonNegativeNumber);
  bnd->add_option("--variant", bnd_variant, "net-shatter variant: infty_norm | two_norm");
  bnd->add_option("--candidates", bnd_candidates, "candidate nets for the growth statistics")
      ->check(CLI::PositiveNumber);
  bnd->add_option("--draws", bnd_params.draws, "draws for mc mode")->check(CLI::PositiveNumber);
  add_family_flags(bnd, bnd_params);

  auto* per = app.add_subcommand("perturb", "worst-case perturbation of one sample point");
  CommonParams per_params;
  int per_index = 0;
  per->add_option("--index", per_index, "sample point index");
  add_family_flags(per, per_params);

  auto* sha = app.add_subcommand("shatter", "growth function and partition statistics");
  CommonParams sha_params;
  int sha_candidates = 50;
  sha->add_option("--candidates", sha_candidates, "candidate nets")->check(CLI::PositiveNumber);
  add_family_flags(sha, sha_params);

  auto* fig = app.add_subcommand("figures", "figure data CSVs");
  std::string fig_which = "constants", fig_dir = ".";
  fig->add_option("--which", fig_which, "norm_comparison | constants");
  fig->add_option("--out-dir", fig_dir, "output directory");

  auto* ver = app.add_subcommand("verify", "run the acceptance property suites");
  std::string ver_suite = "all";
  std::uint64_t ver_seed = 0;
  ver->add_option("--suite", ver_suite, "all | norms | perturb | sandwich | shatter");
  ver->add_option("--seed", ver_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_d, gen_m, gen_dist, gen_seed, gen_out);
    if (est->parsed()) return cmd_estimate(est_family, est_params);
    if (bnd->parsed())
      return cmd_bounds(bnd_family, bnd_params, bnd_mode, bnd_delta, bnd_variant, bnd_candidates);
    if (per->parsed()) return cmd_perturb(per_params, per_index);
    if (sha->parsed()) return cmd_shatter(sha_params, sha_candidates);
    if (fig->parsed()) return cmd_figures(fig_which, fig_dir);
    if (ver->parsed()) {
      const auto results = verify::run_suite(verify::suite_from_string(ver_suite), ver_seed);
      return verify::print_results(results) ? 0 : 1;
    }
  } catch (const HypothesisViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CsvParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
