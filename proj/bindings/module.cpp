#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "advrc/bounds.hpp"
#include "advrc/figures.hpp"
#include "advrc/perturb.hpp"
#include "advrc/rademacher.hpp"
#include "advrc/sample.hpp"
#include "advrc/shatter.hpp"
#include "advrc/verify.hpp"

namespace py = pybind11;
using namespace advrc;

namespace {

Activation make_activation(const std::string& name, double alpha) {
  if (name == "relu") return Activation::relu();
  if (name == "leaky_relu") return Activation::leaky_relu(alpha);
  if (name == "tanh") return Activation::tanh();
  throw std::invalid_argument("unknown activation: " + name);
}

std::string method_str(PerturbMethod m) {
  switch (m) {
    case PerturbMethod::closed_form: return "closed_form";
    case PerturbMethod::enumeration_r2: return "enumeration_r2";
    case PerturbMethod::search: return "search";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "adversarial Rademacher complexity: perturbations, estimators, bounds";

  py::class_<Exponent>(m, "Exponent")
      .def(py::init<double>(), py::arg("value"))
      .def_property_readonly("value", &Exponent::value)
      .def_property_readonly("is_inf", &Exponent::is_inf)
      .def("dual", &Exponent::dual)
      .def("inv", &Exponent::inv)
      .def("__repr__", [](const Exponent& p) { return "Exponent(" + p.str() + ")"; })
      .def("__eq__", [](const Exponent& a, const Exponent& b) { return a == b; });
  py::implicitly_convertible<py::float_, Exponent>();
  py::implicitly_convertible<py::int_, Exponent>();

  m.def("lp_norm", &lp_norm, py::arg("v"), py::arg("p"));
  m.def("dual_witness", &dual_witness, py::arg("u"), py::arg("q"));
  m.def("group_norm", &group_norm, py::arg("M"), py::arg("p1"), py::arg("p2"));

  py::class_<NormRatio>(m, "NormRatio")
      .def_readonly("value", &NormRatio::value)
      .def_readonly("witness", &NormRatio::witness);
  m.def("norm_ratio_sup", &norm_ratio_sup, py::arg("p"), py::arg("r"), py::arg("d"));

  py::class_<ConstantsReport>(m, "ConstantsReport")
      .def_readonly("c1", &ConstantsReport::c1)
      .def_readonly("c2", &ConstantsReport::c2)
      .def_readonly("c2_lower", &ConstantsReport::c2_lower)
      .def_readonly("c2_upper", &ConstantsReport::c2_upper)
      .def_readonly("b_qstar", &ConstantsReport::b_qstar);
  m.def("constants", &constants, py::arg("p"));

  py::class_<GroupNormReport>(m, "GroupNormReport")
      .def_readonly("norm_mt_pq", &GroupNormReport::norm_mt_pq)
      .def_readonly("norm_m_qp", &GroupNormReport::norm_m_qp)
      .def_readonly("ratio", &GroupNormReport::ratio)
      .def_readonly("ratio_lower", &GroupNormReport::ratio_lower)
      .def_readonly("ratio_upper", &GroupNormReport::ratio_upper)
      .def_readonly("lower_holds", &GroupNormReport::lower_holds)
      .def_readonly("upper_holds", &GroupNormReport::upper_holds)
      .def_readonly("reversed", &GroupNormReport::reversed);
  m.def("check_group_norm_inequalities", &check_group_norm_inequalities, py::arg("M"),
        py::arg("p"), py::arg("q"));

  py::class_<Sample>(m, "Sample")
      .def(py::init<>())
      .def(py::init([](const Mat& X, const Vec& y) {
             Sample s{X, y};
             s.validate();
             return s;
           }),
           py::arg("X"), py::arg("y"))
      .def_readwrite("X", &Sample::X)
      .def_readwrite("y", &Sample::y)
      .def_property_readonly("dim", &Sample::dim)
      .def_property_readonly("size", &Sample::size);
  py::enum_<SampleDistribution>(m, "SampleDistribution")
      .value("gaussian", SampleDistribution::gaussian)
      .value("sphere", SampleDistribution::sphere)
      .value("grid", SampleDistribution::grid);
  m.def("generate_sample", &generate_sample, py::arg("d"), py::arg("m"), py::arg("dist"),
        py::arg("seed"));
  m.def("load_sample_csv", &load_sample_csv, py::arg("path"));
  m.def("save_sample_csv", &save_sample_csv, py::arg("sample"), py::arg("path"));

  py::class_<PerturbSpec>(m, "PerturbSpec")
      .def(py::init<Exponent, double>(), py::arg("r"), py::arg("eps"))
      .def_readonly("r", &PerturbSpec::r)
      .def_readonly("eps", &PerturbSpec::eps);

  py::class_<NetParams>(m, "NetParams")
      .def(py::init([](const Mat& W, const Vec& u) { return NetParams{W, u}; }), py::arg("W"),
           py::arg("u"))
      .def_readwrite("W", &NetParams::W)
      .def_readwrite("u", &NetParams::u)
      .def_property_readonly("dim", &NetParams::dim)
      .def_property_readonly("neurons", &NetParams::neurons);

  py::class_<SignPattern>(m, "SignPattern")
      .def_readonly("pos", &SignPattern::pos)
      .def_readonly("zero", &SignPattern::zero)
      .def_readonly("neg", &SignPattern::neg)
      .def("encode", &SignPattern::encode, py::arg("n"))
      .def("__eq__", [](const SignPattern& a, const SignPattern& b) { return a == b; });

  py::class_<PerturbResult>(m, "PerturbResult")
      .def_readonly("value", &PerturbResult::value)
      .def_readonly("s_star", &PerturbResult::s_star)
      .def_readonly("pattern", &PerturbResult::pattern)
      .def_readonly("on_sphere", &PerturbResult::on_sphere)
      .def_property_readonly("method",
                             [](const PerturbResult& r) { return method_str(r.method); });

  py::class_<SearchBudget>(m, "SearchBudget")
      .def(py::init<>())
      .def_readwrite("restarts", &SearchBudget::restarts)
      .def_readwrite("steps", &SearchBudget::steps)
      .def_readwrite("step_scale", &SearchBudget::step_scale)
      .def_readwrite("seed", &SearchBudget::seed);

  m.def("linear_adversarial_margin", &linear_adversarial_margin, py::arg("w"), py::arg("x"),
        py::arg("y"), py::arg("spec"));
  m.def("relu_adversarial_margin", &relu_adversarial_margin, py::arg("w"), py::arg("x"),
        py::arg("y"), py::arg("spec"));
  m.def(
      "net_adversarial_exact_r2",
      [](const NetParams& net, const Vec& x, double y, double eps, int max_neurons) {
        EnumerationOptions opts;
        opts.max_neurons = max_neurons;
        return net_adversarial_exact_r2(net, x, y, eps, opts);
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("eps"), py::arg("max_neurons") = 12);
  m.def(
      "net_adversarial_search",
      [](const NetParams& net, const Vec& x, double y, const PerturbSpec& spec,
         const SearchBudget& budget, const std::string& activation, double alpha) {
        return net_adversarial_search(net, x, y, spec, budget, make_activation(activation, alpha));
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("spec"),
      py::arg("budget") = SearchBudget{}, py::arg("activation") = "relu", py::arg("alpha") = 0.1);
  m.def(
      "net_adversarial",
      [](const NetParams& net, const Vec& x, double y, const PerturbSpec& spec,
         const SearchBudget& budget) { return net_adversarial(net, x, y, spec, budget); },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("spec"),
      py::arg("budget") = SearchBudget{});

  py::class_<NecessaryConditionReport>(m, "NecessaryConditionReport")
      .def_readonly("lambda_", &NecessaryConditionReport::lambda)
      .def_readonly("t", &NecessaryConditionReport::t)
      .def_readonly("residual", &NecessaryConditionReport::residual)
      .def_readonly("constraint_defect", &NecessaryConditionReport::constraint_defect);
  m.def("verify_necessary_condition", &verify_necessary_condition, py::arg("net"), py::arg("x"),
        py::arg("s"), py::arg("pattern"), py::arg("r"), py::arg("eps"));

  m.def("sample_r_ball", &sample_r_ball, py::arg("d"), py::arg("r"), py::arg("count"),
        py::arg("seed"));

  py::enum_<SphereOptimality>(m, "SphereOptimality")
      .value("MustBeOnSphere", SphereOptimality::MustBeOnSphere)
      .value("SphereOrCenter", SphereOptimality::SphereOrCenter);
  m.def("check_sphere_optimality", &check_sphere_optimality, py::arg("result"), py::arg("x"),
        py::arg("spec"), py::arg("n"), py::arg("d"));
  m.def(
      "net_objective",
      [](const NetParams& net, const Vec& x, double y, double eps, const Vec& s,
         const std::string& activation, double alpha) {
        return net_objective(net, x, y, eps, s, make_activation(activation, alpha));
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("eps"), py::arg("s"),
      py::arg("activation") = "relu", py::arg("alpha") = 0.1);

  py::class_<LinearFamilySpec>(m, "LinearFamilySpec")
      .def(py::init<Exponent, double>(), py::arg("p"), py::arg("weight_bound"))
      .def_readonly("p", &LinearFamilySpec::p)
      .def_readonly("weight_bound", &LinearFamilySpec::weight_bound);
  py::class_<NetFamilySpec>(m, "NetFamilySpec")
      .def(py::init([](Exponent p, double W, double lambda, int n, const std::string& act,
                       double alpha) {
             return NetFamilySpec(p, W, lambda, n, make_activation(act, alpha));
           }),
           py::arg("p"), py::arg("weight_bound"), py::arg("output_l1_bound"), py::arg("neurons"),
           py::arg("activation") = "relu", py::arg("alpha") = 0.1);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("std_err", &Estimate::std_err)
      .def_readonly("draws", &Estimate::draws)
      .def_readonly("seed", &Estimate::seed)
      .def_readonly("draw_values", &Estimate::draw_values);

  m.def(
      "estimate_linear",
      [](const Sample& s, const LinearFamilySpec& spec, const PerturbSpec& pert, int draws,
         std::uint64_t seed, int workers) {
        EstimateOptions opts;
        opts.workers = workers;
        return estimate_linear(s, spec, pert, draws, seed, opts);
      },
      py::arg("sample"), py::arg("spec"), py::arg("pert"), py::arg("draws"), py::arg("seed"),
      py::arg("workers") = 1);
  m.def(
      "estimate_relu",
      [](const Sample& s, const LinearFamilySpec& spec, const PerturbSpec& pert, int draws,
         std::uint64_t seed, int workers) {
        EstimateOptions opts;
        opts.workers = workers;
        return estimate_relu(s, spec, pert, draws, seed, opts);
      },
      py::arg("sample"), py::arg("spec"), py::arg("pert"), py::arg("draws"), py::arg("seed"),
      py::arg("workers") = 1);
  m.def(
      "estimate_net",
      [](const Sample& s, const NetFamilySpec& spec, const PerturbSpec& pert, int draws,
         std::uint64_t seed, int workers, int restarts) {
        NetEstimateOptions opts;
        opts.workers = workers;
        opts.restarts = restarts;
        return estimate_net(s, spec, pert, draws, seed, opts);
      },
      py::arg("sample"), py::arg("spec"), py::arg("pert"), py::arg("draws"), py::arg("seed"),
      py::arg("workers") = 1, py::arg("restarts") = 6);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("value", &BoundReport::value)
      .def_readonly("inputs_digest", &BoundReport::inputs_digest)
      .def("component", &BoundReport::component, py::arg("key"))
      .def_property_readonly("components", [](const BoundReport& r) {
        py::dict d;
        for (const auto& [k, v] : r.components) d[py::str(k)] = v;
        return d;
      });
  py::enum_<CleanTermMode>(m, "CleanTermMode")
      .value("monte_carlo", CleanTermMode::monte_carlo)
      .value("analytic", CleanTermMode::analytic);

  m.def("linear_complexity_bounds", &linear_complexity_bounds, py::arg("sample"),
        py::arg("spec"));
  m.def(
      "adversarial_linear_bounds",
      [](const Sample& s, const LinearFamilySpec& spec, const PerturbSpec& pert,
         CleanTermMode mode, int draws, std::uint64_t seed) {
        McParams mc;
        mc.draws = draws;
        mc.seed = seed;
        return adversarial_linear_bounds(s, spec, pert, mode, mc);
      },
      py::arg("sample"), py::arg("spec"), py::arg("pert"),
      py::arg("mode") = CleanTermMode::analytic, py::arg("draws") = 2000, py::arg("seed") = 0);
  m.def(
      "relu_complexity_bounds",
      [](const Sample& s, const LinearFamilySpec& spec, const PerturbSpec& pert,
         double delta_refine, CleanTermMode mode, int draws, std::uint64_t seed) {
        McParams mc;
        mc.draws = draws;
        mc.seed = seed;
        return relu_complexity_bounds(s, spec, pert, delta_refine, mode, mc);
      },
      py::arg("sample"), py::arg("spec"), py::arg("pert"), py::arg("delta_refine") = 0.0,
      py::arg("mode") = CleanTermMode::analytic, py::arg("draws") = 2000, py::arg("seed") = 0);
  m.def("net_lipschitz_bound", &net_lipschitz_bound, py::arg("sample"), py::arg("spec"),
        py::arg("pert"));
  py::enum_<ShatterBoundVariant>(m, "ShatterBoundVariant")
      .value("infty_norm", ShatterBoundVariant::infty_norm)
      .value("two_norm", ShatterBoundVariant::two_norm);
  m.def("net_shatter_bound", &net_shatter_bound, py::arg("sample"), py::arg("spec"),
        py::arg("pert"), py::arg("c_star"), py::arg("pi_star"), py::arg("variant"));
  m.def("margin_loss", &margin_loss, py::arg("x"), py::arg("rho"));
  py::class_<MarginBoundInputs>(m, "MarginBoundInputs")
      .def(py::init([](double rho, double delta, double loss_cap, double complexity) {
             MarginBoundInputs in{rho, delta, loss_cap, complexity};
             in.validate();
             return in;
           }),
           py::arg("rho"), py::arg("delta"), py::arg("loss_cap"), py::arg("complexity"));
  m.def("robust_margin_bound", &robust_margin_bound, py::arg("empirical_margin_risk"),
        py::arg("inputs"), py::arg("m"));
  m.def("covering_size_bound", &covering_size_bound, py::arg("R"), py::arg("eps"), py::arg("d"));

  py::class_<PartitionSummary>(m, "PartitionSummary")
      .def_readonly("pi", &PartitionSummary::pi)
      .def_readonly("parts", &PartitionSummary::parts)
      .def_property_readonly("patterns", [](const PartitionSummary& s) {
        py::list out;
        for (const auto& [pat, count] : s.patterns) out.append(py::make_tuple(pat, count));
        return out;
      });
  py::class_<ShatterStats>(m, "ShatterStats")
      .def_readonly("c_star_estimate", &ShatterStats::c_star_estimate)
      .def_readonly("pi_star", &ShatterStats::pi_star)
      .def_readonly("candidates", &ShatterStats::candidates);

  m.def(
      "sign_pattern",
      [](const NetParams& net, const Vec& x, double y, const PerturbSpec& pert) {
        return sign_pattern(net, x, y, pert);
      },
      py::arg("net"), py::arg("x"), py::arg("y"), py::arg("pert"));
  m.def(
      "growth_function",
      [](const Sample& s, const NetParams& net, const PerturbSpec& pert) {
        return growth_function(s, net, pert);
      },
      py::arg("sample"), py::arg("net"), py::arg("pert"));
  m.def(
      "is_adversarially_shattered",
      [](const Sample& s, const NetParams& net, const PerturbSpec& pert) {
        return is_adversarially_shattered(s, net, pert);
      },
      py::arg("sample"), py::arg("net"), py::arg("pert"));
  m.def("sauer_bound", &sauer_bound, py::arg("n"), py::arg("t"));
  m.def("orthogonal_capacity_bound", &orthogonal_capacity_bound, py::arg("tau"), py::arg("p"),
        py::arg("x_norm_p_inf"), py::arg("eps"), py::arg("w_min"));
  m.def(
      "partition_stats",
      [](const Sample& s, const PerturbSpec& pert, const std::vector<NetParams>& candidates) {
        return partition_stats(s, pert, candidates);
      },
      py::arg("sample"), py::arg("pert"), py::arg("candidates"));

  m.def("write_constants_csv", &write_constants_csv, py::arg("path"));
  m.def("write_norm_comparison_csv", &write_norm_comparison_csv, py::arg("path"));

  m.def(
      "run_verify_suite",
      [](const std::string& suite, std::uint64_t seed) {
        py::list out;
        for (const auto& r : verify::run_suite(verify::suite_from_string(suite), seed)) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("suite"), py::arg("seed") = 0);

  py::register_exception<ZeroVectorError>(m, "ZeroVectorError");
  py::register_exception<BudgetExceeded>(m, "BudgetExceededError");
  py::register_exception<NoFeasiblePattern>(m, "NoFeasiblePatternError");
  py::register_exception<DegenerateDual>(m, "DegenerateDualError");
  py::register_exception<OptimalityViolation>(m, "OptimalityViolationError");
  py::register_exception<HypothesisViolated>(m, "HypothesisViolatedError");
}
