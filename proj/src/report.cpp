#include "advrc/report.hpp"

#include "advrc/bounds.hpp"
#include "advrc/perturb.hpp"
#include "advrc/rademacher.hpp"
#include "advrc/shatter.hpp"

namespace advrc {

Json exponent_json(const Exponent& p) {
  if (p.is_inf()) return Json("inf");
  return Json(p.value());
}

Exponent exponent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Exponent::infinity();
    throw std::invalid_argument("exponent: unrecognized string value");
  }
  return Exponent(j.get<double>());
}

namespace {

const char* method_name(PerturbMethod m) {
  switch (m) {
    case PerturbMethod::closed_form: return "closed_form";
    case PerturbMethod::enumeration_r2: return "enumeration_r2";
    case PerturbMethod::search: return "search";
  }
  return "?";
}

const char* inner_name(InnerMethod m) {
  switch (m) {
    case InnerMethod::closed: return "closed";
    case InnerMethod::direction_search: return "direction_search";
    case InnerMethod::param_search: return "param_search";
  }
  return "?";
}

}  // namespace

Json json_of(const Estimate& est) {
  Json j;
  j["mean"] = est.mean;
  j["std_err"] = est.std_err;
  j["draws"] = est.draws;
  j["seed"] = est.seed;
  j["inner_method"] = inner_name(est.inner_method);
  return j;
}

Json json_of(const SignPattern& pat) {
  Json j;
  j["pos"] = pat.pos;
  j["zero"] = pat.zero;
  j["neg"] = pat.neg;
  return j;
}

Json json_of(const PerturbResult& res) {
  Json j;
  j["value"] = res.value;
  j["s_star"] = std::vector<double>(res.s_star.data(), res.s_star.data() + res.s_star.size());
  j["pattern"] = json_of(res.pattern);
  j["on_sphere"] = res.on_sphere;
  j["method"] = method_name(res.method);
  return j;
}

Json json_of(const BoundReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["value"] = rep.value;
  for (const auto& [k, v] : rep.components) j[k] = v;
  j["inputs_digest"] = rep.inputs_digest;
  return j;
}

Json json_of(const PartitionSummary& summary, int neurons) {
  Json j;
  j["pi"] = summary.pi;
  Json pats = Json::array();
  for (const auto& [pat, count] : summary.patterns) {
    Json e;
    e["pattern"] = pat.encode(neurons);
    e["count"] = count;
    pats.push_back(e);
  }
  j["patterns"] = pats;
  j["parts"] = summary.parts;
  return j;
}

Json json_of(const ShatterStats& stats) {
  Json j;
  j["c_star_estimate"] = stats.c_star_estimate;
  j["pi_star"] = stats.pi_star;
  j["candidates"] = stats.candidates;
  j["estimate_kind"] = "lower";  // finite candidate sets under-count the suprema
  return j;
}

}  // namespace advrc
