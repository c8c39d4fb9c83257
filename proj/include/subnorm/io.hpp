#pragma once

// Instance file formats (schema 1) and CSV emitters. Files are written
// atomically (temp + rename). CSV numbers use '.' decimals at 15 significant
// digits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subnorm/loadbal.hpp"
#include "subnorm/metric.hpp"
#include "subnorm/norm_json.hpp"
#include "subnorm/ofl.hpp"
#include "subnorm/ofl_bounds.hpp"
#include "subnorm/probing.hpp"

namespace subnorm {

constexpr int kSchemaVersion = 1;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw ValidationError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

// --- metric ------------------------------------------------------------

inline json metric_to_json(const MetricSpace& m) {
  switch (m.kind()) {
    case MetricSpace::Kind::Matrix:
      return json{{"type", "matrix"}, {"d", m.matrix()}};
    case MetricSpace::Kind::Euclidean:
      return json{{"type", "euclidean"}, {"points", m.points()}};
    case MetricSpace::Kind::Tree:
      return json{{"type", "tree"}, {"parent", m.tree_parent()}, {"edge", m.tree_edge()}};
  }
  throw ValidationError("metric: unknown kind");
}

inline MetricSpace metric_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "matrix")
    return MetricSpace::from_matrix(j.at("d").get<std::vector<std::vector<double>>>());
  if (type == "euclidean")
    return MetricSpace::from_points(j.at("points").get<std::vector<Vec>>());
  if (type == "tree")
    return MetricSpace::from_tree(j.at("parent").get<std::vector<int>>(),
                                  j.at("edge").get<std::vector<double>>());
  throw ValidationError("metric: unknown type '" + type + "'");
}

// --- OFL instance --------------------------------------------------------

inline json ofl_to_json(const OflInstance& inst) {
  json j{{"schema", kSchemaVersion},
         {"metric", metric_to_json(inst.metric)},
         {"requests", inst.requests},
         {"openable", inst.openable},
         {"norm", norm_to_json(inst.norm)}};
  if (inst.uniform_cost)
    j["costs"] = json{{"uniform", inst.uniform_f}};
  else
    j["costs"] = json{{"per_point", inst.per_point_cost}};
  return j;
}

inline OflInstance ofl_from_json(const json& j) {
  OflInstance inst;
  inst.metric = metric_from_json(j.at("metric"));
  inst.requests = j.at("requests").get<std::vector<int>>();
  inst.openable = j.at("openable").get<std::vector<int>>();
  inst.norm = norm_from_json(j.at("norm"));
  const json& costs = j.at("costs");
  if (costs.contains("uniform")) {
    inst.uniform_cost = true;
    inst.uniform_f = costs.at("uniform").get<double>();
  } else {
    inst.uniform_cost = false;
    inst.per_point_cost = costs.at("per_point").get<Vec>();
  }
  inst.validate();
  return inst;
}

// --- probing instance ------------------------------------------------------

inline json family_to_json(const FeasibleFamily& f) {
  switch (f.kind()) {
    case FeasibleFamily::Kind::Explicit: {
      json sets = json::array();
      for (std::uint32_t s : f.sets()) {
        std::vector<int> elems;
        for (int i = 0; i < f.ground_size(); ++i)
          if (s & (1u << i)) elems.push_back(i);
        sets.push_back(elems);
      }
      return json{{"kind", "explicit"}, {"n", f.ground_size()}, {"sets", sets}};
    }
    case FeasibleFamily::Kind::Cardinality:
      return json{{"kind", "cardinality"}, {"n", f.ground_size()}, {"k", f.cardinality_k()}};
    case FeasibleFamily::Kind::Matroid:
      return json{{"kind", "matroid"}, {"n", f.ground_size()},
                  {"matroid", json{{"type", "opaque"}}}};
  }
  throw ValidationError("family: unknown kind");
}

inline FeasibleFamily family_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int n = j.at("n").get<int>();
  if (kind == "explicit") {
    std::vector<std::uint32_t> sets;
    for (const json& s : j.at("sets")) {
      std::uint32_t mask = 0;
      for (int i : s.get<std::vector<int>>()) mask |= (1u << i);
      sets.push_back(mask);
    }
    return FeasibleFamily::explicit_sets(n, std::move(sets));
  }
  if (kind == "cardinality") return FeasibleFamily::cardinality(n, j.at("k").get<int>());
  if (kind == "matroid") return FeasibleFamily::matroid(matroid_from_json(j.at("matroid")));
  throw ValidationError("family: unknown kind '" + kind + "'");
}

inline json probing_to_json(const ProbingInstance& inst) {
  json dists = json::array();
  for (const auto& d : inst.dists)
    dists.push_back(json{{"support", d.support}, {"probs", d.probs}});
  return json{{"schema", kSchemaVersion},
              {"distributions", dists},
              {"family", family_to_json(inst.family)},
              {"norm", norm_to_json(inst.objective)}};
}

inline ProbingInstance probing_from_json(const json& j) {
  ProbingInstance inst;
  for (const json& d : j.at("distributions")) {
    DiscreteDistribution dd;
    dd.support = d.at("support").get<Vec>();
    dd.probs = d.at("probs").get<Vec>();
    inst.dists.push_back(std::move(dd));
  }
  inst.family = family_from_json(j.at("family"));
  inst.objective = norm_from_json(j.at("norm"));
  inst.validate();
  return inst;
}

// --- load balancing instance ------------------------------------------------

inline json loadbal_to_json(const LoadBalInstance& inst) {
  json norms = json::array();
  for (const NormOracle& psi : inst.inner) norms.push_back(norm_to_json(psi));
  return json{{"schema", kSchemaVersion}, {"p", inst.p}, {"inner_norms", norms}};
}

inline LoadBalInstance loadbal_from_json(const json& j) {
  LoadBalInstance inst;
  inst.p = j.at("p").get<std::vector<Vec>>();
  for (const json& nj : j.at("inner_norms")) inst.inner.push_back(norm_from_json(nj));
  inst.validate();
  return inst;
}

// --- CSV ---------------------------------------------------------------

// step, opened, level, d, dhat, tau, p0..pm
inline std::string trace_csv(const OflTrace& trace) {
  std::size_t m = 1;
  for (const OflStep& s : trace.steps) m = std::max(m, s.p.size() - 1);
  std::ostringstream out;
  out << "step,opened,level,d,dhat,tau";
  for (std::size_t j = 0; j <= m; ++j) out << ",p" << j;
  out << "\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const OflStep& s = trace.steps[i];
    out << i << ",";
    if (s.opened) out << *s.opened;
    out << "," << s.level << "," << format_number(s.d) << "," << format_number(s.dhat)
        << ",";
    if (s.tau_capped)
      out << format_number(s.tau);
    else
      out << "inf";
    for (std::size_t j = 0; j <= m; ++j)
      out << "," << (j < s.p.size() ? format_number(s.p[j]) : "0");
    out << "\n";
  }
  return out.str();
}

inline std::string bound_report_csv_header() {
  return "instance,norm,runs,mean_cost,stderr,opt_cost,norm_dstar,sum_fstar,"
         "opt_facilities,rho,bound,mean_ratio,pass\n";
}

inline std::string bound_report_csv_row(const std::string& instance_name,
                                        const std::string& norm_name,
                                        const BoundReport& r) {
  std::ostringstream out;
  out << instance_name << "," << norm_name << "," << r.runs << ","
      << format_number(r.mean_cost) << "," << format_number(r.stderr_cost) << ","
      << format_number(r.opt_cost) << "," << format_number(r.norm_dstar) << ","
      << format_number(r.sum_fstar) << "," << r.opt_facilities << ","
      << format_number(r.rho_value) << "," << format_number(r.bound) << ","
      << format_number(r.mean_ratio) << "," << (r.pass ? "1" : "0") << "\n";
  return out.str();
}

}  // namespace subnorm
