#pragma once

// JSON descriptors for every closed-form norm family. Weight vectors and
// parameters round-trip losslessly (shortest-round-trip double printing);
// value-oracle norms are evaluation-only and refuse to serialize.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "subnorm/norms.hpp"

namespace subnorm {

using json = nlohmann::json;

inline json matroid_to_json(const Matroid& m) {
  switch (m.desc) {
    case Matroid::Desc::Uniform:
      return json{{"type", "uniform"}, {"n", m.n}, {"k", m.uniform_k}};
    case Matroid::Desc::Partition:
      return json{{"type", "partition"}, {"n", m.n}, {"blocks", m.blocks}, {"caps", m.caps}};
    default:
      throw ValidationError("matroid: opaque independence oracle is not serializable");
  }
}

inline Matroid matroid_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "uniform")
    return Matroid::uniform(j.at("n").get<int>(), j.at("k").get<int>());
  if (type == "partition")
    return Matroid::partition(j.at("n").get<int>(),
                              j.at("blocks").get<std::vector<std::vector<int>>>(),
                              j.at("caps").get<std::vector<int>>());
  throw ValidationError("matroid: unknown type '" + type + "'");
}

inline json norm_to_json(const NormOracle& norm) {
  const NormBase& b = norm.base();
  if (auto* p = dynamic_cast<const LpNorm*>(&b)) {
    json j{{"kind", "lp"}, {"n", p->dim()}};
    if (std::isinf(p->p()))
      j["p"] = "inf";
    else
      j["p"] = p->p();
    return j;
  }
  if (auto* p = dynamic_cast<const TopKNorm*>(&b))
    return json{{"kind", "topk"}, {"n", p->dim()}, {"k", p->k()}};
  if (auto* p = dynamic_cast<const OrderedNorm*>(&b))
    return json{{"kind", "ordered"}, {"weights", p->weights()}};
  if (auto* p = dynamic_cast<const SymmetricMaxNorm*>(&b))
    return json{{"kind", "symmetric_max"}, {"vectors", p->vectors()}};
  if (auto* p = dynamic_cast<const MaxLinearNorm*>(&b))
    return json{{"kind", "max_linear"}, {"vectors", p->vectors()}};
  if (auto* p = dynamic_cast<const LovaszNorm*>(&b)) {
    if (p->set_function().table.empty())
      throw ValidationError("lovasz norm: opaque set function is not serializable");
    return json{{"kind", "lovasz"}, {"n", p->dim()}, {"values", p->set_function().table}};
  }
  if (auto* p = dynamic_cast<const MatroidRankNorm*>(&b))
    return json{{"kind", "matroid_rank"}, {"matroid", matroid_to_json(p->matroid())}};
  if (auto* p = dynamic_cast<const PartialSumNorm*>(&b)) {
    json parts = json::array();
    for (const auto& [ids, inner] : p->parts())
      parts.push_back(json{{"indices", ids}, {"norm", norm_to_json(inner)}});
    return json{{"kind", "partial_sum"}, {"n", p->dim()}, {"parts", parts}};
  }
  if (auto* p = dynamic_cast<const ConicalNorm*>(&b)) {
    json terms = json::array();
    for (const auto& [c, inner] : p->terms())
      terms.push_back(json{{"coeff", c}, {"norm", norm_to_json(inner)}});
    return json{{"kind", "conical"}, {"terms", terms}};
  }
  if (auto* p = dynamic_cast<const RescaledNorm*>(&b))
    return json{{"kind", "rescaled"}, {"scale", p->scale()}, {"norm", norm_to_json(p->inner())}};
  throw ValidationError(std::string("norm kind '") + b.kind() + "' is not serializable");
}

inline NormOracle norm_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    double p = j.at("p").is_string() ? std::numeric_limits<double>::infinity()
                                     : j.at("p").get<double>();
    if (j.at("p").is_string() && j.at("p").get<std::string>() != "inf")
      throw ValidationError("lp norm: p must be a number or \"inf\"");
    return lp_norm(p, j.at("n").get<int>());
  }
  if (kind == "topk") return topk_norm(j.at("k").get<int>(), j.at("n").get<int>());
  if (kind == "ordered") return ordered_norm(j.at("weights").get<Vec>());
  if (kind == "symmetric_max")
    return symmetric_max_norm(j.at("vectors").get<std::vector<Vec>>());
  if (kind == "max_linear")
    return max_linear_norm(j.at("vectors").get<std::vector<Vec>>());
  if (kind == "lovasz") {
    auto values = j.at("values").get<std::vector<double>>();
    SetFunction f = SetFunction::from_table(std::move(values));
    if (j.contains("n") && j.at("n").get<int>() != f.n)
      throw ValidationError("lovasz norm: n does not match table size");
    return lovasz_norm(std::move(f));
  }
  if (kind == "matroid_rank") return matroid_rank_norm(matroid_from_json(j.at("matroid")));
  if (kind == "partial_sum") {
    std::vector<PartialSumNorm::Part> parts;
    for (const json& part : j.at("parts"))
      parts.emplace_back(part.at("indices").get<std::vector<int>>(),
                         norm_from_json(part.at("norm")));
    return partial_sum_norm(j.at("n").get<int>(), std::move(parts));
  }
  if (kind == "conical") {
    std::vector<ConicalNorm::Term> terms;
    for (const json& term : j.at("terms"))
      terms.emplace_back(term.at("coeff").get<double>(), norm_from_json(term.at("norm")));
    return conical_norm(std::move(terms));
  }
  if (kind == "rescaled")
    return rescaled_norm(j.at("scale").get<Vec>(), norm_from_json(j.at("norm")));
  throw ValidationError("unknown norm kind '" + kind + "'");
}

// Rebuild a symmetric closed-form descriptor at a different dimension
// (truncating or extending weight patterns). Used where a construction fixes
// the demand count after the norm family is chosen.
inline json redimension_descriptor(const json& j, int new_n) {
  std::string kind = j.at("kind").get<std::string>();
  json out = j;
  if (kind == "lp") {
    out["n"] = new_n;
    return out;
  }
  if (kind == "topk") {
    out["n"] = new_n;
    out["k"] = std::min(j.at("k").get<int>(), new_n);
    return out;
  }
  if (kind == "ordered") {
    Vec w = j.at("weights").get<Vec>();
    Vec w2(static_cast<std::size_t>(new_n), 0.0);
    for (int i = 0; i < new_n; ++i)
      w2[static_cast<std::size_t>(i)] = i < static_cast<int>(w.size()) ? w[static_cast<std::size_t>(i)] : 0.0;
    out["weights"] = w2;
    return out;
  }
  if (kind == "symmetric_max") {
    std::vector<Vec> vecs = j.at("vectors").get<std::vector<Vec>>();
    for (Vec& a : vecs) {
      Vec a2(static_cast<std::size_t>(new_n), 0.0);
      for (int i = 0; i < new_n && i < static_cast<int>(a.size()); ++i)
        a2[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
      a = std::move(a2);
    }
    out["vectors"] = vecs;
    return out;
  }
  throw ValidationError("cannot re-dimension norm kind '" + kind + "'");
}

}  // namespace subnorm
