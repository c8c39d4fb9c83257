#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "subnorm/generators.hpp"
#include "subnorm/io.hpp"

using namespace subnorm;

namespace {

void roundtrip_norm(const NormOracle& norm, int n) {
  json j = norm_to_json(norm);
  NormOracle back = norm_from_json(j);
  CHECK(norm_to_json(back).dump() == j.dump());  // descriptor-level losslessness
  Rng rng(17);
  VectorSampler sampler;
  for (int t = 0; t < 200; ++t) {
    Vec x = sampler(rng, n);
    CHECK(back.value_raw(x) == norm.value_raw(x));  // bitwise equal evaluations
  }
}

}  // namespace

TEST_CASE("norm descriptors round-trip losslessly") {
  roundtrip_norm(lp_norm(1.5, 5), 5);
  roundtrip_norm(linf_norm(5), 5);
  roundtrip_norm(topk_norm(2, 5), 5);
  roundtrip_norm(ordered_norm({3.0, 1.0 / 3.0, 0.123456789012345, 0.0, 0.0}), 5);
  roundtrip_norm(symmetric_max_norm({{2.0, 1.0, 0.5}, {1.5, 1.5, 1.5}}), 3);
  roundtrip_norm(max_linear_norm({{1.0, 1.0, 0.0}, {0.0, 0.0, 2.5}}), 3);
  roundtrip_norm(lovasz_norm(SetFunction::from_table({0, 1, 1, 1.5})), 2);
  roundtrip_norm(matroid_rank_norm(Matroid::uniform(4, 2)), 4);
  roundtrip_norm(matroid_rank_norm(Matroid::partition(4, {{0, 2}, {1, 3}}, {1, 1})), 4);
  std::vector<PartialSumNorm::Part> parts;
  parts.emplace_back(std::vector<int>{0, 1}, lp_norm(2.0, 2));
  parts.emplace_back(std::vector<int>{2, 3}, topk_norm(1, 2));
  roundtrip_norm(partial_sum_norm(4, std::move(parts)), 4);
  roundtrip_norm(conical_norm({{0.25, lp_norm(1.0, 3)}, {1.75, linf_norm(3)}}), 3);
  roundtrip_norm(rescaled_norm({0.1, 2.0, 30.0}, lp_norm(3.0, 3)), 3);
}

TEST_CASE("re-dimensioned descriptors evaluate consistently on shared prefixes") {
  // shrinking the dimension of a symmetric closed form must agree with
  // zero-padded evaluation of the original
  std::vector<json> descs{
      norm_to_json(lp_norm(2.0, 8)), norm_to_json(topk_norm(3, 8)),
      norm_to_json(ordered_norm({4, 3, 2, 1, 1, 1, 0.5, 0.25})),
      norm_to_json(symmetric_max_norm({{2, 1, 1, 1, 0.5, 0.5, 0, 0}}))};
  Rng rng(77);
  VectorSampler sampler;
  for (const json& d : descs) {
    NormOracle full = norm_from_json(d);
    NormOracle small = norm_from_json(redimension_descriptor(d, 5));
    REQUIRE(small.dim() == 5);
    for (int t = 0; t < 300; ++t) {
      Vec x = sampler(rng, 5);
      Vec padded = x;
      padded.resize(8, 0.0);
      REQUIRE_THAT(small.value_raw(x),
                   Catch::Matchers::WithinAbs(full.value_raw(padded), 1e-12));
    }
  }
  CHECK_THROWS_AS(redimension_descriptor(norm_to_json(max_linear_norm({{1.0, 1.0}})), 3),
                  ValidationError);
}

TEST_CASE("value oracles refuse to serialize") {
  NormOracle vo = value_oracle_norm(2, [](const Vec& x) { return x[0] + x[1]; });
  CHECK_THROWS_AS(norm_to_json(vo), ValidationError);
}

TEST_CASE("unknown kinds and malformed descriptors are rejected") {
  CHECK_THROWS_AS(norm_from_json(json{{"kind", "nope"}}), ValidationError);
  CHECK_THROWS_AS(norm_from_json(json{{"kind", "lp"}, {"p", "infinity"}, {"n", 3}}),
                  ValidationError);
  CHECK_THROWS_AS(norm_from_json(json{{"kind", "lovasz"}, {"n", 3}, {"values", {0, 1}}}),
                  ValidationError);
}

TEST_CASE("ofl instances round-trip through json for all metric kinds") {
  OflInstance star = gen_star(4, 1.0, linf_norm(4));
  json j = ofl_to_json(star);
  CHECK(j.at("schema") == 1);
  OflInstance back = ofl_from_json(j);
  CHECK(ofl_to_json(back).dump() == j.dump());

  OflInstance euclid = gen_random_euclidean(6, 4, 2, 0.5, 3);
  euclid.uniform_cost = false;
  euclid.per_point_cost = {1.0, 2.0, 4.0, 1.0};
  euclid.validate();
  json je = ofl_to_json(euclid);
  CHECK(ofl_to_json(ofl_from_json(je)).dump() == je.dump());

  auto tree = gen_lower_bound_tree(lp_norm(1.0, 4), 3, 5);
  json jt = ofl_to_json(tree.instance);
  OflInstance tback = ofl_from_json(jt);
  CHECK(tback.metric.kind() == MetricSpace::Kind::Tree);
  CHECK(ofl_to_json(tback).dump() == jt.dump());
}

TEST_CASE("probing and loadbal instances round-trip") {
  ProbingInstance pi = gen_random_probing(3, 3, 11, topk_norm(2, 3));
  json j = probing_to_json(pi);
  CHECK(probing_to_json(probing_from_json(j)).dump() == j.dump());

  LoadBalInstance lb;
  lb.p = {{1.0, 0.25, 3.0}, {2.0, 1.0, 0.125}};
  lb.inner = {topk_norm(2, 3), lp_norm(2.0, 3)};
  json jl = loadbal_to_json(lb);
  CHECK(loadbal_to_json(loadbal_from_json(jl)).dump() == jl.dump());
}

TEST_CASE("instance json validates on load") {
  OflInstance star = gen_star(3, 1.0, linf_norm(3));
  json j = ofl_to_json(star);
  j["requests"] = {0, 1, 9};
  CHECK_THROWS_AS(ofl_from_json(j), ValidationError);
  json j2 = ofl_to_json(star);
  j2["costs"] = json{{"uniform", -1.0}};
  CHECK_THROWS_AS(ofl_from_json(j2), ValidationError);
}

TEST_CASE("trace csv has one row per step with level probabilities") {
  OflInstance star = gen_star(3, 1.0, linf_norm(3));
  OflTrace t = run_uniform(star, 1);
  std::string csv = trace_csv(t);
  CHECK(csv.rfind("step,opened,level,d,dhat,tau,p0,p1", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 steps
}

TEST_CASE("csv numbers keep 15 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1234567.25) == "1234567.25");
}

TEST_CASE("atomic writes land complete or not at all") {
  std::string path = (std::filesystem::temp_directory_path() / "subnorm_io_test.json").string();
  write_file_atomic(path, "{\"a\": 1}\n");
  json j = load_json_file(path);
  CHECK(j.at("a") == 1);
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_json_file(path), ValidationError);
}
