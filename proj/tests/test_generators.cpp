#include <catch2/catch_amalgamated.hpp>

#include "subnorm/generators.hpp"
#include "subnorm/io.hpp"
#include "subnorm/ofl_offline.hpp"

using namespace subnorm;

TEST_CASE("star geometry") {
  OflInstance s = gen_star(3, 1.0, linf_norm(3));
  CHECK(s.metric.size() == 4);
  CHECK(s.metric.dist(1, 2) == 2.0);
  CHECK(s.metric.dist(1, 0) == 1.0);
  CHECK(s.requests == std::vector<int>{1, 2, 3});
  OflInstance p = gen_star(1, 1.0, linf_norm(1));
  CHECK(p.metric.dist(0, 1) == 1.0);
}

TEST_CASE("star offline optimum is the center") {
  OflInstance s = gen_star(5, 1.0, linf_norm(5));
  CHECK(offline_opt(s).cost == 2.0);
}

TEST_CASE("lower-bound tree for the sum norm at n = 256") {
  auto tree = gen_lower_bound_tree(lp_norm(1.0, 256), 8, 42);
  CHECK(tree.sigma == 256.0);
  CHECK(tree.k == 4);
  CHECK(tree.m == std::vector<int>{1, 4, 16, 64, 256});
  CHECK(tree.instance.num_requests() == 256);
  CHECK(tree.instance.uniform_f == 4.0);
  CHECK(tree.path.size() == 5);
  // edge lengths: depth j edge has length k^-j
  const MetricSpace& metric = tree.instance.metric;
  CHECK(metric.dist(tree.path[0], tree.path[1]) == 1.0);
  CHECK(metric.dist(tree.path[1], tree.path[2]) == 0.25);
  CHECK(metric.dist(tree.path[0], tree.path[4]) ==
        1.0 + 0.25 + 0.0625 + 0.015625);
  // demand multiplicities arrive in depth order
  int c0 = 0;
  for (int r : tree.instance.requests)
    if (r == tree.path[0]) ++c0;
  CHECK(c0 == 1);

  // offline cost at most 2k + 2 using the path nodes as candidates
  OfflineOpt opt = offline_opt(tree.instance, tree.path);
  CHECK(opt.cost <= 2.0 * tree.k + 2.0);
}

TEST_CASE("minimal tree at sigma = 4") {
  auto tree = gen_lower_bound_tree(lp_norm(1.0, 4), 8, 7);
  CHECK(tree.k == 2);
  CHECK(tree.m == std::vector<int>{1, 2, 4});
  CHECK(tree.instance.requests.size() == 4);
  // demands: v0 x1, v1 x1, v2 x2
  CHECK(tree.instance.requests[0] == tree.path[0]);
  CHECK(tree.instance.requests[1] == tree.path[1]);
  CHECK(tree.instance.requests[2] == tree.path[2]);
  CHECK(tree.instance.requests[3] == tree.path[2]);
}

TEST_CASE("tree generator rejects flat norms and mismatched dimensions") {
  CHECK_THROWS_AS(gen_lower_bound_tree(linf_norm(16), 8, 1), ValidationError);
  // sigma of l2 at n=256 is 16 -> k=2, demand count 16 != 256
  CHECK_THROWS_AS(gen_lower_bound_tree(lp_norm(2.0, 256), 8, 1), ValidationError);
  CHECK_NOTHROW(gen_lower_bound_tree(lp_norm(2.0, 16), 8, 1));
}

TEST_CASE("generators are deterministic in the seed") {
  auto a = gen_random_euclidean(10, 8, 2, 1.0, 42);
  auto b = gen_random_euclidean(10, 8, 2, 1.0, 42);
  CHECK(ofl_to_json(a).dump() == ofl_to_json(b).dump());
  auto c = gen_random_euclidean(10, 8, 2, 1.0, 43);
  CHECK(ofl_to_json(a).dump() != ofl_to_json(c).dump());

  auto p1 = gen_random_probing(4, 3, 42, topk_norm(2, 4));
  auto p2 = gen_random_probing(4, 3, 42, topk_norm(2, 4));
  CHECK(probing_to_json(p1).dump() == probing_to_json(p2).dump());

  auto t1 = gen_lower_bound_tree(lp_norm(1.0, 27), 4, 9);
  auto t2 = gen_lower_bound_tree(lp_norm(1.0, 27), 4, 9);
  CHECK(t1.path == t2.path);
  CHECK(ofl_to_json(t1.instance).dump() == ofl_to_json(t2.instance).dump());
}

TEST_CASE("random euclidean instances validate and requests are openable") {
  for (int seed = 0; seed < 5; ++seed) {
    OflInstance inst = gen_random_euclidean(12, 6, 3, 0.5, seed);
    CHECK_NOTHROW(inst.require_requests_openable());
    CHECK(inst.metric.kind() == MetricSpace::Kind::Euclidean);
  }
}

TEST_CASE("random probing families are downward closed and within support bounds") {
  for (int seed = 0; seed < 10; ++seed) {
    ProbingInstance inst = gen_random_probing(5, 2, 100 + seed, linf_norm(5));
    CHECK_NOTHROW(inst.family.validate());
    for (const auto& d : inst.dists) {
      CHECK(d.support.size() == 2);
      CHECK_NOTHROW(d.validate());
    }
  }
}

TEST_CASE("different tree seeds give different random paths eventually") {
  bool differ = false;
  auto base = gen_lower_bound_tree(lp_norm(1.0, 27), 8, 0);
  for (std::uint64_t seed = 1; seed < 6 && !differ; ++seed)
    differ = gen_lower_bound_tree(lp_norm(1.0, 27), 8, seed).path != base.path;
  CHECK(differ);
}
