#include <doctest.h>

#include "dicap/catalog.hpp"
#include "dicap/closure.hpp"
#include "test_util.hpp"

using namespace dicap;

TEST_SUITE("closure") {
  TEST_CASE("problem 140 decodable sets") {
    const Problem& p = catalog_entry(140).problem;
    CHECK(closure(p, 0).known == 0b0001);
    CHECK(compute_U(p) == 0b0001);
    auto cands = compute_V_candidates(p, 0b0001);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0] == 0b0010);  // {2}
    CHECK(cands[1] == 0b1000);  // {4}
    CHECK(check_condition1(p, 0b0010));
    CHECK(check_condition1(p, 0b1000));
  }

  TEST_CASE("problem 218 has nothing freely decodable") {
    const Problem& p = catalog_entry(218).problem;
    CHECK(compute_U(p) == 0);
    auto cands = compute_V_candidates(p, 0);
    // Every minimal unlocking set is a triple; none is decodable from the
    // rest alone.
    REQUIRE(cands.size() == 4);
    for (Mask v : cands) {
      CHECK(popcount(v) == 3);
      CHECK_FALSE(check_condition1(p, v));
    }
    CHECK_FALSE(check_condition1(p, 0b0111));
  }

  TEST_CASE("degenerate seeds") {
    const Problem& p = catalog_entry(7).problem;
    CHECK(closure(p, p.all_messages()).known == p.all_messages());
    CHECK(check_condition1(p, 0));  // empty set is vacuously decodable

    Problem empty_sides = Problem::parse("(1|-),(2|-),(3|-)");
    CHECK(compute_U(empty_sides) == empty_sides.all_messages());
    auto cands = compute_V_candidates(empty_sides, empty_sides.all_messages());
    REQUIRE(cands.size() == 1);
    CHECK(cands[0] == 0);
  }

  TEST_CASE("closure order is deterministic and witnesses the fixed point") {
    const Problem& p = catalog_entry(100).problem;  // (1|-),(2|1),(3|1,2),(4|1,2,3)
    ClosureResult r = closure(p, 0);
    CHECK(r.known == p.all_messages());
    REQUIRE(r.order.size() == 4);
    CHECK(r.order == std::vector<int>{0, 1, 2, 3});
    Mask seen = 0;
    for (int i : r.order) {
      CHECK(subset_of(p.side_info(i), seen));
      seen |= Mask{1} << i;
    }
  }

  TEST_CASE("monotone and idempotent") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      int n = 1 + static_cast<int>(rng() % 5);
      Problem p = testutil::random_problem(rng, n);
      Mask seed = static_cast<Mask>(rng()) & p.all_messages();
      Mask bigger = seed | (static_cast<Mask>(rng()) & p.all_messages());
      Mask c = closure(p, seed).known;
      CHECK(subset_of(c, closure(p, bigger).known));
      CHECK(closure(p, c).known == c);
    }
  }

  TEST_CASE("matches the reachability oracle on the whole catalog") {
    for (const auto& entry : load_catalog()) {
      for (Mask seed = 0; seed <= entry.problem.all_messages(); ++seed) {
        CHECK(closure(entry.problem, seed).known == testutil::closure_oracle(entry.problem, seed));
      }
    }
  }

  TEST_CASE("invariant under relabeling") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const Problem& p = load_catalog()[rng() % 218].problem;
      auto perm = testutil::random_permutation(rng, p.n());
      Problem q = p.relabel(perm);
      Mask u = compute_U(p);
      Mask u_mapped = 0;
      for_each_bit(u, [&](int i) { u_mapped |= Mask{1} << perm[static_cast<std::size_t>(i)]; });
      CHECK(compute_U(q) == u_mapped);
    }
  }
}
