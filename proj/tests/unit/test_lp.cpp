#include <doctest.h>

#include <random>
#include <sstream>

#include "dicap/lp.hpp"

using namespace dicap;

namespace {

LinearProgram toy_bounded(double ub) {
  LinearProgram lp;
  int x = lp.add_variable(1.0);
  int y = lp.add_variable(1.0);
  int r = lp.add_row(Relation::le, ub);
  lp.add_coeff(r, x, 1.0);
  lp.add_coeff(r, y, 1.0);
  return lp;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("one-variable maximum") {
    LinearProgram lp;
    int x = lp.add_variable(1.0);
    int r = lp.add_row(Relation::le, 1.0);
    lp.add_coeff(r, x, 1.0);
    LPSolution sol = solve(lp);
    REQUIRE(sol.status == LPStatus::optimal);
    CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.primal[0] == doctest::Approx(1.0));
    REQUIRE(sol.duals.size() == 1);
    CHECK(sol.duals[0] == doctest::Approx(1.0));
    REQUIRE(sol.rational_value.has_value());
    CHECK(*sol.rational_value == Rational(1));
  }

  TEST_CASE("capacity-sum toy") {
    LPSolution sol = solve(toy_bounded(15.0));
    REQUIRE(sol.status == LPStatus::optimal);
    CHECK(sol.value == doctest::Approx(15.0));
  }

  TEST_CASE("detects infeasibility through a free variable") {
    LinearProgram lp;
    int x = lp.add_variable(1.0, /*free=*/true);
    int r1 = lp.add_row(Relation::le, 1.0);
    lp.add_coeff(r1, x, 1.0);
    int r2 = lp.add_row(Relation::le, -2.0);  // encodes x >= 2
    lp.add_coeff(r2, x, -1.0);
    CHECK(solve(lp).status == LPStatus::infeasible);
  }

  TEST_CASE("detects unboundedness") {
    LinearProgram lp;
    int x = lp.add_variable(1.0);
    int y = lp.add_variable(0.0);
    int r = lp.add_row(Relation::le, 1.0);
    lp.add_coeff(r, y, 1.0);
    (void)x;
    CHECK(solve(lp).status == LPStatus::unbounded);
  }

  TEST_CASE("handles equality rows") {
    LinearProgram lp;
    int x = lp.add_variable(1.0);
    int y = lp.add_variable(0.0);
    int r = lp.add_row(Relation::eq, 1.0);
    lp.add_coeff(r, x, 1.0);
    lp.add_coeff(r, y, 1.0);
    LPSolution sol = solve(lp);
    REQUIRE(sol.status == LPStatus::optimal);
    CHECK(sol.value == doctest::Approx(1.0));

    LinearProgram fixed;
    int z = fixed.add_variable(3.0);
    int rr = fixed.add_row(Relation::eq, 2.0);
    fixed.add_coeff(rr, z, 1.0);
    LPSolution s2 = solve(fixed);
    REQUIRE(s2.status == LPStatus::optimal);
    CHECK(s2.primal[0] == doctest::Approx(2.0));
  }

  TEST_CASE("negative right-hand sides feed phase one") {
    // x >= 2 written as -x <= -2, maximize -x: optimum at x = 2.
    LinearProgram lp;
    int x = lp.add_variable(-1.0);
    int r = lp.add_row(Relation::le, -2.0);
    lp.add_coeff(r, x, -1.0);
    LPSolution sol = solve(lp);
    REQUIRE(sol.status == LPStatus::optimal);
    CHECK(sol.value == doctest::Approx(-2.0));
  }

  TEST_CASE("rationalizes solver output") {
    CHECK(*rationalize(18.666667) == Rational(56, 3));
    CHECK(*rationalize(23.5) == Rational(47, 2));
    CHECK(*rationalize(21.0) == Rational(21));
    CHECK(*rationalize(-0.5) == Rational(-1, 2));
    CHECK(*rationalize(0.2962962963) == Rational(8, 27));
    CHECK_FALSE(rationalize(0.2987).has_value());  // no small fraction within 1e-6
    CHECK_FALSE(rationalize(0.2987, 1).has_value());
    CHECK(*rationalize(0.298701298701, 100) == Rational(23, 77));
  }

  TEST_CASE("optimum ignores variable order") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
      int nv = 3 + static_cast<int>(rng() % 4);
      int nr = 2 + static_cast<int>(rng() % 4);
      std::vector<double> obj(static_cast<std::size_t>(nv));
      for (double& c : obj) c = static_cast<double>(rng() % 5);
      std::vector<std::vector<double>> rows(static_cast<std::size_t>(nr), std::vector<double>(static_cast<std::size_t>(nv)));
      std::vector<double> rhs(static_cast<std::size_t>(nr));
      for (int r = 0; r < nr; ++r) {
        for (double& a : rows[static_cast<std::size_t>(r)]) a = static_cast<double>(rng() % 4);
        rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(rng() % nv)] += 1.0;  // keep it bounded
        rhs[static_cast<std::size_t>(r)] = 1.0 + static_cast<double>(rng() % 10);
      }
      auto build = [&](bool reversed) {
        LinearProgram lp;
        std::vector<int> vars(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; ++v) {
          int slot = reversed ? nv - 1 - v : v;
          vars[static_cast<std::size_t>(slot)] = lp.add_variable(obj[static_cast<std::size_t>(slot)]);
        }
        for (int r = 0; r < nr; ++r) {
          int row = lp.add_row(Relation::le, rhs[static_cast<std::size_t>(r)]);
          for (int v = 0; v < nv; ++v) lp.add_coeff(row, vars[static_cast<std::size_t>(v)], rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(v)]);
        }
        return solve(lp);
      };
      LPSolution a = build(false), b = build(true);
      bool bounded = a.status == LPStatus::optimal;
      CHECK(bounded == (b.status == LPStatus::optimal));
      if (bounded) CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));
    }
  }

  TEST_CASE("optimum scales with the right-hand side") {
    LPSolution base = solve(toy_bounded(7.0));
    LPSolution doubled = solve(toy_bounded(14.0));
    CHECK(doubled.value == doctest::Approx(2.0 * base.value).epsilon(1e-9));
  }

  TEST_CASE("LP text dump") {
    LinearProgram lp;
    int x = lp.add_variable(2.0, false, "x");
    int r = lp.add_row(Relation::le, 3.0, "capacity");
    lp.add_coeff(r, x, 1.0);
    std::ostringstream out;
    dump_lp(lp, out);
    std::string text = out.str();
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("capacity:") != std::string::npos);
    CHECK(text.find("<= 3") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
  }

  TEST_CASE("solver tolerance can come from the environment") {
    SolverConfig def = SolverConfig{};
    CHECK(def.feasibility_tol == doctest::Approx(1e-7));
    CHECK(def.optimality_tol == doctest::Approx(1e-7));
  }

  TEST_CASE("optimal primals satisfy every constraint") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      int nv = 2 + static_cast<int>(rng() % 5);
      int nr = 1 + static_cast<int>(rng() % 5);
      LinearProgram lp;
      for (int v = 0; v < nv; ++v) lp.add_variable(static_cast<double>(rng() % 4));
      for (int r = 0; r < nr; ++r) {
        bool eq = rng() % 4 == 0;
        int row = lp.add_row(eq ? Relation::eq : Relation::le, static_cast<double>(rng() % 8));
        for (int v = 0; v < nv; ++v) lp.add_coeff(row, v, static_cast<double>(1 + rng() % 3));
      }
      LPSolution sol = solve(lp);
      if (sol.status != LPStatus::optimal) continue;
      for (int r = 0; r < lp.num_rows(); ++r) {
        double lhs = 0.0;
        for (auto [v, c] : lp.row_coeffs(r)) lhs += c * sol.primal[static_cast<std::size_t>(v)];
        if (lp.row_relation(r) == Relation::le) {
          CHECK(lhs <= lp.row_rhs(r) + 1e-7);
        } else {
          CHECK(lhs == doctest::Approx(lp.row_rhs(r)).epsilon(1e-7));
        }
      }
      if (sol.rational_value) CHECK(std::fabs(sol.rational_value->to_double() - sol.value) <= 1e-6);
    }
  }
}
