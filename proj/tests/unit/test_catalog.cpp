#include <doctest.h>

#include <map>

#include "dicap/catalog.hpp"

using namespace dicap;

TEST_SUITE("catalog") {
  TEST_CASE("loads all 218 entries") {
    const auto& entries = load_catalog();
    REQUIRE(entries.size() == 218);
    for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].problem_no == static_cast<int>(i) + 1);
  }

  TEST_CASE("known entries") {
    CHECK(catalog_entry(140).problem.render() == "(1|-),(2|1,4),(3|1,2),(4|1,2,3)");
    CHECK(catalog_entry(140).table_sum_rate == Rational(21));
    CHECK(catalog_entry(218).problem.render() == "(1|2,3,4),(2|1,3,4),(3|1,2,4),(4|1,2,3)");
    CHECK(catalog_entry(218).table_sum_rate == Rational(32));
    CHECK(catalog_entry(81).table_class == TableClass::open_star);
    CHECK(catalog_entry(81).table_sum_rate == Rational(47, 2));
    CHECK(catalog_entry(47).table_sum_rate == Rational(56, 3));
    CHECK(catalog_entry(46).table_sum_rate == Rational(70, 3));
    CHECK(catalog_entry(155).table_sum_rate == Rational(24));
    CHECK_THROWS_AS(catalog_entry(0), std::out_of_range);
    CHECK_THROWS_AS(catalog_entry(219), std::out_of_range);
  }

  TEST_CASE("class histogram") {
    std::map<TableClass, int> hist;
    for (const auto& e : load_catalog()) ++hist[e.table_class];
    CHECK(hist[TableClass::normal] == 145);
    CHECK(hist[TableClass::bold] == 53);
    CHECK(hist[TableClass::underlined] == 4);
    CHECK(hist[TableClass::double_underlined] == 6);
    CHECK(hist[TableClass::overlined] == 5);
    CHECK(hist[TableClass::open_star] == 5);
  }

  TEST_CASE("rejects corrupted data") {
    const std::string good_cat = "Problem No 1: (1|-),(2|-)\nProblem No 2: (1|2),(2|-)\n";
    const std::string good_rates = "1\t3\t1\tnormal\n2\t2\t1\tbold\n";
    CHECK(load_catalog_from(good_cat, good_rates).size() == 2);

    CHECK_THROWS_AS(load_catalog_from("", good_rates), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from("Problem No 2: (1|-),(2|-)\n", "2\t3\t1\tnormal\n"), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from("garbage\n", good_rates), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from("Problem No 1: (1|1),(2|-)\n", "1\t1\t1\tnormal\n"), CatalogCorrupt);
    // Sidecar must cover every entry with positive rates and known classes.
    CHECK_THROWS_AS(load_catalog_from(good_cat, "1\t3\t1\tnormal\n"), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from(good_cat, "1\t3\t1\tnormal\n2\t0\t1\tbold\n"), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from(good_cat, "1\t3\t1\tshiny\n2\t2\t1\tbold\n"), CatalogCorrupt);
    CHECK_THROWS_AS(load_catalog_from(good_cat, "1\t3\t1\tnormal\n1\t2\t1\tbold\n"), CatalogCorrupt);
    // Isomorphic entries are rejected.
    CHECK_THROWS_AS(load_catalog_from("Problem No 1: (1|2),(2|-)\nProblem No 2: (1|-),(2|1)\n",
                                      "1\t3\t1\tnormal\n2\t2\t1\tbold\n"),
                    CatalogCorrupt);
  }
}
