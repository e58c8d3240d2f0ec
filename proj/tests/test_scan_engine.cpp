#include <doctest.h>

#include <random>
#include <string>

#include "pdilqr/scan_engine.hpp"

using namespace pdilqr;

namespace {
const auto plus = [](long a, long b) { return a + b; };
}

TEST_CASE("prefix sums") {
  for (ScanMode mode : {ScanMode::sequential, ScanMode::tree}) {
    ScanPlan plan;
    plan.mode = mode;
    CHECK(inclusive_scan(std::vector<long>{1, 2, 3, 4}, plus, plan) == std::vector<long>{1, 3, 6, 10});
  }
}

TEST_CASE("single element") {
  for (ScanMode mode : {ScanMode::sequential, ScanMode::tree})
    for (ScanDirection dir : {ScanDirection::forward, ScanDirection::reverse}) {
      ScanPlan plan;
      plan.mode = mode;
      plan.direction = dir;
      CHECK(inclusive_scan(std::vector<long>{7}, plus, plan) == std::vector<long>{7});
    }
}

TEST_CASE("empty input throws") {
  ScanPlan plan;
  CHECK_THROWS_AS(inclusive_scan(std::vector<long>{}, plus, plan), std::invalid_argument);
}

TEST_CASE("depth for L = 1000") {
  ScanPlan plan;
  plan.mode = ScanMode::tree;
  std::vector<long> v(1000, 1);
  inclusive_scan(v, plus, plan, std::optional<long>(0));
  CHECK(plan.depth == 20);
}

TEST_CASE("depth bound and mode equivalence up to 1024") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> U(-1000, 1000);
  for (long L = 1; L <= 1024; ++L) {
    std::vector<long> v(L);
    for (auto& e : v) e = U(rng);
    for (bool with_identity : {true, false}) {
      ScanPlan tree;
      tree.mode = ScanMode::tree;
      ScanPlan seq;
      seq.mode = ScanMode::sequential;
      const auto a = with_identity ? inclusive_scan(v, plus, tree, std::optional<long>(0)) : inclusive_scan(v, plus, tree);
      const auto b = inclusive_scan(v, plus, seq);
      REQUIRE(a == b);
      REQUIRE(tree.depth <= 2 * ceil_log2(L));
    }
  }
}

TEST_CASE("reverse equals forward of reversed with swapped operator") {
  // String concatenation is associative but not commutative.
  const auto cat = [](const std::string& a, const std::string& b) { return a + b; };
  std::vector<std::string> v;
  for (char c = 'a'; c <= 'm'; ++c) v.emplace_back(1, c);
  for (ScanMode mode : {ScanMode::sequential, ScanMode::tree}) {
    ScanPlan rev;
    rev.mode = mode;
    rev.direction = ScanDirection::reverse;
    const auto r = inclusive_scan(v, cat, rev);
    std::vector<std::string> reversed(v.rbegin(), v.rend());
    ScanPlan fwd;
    fwd.mode = mode;
    auto f = inclusive_scan(reversed, [&](const std::string& a, const std::string& b) { return cat(b, a); }, fwd);
    std::reverse(f.begin(), f.end());
    CHECK(r == f);
    CHECK(r.front() == "abcdefghijklm");
    CHECK(r.back() == "m");
  }
}

TEST_CASE("worker count does not change the result") {
  const auto cat = [](const std::string& a, const std::string& b) { return a + b; };
  std::vector<std::string> v;
  for (int i = 0; i < 300; ++i) v.push_back(std::to_string(i % 10));
  ScanPlan one;
  one.workers = 1;
  ScanPlan four;
  four.workers = 4;
  CHECK(inclusive_scan(v, cat, one) == inclusive_scan(v, cat, four));
}
