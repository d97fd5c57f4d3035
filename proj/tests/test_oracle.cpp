#include <doctest.h>

#include "rb/oracle.hpp"
#include "support.hpp"

using namespace rb;

namespace {

// Monotone maps from the 2x2 square {a,1}^2 into a 3-chain, counted directly.
int monotone_square_to_chain3() {
  int count = 0;
  for (int aa = 0; aa < 3; ++aa)
    for (int a1 = 0; a1 < 3; ++a1)
      for (int x1a = 0; x1a < 3; ++x1a)
        for (int x11 = 0; x11 < 3; ++x11)
          count += aa <= a1 && aa <= x1a && a1 <= x11 && x1a <= x11;
  return count;
}

}  // namespace

TEST_CASE("lattice counts are frozen") {
  const std::uint64_t up_to_iso[] = {0, 1, 1, 1, 2, 5, 15};
  const std::uint64_t labeled[] = {0, 1, 2, 6, 36, 380};
  for (int n = 1; n <= 5; ++n) {
    CHECK(oracle::enumerate_lattices(n, true).lattices.size() == up_to_iso[n]);
    CHECK(oracle::enumerate_lattices(n, false).lattices.size() == labeled[n]);
  }
  CHECK(oracle::enumerate_lattices(6, true).lattices.size() == up_to_iso[6]);
  CHECK_THROWS_AS(oracle::enumerate_lattices(7, true), oracle::BoundExceeded);
}

TEST_CASE("catalogue entries are lattices, pairwise non-isomorphic") {
  for (int n = 1; n <= 5; ++n) {
    const auto cat = oracle::enumerate_lattices(n, true);
    for (std::size_t i = 0; i < cat.lattices.size(); ++i) {
      const auto& l = cat.lattices[i];
      CHECK(naive::is_lattice(FiniteBinar(n, l.meet, l.join, Table(n), Table(n), Table(n))));
      for (std::size_t j = 0; j < i; ++j) {
        const Table a[] = {l.meet, l.join};
        const Table b[] = {cat.lattices[j].meet, cat.lattices[j].join};
        CHECK_FALSE(find_isomorphism(a, b));
      }
    }
  }
}

TEST_CASE("the five-element lattices include M3 and N5") {
  const auto cat = oracle::enumerate_lattices(5, true);
  const Table m3[] = {models::m3_meet(), models::m3_join()};
  bool has_m3 = false, has_non_modular = false;
  for (const auto& l : cat.lattices) {
    const Table t[] = {l.meet, l.join};
    has_m3 = has_m3 || find_isomorphism(t, m3).has_value();
    const FiniteBinar b(5, l.meet, l.join, Table(5), Table(5), Table(5));
    // modular law x <= z => x v (y ^ z) = (x v y) ^ z
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        for (int z = 0; z < 5; ++z)
          if (naive::leq(b, x, z) && l.join.at(x, l.meet.at(y, z)) != l.meet.at(l.join.at(x, y), z))
            has_non_modular = true;
  }
  CHECK(has_m3);
  CHECK(has_non_modular);
}

TEST_CASE("residuated binar enumeration") {
  std::uint64_t one = 0;
  oracle::for_each_residuated_binar(1, [&](const FiniteBinar&) { return ++one, true; });
  CHECK(one == 1);

  SUBCASE("n=2: includes mult=meet, excludes mult=join") {
    bool has_meet = false, has_join = false;
    std::uint64_t count = 0;
    oracle::for_each_residuated_binar(2, [&](const FiniteBinar& b) {
      ++count;
      CHECK(check_residuation(b).pass());
      CHECK(naive::is_residuated(b));
      has_meet = has_meet || b.mult() == b.meet();
      has_join = has_join || b.mult() == b.join();
      return true;
    });
    CHECK(has_meet);
    CHECK_FALSE(has_join);
    // two labelings of the chain, bottom absorbing, 1*1 free
    CHECK(count == 4);
  }
  SUBCASE("n=3 matches a direct count") {
    std::uint64_t count = 0;
    oracle::for_each_residuated_binar(3, [&](const FiniteBinar& b) {
      ++count;
      CHECK(naive::is_residuated(b));
      return true;
    });
    // six labelings of the 3-chain times monotone mults with 0 absorbing
    CHECK(count == 6u * monotone_square_to_chain3());
    CHECK(count == 120);
  }
  CHECK_THROWS_AS(oracle::for_each_residuated_binar(4, [](const FiniteBinar&) { return true; }),
                  oracle::BoundExceeded);
}

TEST_CASE("sampling at n=4 yields verified algebras") {
  std::mt19937_64 rng(1);
  const auto sample = oracle::sample_residuated_binars(4, 50, rng);
  CHECK(sample.size() == 50);
  for (const auto& b : sample) CHECK(naive::is_residuated(b));
}

TEST_CASE("oracle_search") {
  CHECK_FALSE(oracle::oracle_search(make_task(1, {"D2", "D3", "D4", "D5", "D6", "LD"}, std::string("D1"), false)));
  const auto m2 = oracle::oracle_search(make_task(2, {}, std::nullopt, false));
  REQUIRE(m2);
  CHECK(naive::is_residuated(*m2));
  const auto m3 = oracle::oracle_search(make_task(3, {"LD"}, std::nullopt, false));
  REQUIRE(m3);
  CHECK(naive::is_countermodel(*m3, {builtin_identity("LD")}, std::nullopt));
  CHECK_THROWS_AS(oracle::oracle_search(make_task(4, {}, std::nullopt, false)), oracle::BoundExceeded);
}

TEST_CASE("count_models") {
  CHECK(oracle::count_models(make_task(1, {}, std::nullopt, false)) == 1);
  CHECK(oracle::count_models(make_task(2, {}, std::nullopt, false)) == 4);
  CHECK(oracle::count_models(make_task(3, {}, std::string("LD"), false)) == 0);
  CHECK(oracle::count_models(make_task(3, {}, std::nullopt, false)) == 120);
}
