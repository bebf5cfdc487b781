#include <random>

#include "cert/chains.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace cert;
using testutil::q;

namespace {

ChainDescriptor ch(const char* s) { return ChainDescriptor::parse(s); }

MVector all(const ChainDescriptor& c, const QRat& v) { return MVector(static_cast<std::size_t>(c.length()), v); }

std::string path_text(const std::vector<int>& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "." : "") + std::to_string(p[k]);
  return s + ")";
}

// Every single-group descriptor of depth <= 4 with indices in [2, 5] (first index in [1, 5]).
std::vector<std::string> small_descriptors() {
  std::vector<std::string> out;
  for (int i = 1; i <= 5; ++i) out.push_back(path_text({i}));
  for (int i = 2; i <= 5; ++i)
    for (int j = 2; j <= 5; ++j) {
      out.push_back(path_text({i, j}));
      for (int k = 2; k <= 5; ++k) {
        out.push_back(path_text({i, j, k}));
        for (int n = 2; n <= 5; ++n) out.push_back(path_text({i, j, k, n}));
      }
    }
  return out;
}

}  // namespace

TEST_CASE("ramification values") {
  CHECK(ramification(ch("(3)")) == 3);
  CHECK(ramification(ch("(3.2)")) == 6);
  CHECK(ramification(ch("(3.2.2)")) == 10);
  CHECK(ramification(ch("(2.3.2.2)")) == 18);
  CHECK(ramification(ch("(1)")) == 1);
  // Free points after a restart add one each.
  CHECK(ramification(ch("(2)[3]")) == 4);
}

TEST_CASE("mu values") {
  auto c32 = ch("(3.2)");
  CHECK(mu(c32, all(c32, 1)) == 6);
  CHECK(mu(ch("(1)"), {3}) == 3);
  auto c222 = ch("(2.2.2)");
  CHECK(mu(c222, all(c222, q("1/2"))) == q("7/2"));
  CHECK(mu_coefficients(c222).back() == std::vector<long>{3, 2, 1, 1});
  auto st = chain_stats(c32, {q("1/2"), q("1/3"), q("1/4"), q("1/5")});
  for (const auto& s : st) CHECK(s.delta == s.mu - s.r);
}

TEST_CASE("recursions match the expanded formulas") {
  int compared = 0;
  for (const auto& s : small_descriptors()) {
    auto c = ch(s.c_str());
    CAPTURE(s);
    REQUIRE(ramification_expanded(c).has_value());
    CHECK(*ramification_expanded(c) == ramification(c));
    CHECK(*mu_coefficients_expanded(c) == mu_coefficients(c).back());
    ++compared;
  }
  CHECK(compared == 5 + 16 + 64 + 256);
  CHECK_FALSE(ramification_expanded(ch("(2)[2]")).has_value());
  CHECK_FALSE(mu_coefficients_expanded(ch("(2.2.2.2.2)")).has_value());
}

TEST_CASE("mu coefficients are the weighted-sum coefficients of the cohomology lemmas") {
  for (const char* s : {"(4)", "(2.3)", "(3.3)", "(2.2.4)", "(2.3.3)", "(2.2.2.3)", "(2.3.2.2)"}) {
    auto c = ch(s);
    CAPTURE(s);
    const auto coeff = mu_coefficients(c).back();
    for (int t = 0; t < c.length(); ++t) {
      std::vector<int> e(static_cast<std::size_t>(c.length()), 0);
      e[static_cast<std::size_t>(t)] = 1;
      CHECK(weighted_w(c, {1, e}).w == coeff[static_cast<std::size_t>(t)]);
    }
  }
}

TEST_CASE("admissibility") {
  CHECK(admissible(ch("(3)"), {3, 2, 1}));
  CHECK_FALSE(admissible(ch("(3)"), {1, 2, 1}));
  CHECK(admissible(ch("(3.2)"), {2, q("3/2"), 1, q("1/4")}));
  CHECK_FALSE(admissible(ch("(3.2)"), {2, q("3/2"), 1, q("3/4")}));
  CHECK_FALSE(admissible(ch("(2)"), {q("7/2"), 0}));
  CHECK_FALSE(admissible(ch("(2)"), {1, -1}));
  CHECK_FALSE(admissible(ch("(2)"), {1}));
  CHECK(admissible(ch("(2)"), {q("5/2"), 1}));
  CHECK_FALSE(admissible(ch("(2)"), {q("5/2"), 1}, true));
  // Restart: the free point is bounded by the curve before it.
  CHECK(admissible(ch("(2)[2]"), {1, 1, 1}));
  CHECK_FALSE(admissible(ch("(2)[2]"), {1, q("1/2"), 1}));

  std::mt19937_64 g(3);
  for (const char* s : {"(5)", "(3.4)", "(2.3.2)", "(3.2.2.2)", "(2.2)[2.3]", "[3.2.2]"})
    for (int t = 0; t < 50; ++t) CHECK(admissible(ch(s), random_admissible(ch(s), g)));
}

TEST_CASE("delta caps") {
  CHECK(delta_cap_chain(ch("(4)"), {q("1/2"), q("1/2"), q("1/2"), q("1/2")}).values.empty());
  auto c = ch("(2.3)");
  MVector m{q("3/2"), q("1/2"), q("1/2"), q("1/2")};
  auto d = delta_cap_chain(c, m);
  REQUIRE(d.values.size() == 1);
  CHECK(d.labels[0] == "(2.1)");
  CHECK(d.values[0] == chain_stats(c, m)[1].delta + m[0]);

  auto deep = delta_cap_chain(ch("(2.2.2)[2.2]"), {q("3/2"), q("1/2"), q("1/4"), q("1/4"), q("1/8"), q("1/8")});
  CHECK(deep.labels == std::vector<std::string>{"(2.1)", "(2.2.1)", "[2.1]"});

  auto bad = delta_cap_chain(ch("(2.2)"), {q("5/2"), 1, 1});
  REQUIRE(bad.bad_place.has_value());
  CHECK(*bad.bad_place == "(1)");
  CHECK(bad.values.empty());
  CHECK_THROWS_AS(delta_cap_chain(ch("(3)"), {1, 2, 1}), ChainError);
}

TEST_CASE("delta caps never increase, seeded") {
  std::mt19937_64 g(20);
  const char* chains[] = {"(2.2)", "(3.3)", "(2.3.2)", "(3.2.3)", "(2.2.2.2)", "(3.2.2.3)", "(2.2)[2.2]", "(2.3)[3.2]"};
  int sampled = 0, reached_final = 0;
  for (int tries = 0; sampled < 500 && tries < 200000; ++tries) {
    auto c = ch(chains[g() % std::size(chains)]);
    auto m = random_admissible(c, g);
    auto d = delta_cap_chain(c, m);
    if (d.bad_place) continue;
    ++sampled;
    CHECK(d.nonincreasing());
    if (chain_stats(c, m).back().delta >= 1) {
      ++reached_final;
      CHECK(d.values.back() >= 1);
    }
  }
  CHECK(sampled == 500);
  CHECK(reached_final > 0);
}

TEST_CASE("delta within a segment is not monotone") {
  // Defining the cap at every step of a satellite segment can increase.
  auto c = ch("(2.3)");
  MVector m{q("9/5"), q("3/5"), q("3/5"), q("3/5")};
  REQUIRE(admissible(c, m, true));
  auto st = chain_stats(c, m);
  for (std::size_t t = 0; t + 1 < st.size(); ++t) CHECK(st[t].delta < 1);
  QRat at2 = st[2].delta + m[1];
  QRat at3 = st[3].delta + m[2];
  CHECK(at2 == q("7/5"));
  CHECK(at3 == q("9/5"));
  CHECK(at3 > at2);
}

TEST_CASE("restart defect bounds") {
  CHECK(restart_m0_floor(2) == q("6/7"));
  for (int qq = 2; qq < 40; ++qq) {
    CHECK(restart_m0_floor(qq) >= q("6/7"));
    CHECK(frac(qq * qq + qq + 1, (qq + 1) * (qq + 1)) < 1);
  }
  auto r = restart_defect_check(q("3/4"), q("7/8"), {2, 2});
  CHECK(r.sum_bound);
  CHECK(r.ok());
  CHECK_THROWS_AS(restart_defect_check(q("3/4"), q("7/8"), {1, 2}), ChainError);
  CHECK_THROWS_AS(restart_defect_check(1, q("1/2"), {2, 2}), ChainError);
}

TEST_CASE("restart conclusions on explicit processes, seeded") {
  // Independent model: defects along the restart written out as sums.
  // A process ending right after the second run is infeasible, so the sampled
  // processes continue past it.
  std::mt19937_64 g(41);
  int hits = 0;
  // Half the draws land in the upper half of their range, where feasible processes live.
  auto draw = [&](const QRat& cap) { return testutil::rand_between(g, g() % 2 ? QRat(cap / 2) : QRat(0), cap, 24); };
  for (int t = 0; t < 200000 && hits < 200; ++t) {
    const int p = 2 + static_cast<int>(g() % 3), qq = 2 + static_cast<int>(g() % 3);
    QRat d0 = testutil::rand_between(g, q("3/4"), q("99/100"), 48);
    QRat m0 = testutil::rand_between(g, q("3/4"), q("99/100"), 48);
    // First satellite run a_1..a_p under m0, second run b_2..b_q under a_{p-1}.
    std::vector<QRat> a, b;
    QRat room = m0;
    for (int n = 0; n < p; ++n) {
      QRat cap = n ? std::min<QRat>(room, a.back()) : room;
      QRat v = draw(cap);
      a.push_back(v);
      room -= v;
    }
    QRat room2 = a[static_cast<std::size_t>(p - 2)] - a.back();
    QRat prev = a.back();
    for (int n = 1; n < qq; ++n) {
      QRat v = draw(std::min<QRat>(room2, prev));
      b.push_back(v);
      room2 -= v;
      prev = v;
    }
    std::vector<QRat> first;  // defects at [2.1] .. [2.p]
    QRat acc = 0;
    for (int n = 1; n <= p; ++n) {
      acc += a[static_cast<std::size_t>(n - 1)];
      first.push_back(n * (d0 - 1) + acc);
    }
    bool fine = std::all_of(first.begin(), first.end(), [](const QRat& v) { return v < 1; });
    QRat cur = first.back();
    for (int n = 2; n <= qq && fine; ++n) {
      if (cur >= 1) fine = false;
      cur = cur + first[static_cast<std::size_t>(p - 2)] + b[static_cast<std::size_t>(n - 2)] - 1;
    }
    // The process goes on past the second run, so every defect so far stays
    // below 1 while both caps reach 1.
    const QRat cap1 = first.back() + a[static_cast<std::size_t>(p - 2)];
    const QRat cap2 = cur + (qq == 2 ? a.back() : b[static_cast<std::size_t>(qq - 3)]);
    if (!fine || cur >= 1 || cap1 < 1 || cap2 < 1) continue;
    ++hits;
    auto rep = restart_defect_check(d0, m0, {p, qq});
    CAPTURE(p);
    CAPTURE(qq);
    CHECK(rep.first_run_feasible);
    CHECK(rep.second_run_feasible);
    CHECK(rep.sum_bound);
    CHECK(rep.weighted_bound);
    CHECK(rep.m0_bound);
  }
  MESSAGE("restart processes sampled: " << hits);
  CHECK(hits > 0);
}
