#include <chrono>
#include <random>

#include "cert/surfaces.hpp"
#include "doctest.h"

using namespace cert;
using Pos = BlowUp::Position;

namespace {

H0Result closed(const char* chain, int u, std::vector<int> w) {
  return h0_closed(ChainDescriptor::parse(chain), DivisorClass{u, std::move(w)});
}

long oracle(const char* chain, int u, std::vector<int> w, OracleOptions opt = {}) {
  return h0_oracle(ChainDescriptor::parse(chain), DivisorClass{u, std::move(w)}, opt);
}

std::vector<int> random_weights(std::mt19937_64& g, std::size_t n, int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  std::vector<int> w(n);
  for (auto& x : w) x = d(g);
  return w;
}

}  // namespace

TEST_CASE("descriptor expansion") {
  auto run = ChainDescriptor::parse("(3)");
  REQUIRE(run.length() == 3);
  CHECK(run.steps()[0].position == Pos::Origin);
  CHECK(run.steps()[1].position == Pos::Free);
  CHECK(run.steps()[2].label == "(3)");

  auto two = ChainDescriptor::parse("(2.3)");
  REQUIRE(two.length() == 4);
  CHECK(two.steps()[2].label == "(2.2)");
  CHECK(two.steps()[2].position == Pos::AtInfinity);
  CHECK(two.steps()[2].attach == 0);
  CHECK(two.steps()[3].position == Pos::AtZero);
  CHECK(two.steps()[3].attach == 0);

  auto three = ChainDescriptor::parse("(3.2.2)");
  REQUIRE(three.length() == 5);
  CHECK(three.steps()[3].attach == 1);  // (3.2) meets (2)
  CHECK(three.steps()[4].attach == 2);  // (3.2.2) meets (3.1) = (3)
  CHECK(three.steps()[4].position == Pos::AtInfinity);

  CHECK(ChainDescriptor::parse("(1,1)").length() == 2);
  CHECK(ChainDescriptor::parse(" ( 1 , 1 ) ").to_string() == "(2)");
  auto restart = ChainDescriptor::parse("(2.3)[2.2]");
  REQUIRE(restart.length() == 6);
  CHECK(restart.steps()[4].position == Pos::Free);
  CHECK(restart.steps()[5].position == Pos::AtInfinity);
  CHECK(restart.steps()[5].attach == 3);  // [1] is the blow-up before the group

  auto lead = ChainDescriptor::parse("[2.3]");
  REQUIRE(lead.length() == 4);
  for (int t = 0; t < 4; ++t) {
    CHECK(lead.steps()[t].position == two.steps()[t].position);
    CHECK(lead.steps()[t].attach == two.steps()[t].attach);
  }
}

TEST_CASE("descriptor errors") {
  for (const char* bad : {"", "(", "(2", "2", "(1,2)", "(1.2)", "(2.1)", "(2)(3)", "(0)", "(2.x)", "[1]", "(1.1,2)"})
    CHECK_THROWS_AS(ChainDescriptor::parse(bad), SurfaceError);
}

TEST_CASE("lattice numbers") {
  CHECK(chi({3, {1, 1}}) == 8);
  CHECK(chi({2, {2, 1}}) == 2);
  DivisorClass c{4, {2, 1, 1}};
  CHECK(c.self_intersection() == 10);
  CHECK(c.canonical_pairing() == -8);
  // Riemann-Roch: chi = 1 + (D^2 - D.K)/2.
  std::mt19937_64 g(7);
  for (int t = 0; t < 200; ++t) {
    DivisorClass r{static_cast<int>(g() % 9), random_weights(g, 1 + g() % 6, 5)};
    CHECK(2 * chi(r) == 2 + r.self_intersection() - r.canonical_pairing());
  }
}

TEST_CASE("weighted sums and families") {
  auto ones = [](int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); };
  auto check = [&](const char* s, long w, long a, long b) {
    auto ch = ChainDescriptor::parse(s);
    auto r = weighted_w(ch, {5, ones(ch.length())});
    CHECK(r.w == w);
    CHECK(r.alpha == a);
    CHECK(r.beta == b);
  };
  check("(3)", 3, 1, 3);
  check("(3.2)", 6, 2, 5);
  check("(2.2.2)", 7, 3, 5);
  check("(2.2.2.2)", 5 + 3 + 2 + 2, 5, 8);
  CHECK(chain_family(ChainDescriptor::parse("(4)")) == ChainFamily::Run);
  CHECK(chain_family(ChainDescriptor::parse("(3.3)")) == ChainFamily::TwoLevel);
  CHECK(chain_family(ChainDescriptor::parse("(2.3.4)")) == ChainFamily::ThreeLevel);
  CHECK(chain_family(ChainDescriptor::parse("(2.3.2.2)")) == ChainFamily::DoubleTail);
  CHECK_THROWS_AS(chain_family(ChainDescriptor::parse("(3.2.2)")), SurfaceError);
  CHECK_THROWS_AS(chain_family(ChainDescriptor::parse("(2)[2]")), SurfaceError);
  CHECK_THROWS_AS(weighted_w(ChainDescriptor::parse("(2)"), {3, {1}}), SurfaceError);
}

TEST_CASE("closed forms on worked values") {
  auto e = closed("(1)", 3, {2});
  CHECK(e.kind == H0Result::Kind::Exact);
  CHECK(e.value == 7);
  CHECK(closed("(1,1)", 1, {2, 1}).kind == H0Result::Kind::Zero);
  auto t = closed("(2)", 2, {2, 1});
  CHECK(t.kind == H0Result::Kind::UpperBound);
  CHECK(t.value == 2);
  auto f = closed("(4)", 4, {1, 1, 1, 1});
  CHECK(f.kind == H0Result::Kind::Exact);
  CHECK(f.value == 11);
  auto s = closed("(1,1)", 2, {1, 1});
  CHECK(s.kind == H0Result::Kind::Exact);
  CHECK(s.value == 4);
}

TEST_CASE("oracle on small systems") {
  CHECK(oracle("(1)", 1, {1}) == 2);
  CHECK(oracle("(1,1)", 2, {1, 1}) == 4);
  CHECK(oracle("(1,1)", 2, {2, 1}) == 2);
  CHECK(oracle("(1)", 2, {3}) == 0);
  // Conics through five general points.
  CHECK(oracle("(5)", 2, {1, 1, 1, 1, 1}) == 1);
  // Cubics with a tacnode-like condition along a chain.
  CHECK(oracle("(2)", 3, {2, 2}) == 4);
  CHECK(h0_oracle_samples(ChainDescriptor::parse("(2)"), {2, {1, 1}}, {4, 11}) == std::vector<long>(4, 4));
}

TEST_CASE("collinear realization") {
  // Lines through three infinitely near points: none in general, one when they line up.
  CHECK(oracle("(3)", 1, {1, 1, 1}) == 0);
  OracleOptions on;
  on.collinear = 3;
  CHECK(oracle("(3)", 1, {1, 1, 1}, on) == 1);
  on.collinear = 5;
  CHECK_THROWS_AS(oracle("(3)", 1, {1, 1, 1}, on), SurfaceError);
  on.collinear = 3;
  CHECK_THROWS_AS(oracle("(2.2)", 1, {1, 1, 1}, on), SurfaceError);
}

TEST_CASE("oracle limits") {
  CHECK_THROWS_AS(oracle("(1)", 13, {1}), SurfaceError);
  CHECK_THROWS_AS(oracle("(9)", 2, std::vector<int>(9, 1)), SurfaceError);
  CHECK_THROWS_AS(oracle("(2)", 2, {1}), SurfaceError);
  CHECK_THROWS_AS(oracle("(2)", 2, {1, -1}), SurfaceError);
  OracleOptions none;
  none.samples = 0;
  CHECK_THROWS_AS(oracle("(2)", 2, {1, 1}, none), SurfaceError);
}

TEST_CASE("closed forms agree with the oracle on the full grid") {
  auto t0 = std::chrono::steady_clock::now();
  GridReport rep = closed_vs_oracle_grid(default_grid_chains(), 6, 3);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& f : rep.failures) MESSAGE(f);
  CHECK(rep.ok());
  CHECK(rep.instances == 13580);
  CHECK(rep.exact_cases > 0);
  CHECK(rep.zero_cases > 0);
  CHECK(rep.bound_cases > 0);
  CHECK(secs < 60);
}

TEST_CASE("deeper families against the oracle, seeded") {
  std::mt19937_64 g(2024);
  const char* chains[] = {"(2.2.2)", "(2.2.3)", "(2.3.2)", "(2.2.4)", "(2.2.2.2)", "(2.2.2.3)", "(2.3.2.2)"};
  for (int t = 0; t < 400; ++t) {
    const char* s = chains[g() % std::size(chains)];
    auto ch = ChainDescriptor::parse(s);
    DivisorClass c{static_cast<int>(g() % 8), random_weights(g, static_cast<std::size_t>(ch.length()), 3)};
    auto r = h0_closed(ch, c);
    long h0 = h0_oracle(ch, c);
    CAPTURE(s);
    CAPTURE(c.u);
    CHECK(h0 >= chi(c));
    if (r.kind == H0Result::Kind::Exact) CHECK(h0 == r.value);
    if (r.kind == H0Result::Kind::Zero) CHECK(h0 == 0);
    if (r.kind == H0Result::Kind::UpperBound) CHECK(h0 <= r.value);
  }
}

TEST_CASE("oracle is monotone in degree and weights") {
  std::mt19937_64 g(99);
  const char* chains[] = {"(3)", "(2.3)", "(3.2)", "(2.2.2)", "(2)[2]", "(3.2.2)"};
  for (int t = 0; t < 150; ++t) {
    auto ch = ChainDescriptor::parse(chains[g() % std::size(chains)]);
    DivisorClass c{static_cast<int>(g() % 6), random_weights(g, static_cast<std::size_t>(ch.length()), 3)};
    long base = h0_oracle(ch, c);
    DivisorClass up = c;
    up.u += 1;
    CHECK(h0_oracle(ch, up) >= base);
    DivisorClass heavier = c;
    heavier.weights[g() % heavier.weights.size()] += 1;
    CHECK(h0_oracle(ch, heavier) <= base);
  }
}

TEST_CASE("forced chains do not depend on the realization") {
  std::mt19937_64 g(5);
  const char* chains[] = {"(2.2)", "(2.3)", "(2.2.2)", "(2.3.2)", "(2.2.2.2)"};
  for (int t = 0; t < 60; ++t) {
    auto ch = ChainDescriptor::parse(chains[g() % std::size(chains)]);
    DivisorClass c{static_cast<int>(g() % 7), random_weights(g, static_cast<std::size_t>(ch.length()), 3)};
    OracleOptions opt;
    opt.samples = 4;
    opt.seed = g();
    auto v = h0_oracle_samples(ch, c, opt);
    for (long x : v) CHECK(x == v.front());
  }
}
