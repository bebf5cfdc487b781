#include <random>

#include "cert/bigness.hpp"
#include "cert/phi_lemma.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace cert;
using testutil::q;

namespace {

const ThresholdEntry* find(const std::vector<ThresholdEntry>& t, const std::string& fam, const std::string& label) {
  for (const auto& e : t)
    if (e.family == fam && e.label == label) return &e;
  return nullptr;
}

// Value of the first closed form at its left end, written out by hand.
QRat lower_end_value(const QRat& g, const QRat& ab) { return QRat(81, 8) * (9 - g * g / ab); }

int interior_roots(const Poly& p, const Interval& iv) {
  return count_roots(p, iv) - (p(iv.lo) == 0) - (p(iv.hi) == 0);
}

}  // namespace

TEST_CASE("analyzer on hand-made functions") {
  // x/(1+x^2) peaks at 1 with value 1/2.
  RatFn bump{Poly::x(), Poly({1, 0, 1})};
  auto rb = analyze_interval(bump, Interval(0, 3));
  REQUIRE(rb.certified);
  CHECK(rb.argmax->contains(QRat(1)));
  CHECK(rb.bound >= QRat(1, 2));
  CHECK(rb.bound < QRat(1, 2) + QRat(1, 1000));

  auto dec = analyze_ray(RatFn{Poly::constant(1), Poly::x()}, 1);
  CHECK(dec.certified);
  CHECK(dec.bound == 1);
  CHECK(dec.method == "decreasing");

  auto inc = analyze_ray(RatFn{Poly::x(), Poly({1, 1})}, 0);
  CHECK(inc.certified);
  CHECK(inc.bound == 1);

  CHECK_FALSE(analyze_ray(RatFn{Poly({0, 0, 1}), Poly::constant(1)}, 0).certified);
  CHECK_FALSE(analyze_interval(RatFn{Poly::constant(1), Poly({-1, 1})}, Interval(0, 2)).certified);

  // -x(x-1)(x-2)(x-3) has two equal peaks of height 1: no monotone argument applies.
  Poly w = -(Poly::x() * Poly({-1, 1}) * Poly({-2, 1}) * Poly({-3, 1}));
  auto two = analyze_interval(RatFn{w, Poly::constant(1)}, Interval(0, 3));
  REQUIRE(two.certified);
  CHECK(two.method == "interval-bisection");
  CHECK(two.bound >= 1);
  CHECK(two.bound < QRat(101, 100));
}

TEST_CASE("degenerate gamma=2 is exactly 405/8") {
  auto c = certify_place(PlaceShape::degenerate(), 2);
  CHECK(c.pass);
  CHECK(c.sup_bound == QRat(405, 8));
  REQUIRE(c.argmax);
  CHECK(c.argmax->lo == QRat(2, 3));
  CHECK(c.regimes.back().bound == QRat(729, 20));
}

TEST_CASE("non-exceptional gamma=1") {
  auto c = certify_place(PlaceShape::non_exceptional(), 1);
  CHECK(c.pass);
  CHECK(c.sup_bound < 41);
  CHECK(c.sup_bound > 40);
  REQUIRE(c.argmax);
  CHECK(Interval(q("0.464"), q("0.465")).contains(*c.argmax));
  REQUIRE(c.regimes.size() == 2);
  CHECK(c.regimes[1].bound == QRat(1458, 49));
  CHECK(c.regimes[1].bound < q("29.8"));
}

TEST_CASE("tight chain cases reproduce the printed brackets") {
  struct Case {
    long a, b;
    const char* g;
    const char* lo;
    const char* hi;
  };
  const Case cases[] = {{1, 5, "5", "1.922", "1.923"},     {1, 4, "4.23", "1.581", "1.582"},
                        {1, 3, "3.51", "1.253", "1.254"},  {2, 5, "6.31", "2.161", "2.162"},
                        {3, 7, "9.13", "3.069", "3.07"}};
  for (const auto& cs : cases) {
    CAPTURE(cs.a);
    CAPTURE(cs.b);
    auto c = certify_place(PlaceShape::chain(cs.a, cs.b), q(cs.g));
    CHECK(c.pass);
    CHECK(c.sup_bound > 50);
    CHECK(c.sup_bound < 51);
    REQUIRE(c.argmax);
    CHECK(Interval(q(cs.lo), q(cs.hi)).contains(*c.argmax));
    bool cascade = false;
    for (const auto& r : c.regimes) cascade |= r.regime == 2 && r.method == "phi-cascade";
    CHECK(cascade);
  }
  CHECK(certify_place(PlaceShape::chain(1, 5), 5).sup_bound < q("50.7"));
}

TEST_CASE("chain(4,9) at gamma=12 peaks at lambda=4") {
  auto c = certify_place(PlaceShape::chain(4, 9), 12);
  CHECK(c.pass);
  REQUIRE(c.argmax);
  CHECK(c.argmax->lo == 4);
  CHECK(c.argmax->hi == 4);
  auto cr = phi_sign_cascade(PlaceShape::chain(4, 9), 12);
  CHECK(cr.pattern[0] == SignPattern::Neg);
}

TEST_CASE("bounds dominate sampled values and are tight") {
  std::mt19937_64 g(2024);
  const std::pair<PlaceShape, QRat> cases[] = {
      {PlaceShape::degenerate(), 2},          {PlaceShape::non_exceptional(), 1},
      {PlaceShape::chain(1, 5), 5},           {PlaceShape::chain(1, 4), q("4.23")},
      {PlaceShape::chain(2, 5), q("6.31")},   {PlaceShape::chain(3, 7), q("9.13")},
      {PlaceShape::chain(5, 8), q("12.5")},   {PlaceShape::chain(7, 9), q("15.9")}};
  for (const auto& [shape, gamma] : cases) {
    CAPTURE(shape.name());
    auto c = certify_place(shape, gamma);
    QRat best = 0;
    for (const auto& r : c.regimes) {
      REQUIRE(r.certified);
      QRat hi = r.hi ? *r.hi : QRat(r.lo + 40);
      for (int i = 0; i < 20; ++i) {
        QRat lam = testutil::rand_between(g, r.lo, hi);
        QRat v = psi6_by_integration(EtaProfile(lam, gamma), shape);
        CHECK(v <= r.bound);
        if (v > best) best = v;
      }
      if (r.argmax) {
        QRat v = psi6_by_integration(EtaProfile(r.argmax->mid(), gamma), shape);
        CHECK(r.bound - v < QRat(1, 50));
      }
    }
    CHECK(best <= c.sup_bound);
  }
}

TEST_CASE("cascade agrees with Sturm counts") {
  std::mt19937_64 g(77);
  int determined = 0;
  for (int it = 0; it < 150; ++it) {
    long a = 1 + static_cast<long>(g() % 10);
    long b = a + 1 + static_cast<long>(g() % 10);
    QRat gamma = testutil::rand_between(g, QRat(a + b - 3), QRat(a + b));
    if (gamma <= 0) continue;
    auto shape = PlaceShape::chain(a, b);
    auto cr = phi_sign_cascade(shape, gamma);
    if (!cr.caveats_ok || !cr.determined()) continue;
    ++determined;
    Poly d = build_phi(PhiParams(QRat(a), QRat(b), gamma));
    for (int k = 0; k <= 3; ++k, d = d.derive()) {
      CAPTURE(k);
      auto rep = sign_on_interval(d, cr.range);
      int inner = interior_roots(d, cr.range);
      switch (cr.pattern[k]) {
        case SignPattern::Pos: CHECK(rep.nonnegative()); CHECK(inner == 0); break;
        case SignPattern::Neg: CHECK(rep.nonpositive()); CHECK(inner == 0); break;
        case SignPattern::NegToPos:
          REQUIRE(rep.kind == SignReport::Kind::ChangesOnceAt);
          CHECK(rep.direction == 1);
          CHECK(inner == 1);
          break;
        case SignPattern::PosToNeg:
          REQUIRE(rep.kind == SignReport::Kind::ChangesOnceAt);
          CHECK(rep.direction == -1);
          CHECK(inner == 1);
          break;
        case SignPattern::Unknown: break;
      }
    }
  }
  CHECK(determined > 100);
}

TEST_CASE("caveat violation falls back to bisection") {
  // eps = 20 breaks the cascade preconditions.
  auto c = certify_place(PlaceShape::chain(20, 40), 40);
  bool fallback = false;
  for (const auto& r : c.regimes) fallback |= r.regime == 2 && r.method == "interval-bisection";
  CHECK(fallback);
  CHECK_FALSE(phi_sign_cascade(PlaceShape::chain(20, 40), 40).caveats_ok);
}

TEST_CASE("minimal_gamma squares and brackets") {
  auto d = minimal_gamma(PlaceShape::degenerate());
  CHECK(d.square == QRat(107, 27));
  CHECK(cmp_sqrt(q("1.990719"), d.square) < 0);
  CHECK(cmp_sqrt(q("1.990720"), d.square) > 0);
  auto c12 = minimal_gamma(PlaceShape::chain(1, 2));
  CHECK(c12.square == frac(642, 81));
  CHECK(cmp_sqrt(q("2.81530"), c12.square) < 0);
  CHECK(cmp_sqrt(q("2.81531"), c12.square) > 0);
  CHECK(minimal_gamma(PlaceShape::chain(2, 3)).square == frac(642, 27));

  CHECK_THROWS_AS(minimal_gamma(PlaceShape::chain(1, 3)), NotApplicable);
  CHECK_THROWS_AS(minimal_gamma(PlaceShape::chain(1, 4)), NotApplicable);
  CHECK_THROWS_AS(minimal_gamma(PlaceShape::chain(1, 5)), NotApplicable);
  CHECK_THROWS_AS(minimal_gamma(PlaceShape::non_exceptional()), NotApplicable);

  QRat r = d.rational_above();
  CHECK(d.exceeded_by(r));
  CHECK_FALSE(d.exceeded_by(r - QRat(1, 1000000)));
}

TEST_CASE("minimal_gamma is tight at the lower end") {
  std::vector<PlaceShape> shapes{PlaceShape::degenerate(), PlaceShape::chain(1, 2)};
  for (long j = 2; j <= 13; ++j) shapes.push_back(PlaceShape::chain(j, j + 1));
  for (long k = 2; k <= 5; ++k) shapes.push_back(PlaceShape::chain(2 * k + 1, 3 * k + 1));
  shapes.push_back(PlaceShape::chain(5, 8));
  shapes.push_back(PlaceShape::chain(11, 15));
  for (const auto& s : shapes) {
    CAPTURE(s.name());
    auto t = minimal_gamma(s);
    QRat above = t.rational_above() + QRat(1, 1000);
    CHECK(certify_place(s, above).pass);
    QRat below = t.rational_above() - QRat(1, 10);
    auto c = certify_place(s, below);
    CHECK_FALSE(c.pass);
    CHECK(c.sup_bound >= 51);
    REQUIRE(c.argmax);
    CHECK(c.argmax->lo == below / 3);
    CHECK(c.sup_bound == lower_end_value(below, s.alpha * s.beta));
  }
}

TEST_CASE("threshold table") {
  auto t = paper_threshold_table();
  CHECK(t.size() == 5 + 3 + 107 + 77 + 4);
  for (const auto& e : t) {
    CAPTURE(e.family);
    CAPTURE(e.label);
    CHECK(e.cert.pass);
    if (e.threshold) CHECK(e.threshold->exceeded_by(e.cert.gamma));
  }
  const auto* w1 = find(t, "wide", "j=2");
  REQUIRE(w1);
  CHECK(Interval(q("2.161"), q("2.162")).contains(*w1->cert.argmax));
  const auto* w2 = find(t, "wide", "j=3");
  REQUIRE(w2);
  CHECK(Interval(q("3.069"), q("3.07")).contains(*w2->cert.argmax));
  const auto* w3 = find(t, "wide", "j=4");
  REQUIRE(w3);
  CHECK(w3->cert.argmax->lo == 4);
  const auto* n1 = find(t, "primary", "n=1");
  REQUIRE(n1);
  CHECK(n1->strict);
  CHECK_FALSE(find(t, "double", "j=2,l=2")->strict);

  ThresholdOptions wide_margin;
  wide_margin.gamma_margin = 1;
  wide_margin.adjacent_max = 13;
  for (const auto& e : paper_threshold_table(wide_margin)) CHECK(e.cert.pass);
}

TEST_CASE("sigma check") {
  CHECK(sigma_hypothesis_check(3, 7, QRat(9, 2)).ok);
  auto eq = sigma_hypothesis_check(3, 7, 3);
  CHECK_FALSE(eq.ok);
  CHECK(eq.reason == SigmaCheck::Reason::Sigma3TooSmall);
  auto low = sigma_hypothesis_check(2, 7, QRat(9, 2));
  CHECK_FALSE(low.ok);
  CHECK(low.reason == SigmaCheck::Reason::Sigma1TooSmall);
  // (18/7)^2 = 324/49 is the binding lower bound for the squared middle constant.
  CHECK(sigma_hypothesis_check(3, QRat(324, 49), QRat(9, 2)).ok);
  CHECK(sigma_hypothesis_check(3, QRat(323, 49), QRat(9, 2)).reason == SigmaCheck::Reason::Sigma2TooSmall);
}
