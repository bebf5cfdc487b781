#include <doctest.h>

#include "cert/eta_profiles.hpp"
#include "cert/phi_lemma.hpp"
#include "testutil.hpp"

using namespace cert;
using testutil::q;

TEST_CASE("build_phi matches the printed decimal quartics") {
  CHECK(build_phi(PhiParams(1, 4, q("4.23"))) ==
        Poly({q("-214.7148"), q("277.1496"), q("64.0116"), q("-111.24"), 9}));
  CHECK(build_phi(PhiParams(1, 3, q("3.51"))) ==
        Poly({q("-98.5608"), q("112.8816"), q("63.6804"), q("-83.88"), 9}));
  for (QRat beta : {QRat(2), QRat(5), QRat(7, 2)}) CHECK(build_phi(PhiParams(1, beta, 3))(1) == 0);
}

TEST_CASE("PhiParams rejects equal or zero constants") {
  CHECK_THROWS_AS(PhiParams(1, 1, 2), ExactError);
  CHECK_THROWS_AS(PhiParams(0, 1, 2), ExactError);
  CHECK(PhiParams(1, 5, 5).epsilon() == 1);
}

TEST_CASE("build_f") {
  RatFn f = build_f(PhiParams(1, 2, 2));
  CHECK(f(QRat(5, 3)) == psi6_closed(EtaProfile(QRat(5, 3), 2), PlaceShape::chain(1, 2)));
  // At 9b - 2g - 3l = 0 the tail term vanishes.
  RatFn g = build_f(PhiParams(1, 5, 5));
  QRat l(35, 3);
  CHECK(g(l) == pow_q(3 * l - 5, 3) / (l * (l - 1) * (l - 5)));
}

TEST_CASE("derivative identity") {
  CHECK(verify_derivative_identity(PhiParams(1, 2, QRat(28153, 10000))));
  CHECK(verify_derivative_identity(PhiParams(1, 5, 5)));
  CHECK(verify_derivative_identity(PhiParams(2, 7, 3)));
}

TEST_CASE("special values: worked instances") {
  CHECK(special_values(PhiParams(1, 2, 3)).direct[0][0] == 0);
  auto s155 = special_values(PhiParams(1, 5, 5));
  CHECK(s155.direct[3][2] == 1692);
  CHECK(s155.direct[0][0] == 100);
  CHECK(s155.direct[1][0] == -260);
  CHECK(s155.direct[1][2] == 2520);
  CHECK(s155.direct[0][2] == -39600);
}

TEST_CASE("special values for beta = 2 in terms of epsilon") {
  // Printed specialisations with alpha = 1, beta = 2, eps = 3 - gamma.
  for (const char* gs : {"2.8153", "2.82", "2.9", "2.5"}) {
    QRat g = q(gs), e = 3 - g;
    auto sv = special_values(PhiParams(1, 2, g));
    CHECK(sv.direct[3][1] == 36 * (-3 + 2 * e));
    CHECK(sv.direct[3][2] == 36 * (15 + 2 * e));
    CHECK(sv.direct[2][1] == -126 - 96 * e + 8 * e * e);
    CHECK(sv.direct[2][2] == 522 + 120 * e + 8 * e * e);
    CHECK(sv.direct[1][1] == -12 * (9 + 2 * e) * e);
    CHECK(sv.direct[1][2] == 36 * (3 - 2 * e));
    CHECK(sv.direct[0][1] == -36 * e * e);
    CHECK(sv.direct[0][2] == -18 * (18 + 24 * e + 4 * e * e));
  }
}

TEST_CASE("property: identities hold for random triples and for the worked instances") {
  std::vector<PhiParams> cases{PhiParams(1, 2, QRat(28153, 10000)), PhiParams(1, 3, q("3.51")),
                               PhiParams(1, 4, q("4.23")), PhiParams(1, 5, 5), PhiParams(2, 5, q("6.31"))};
  std::mt19937_64 g(100);
  while (cases.size() < 105) {
    QRat a = testutil::rand_q(g, 20, 13), b = testutil::rand_q(g, 20, 13), c = testutil::rand_q(g, 20, 13);
    if (a == b || a == 0 || b == 0) continue;
    if (a > b) std::swap(a, b);
    cases.emplace_back(a, b, c);
  }
  for (const auto& p : cases) {
    CHECK(verify_derivative_identity(p));
    CHECK_NOTHROW(special_values(p));
    // Independent of special_values: evaluate phi directly at the three points.
    Poly phi = build_phi(p);
    QRat e = p.epsilon();
    QRat a = p.alpha, b = p.beta, gm = p.gamma;
    CHECK(phi(gm / 3) == gm * gm * (gm - 3 * a) * (gm - 3 * a));
    CHECK(phi(3 * a - 2 * gm / 3) == 36 * a * (a - b) * (2 * a - b + e) * (2 * a - b + e));
    // f is continuous into the third-regime form where the tail term vanishes.
    QRat top = 3 * b - 2 * gm / 3;
    if (top != 0 && top != a && top != b)
      CHECK(build_f(p)(top) == pow_q(3 * top - gm, 3) / (top * (top - a) * (top - b)));
  }
}

TEST_CASE("rigorous bounds at the printed maximiser brackets") {
  RatFn f = build_f(PhiParams(1, 5, 5));
  QRat b1 = sup_rational_bound(f.num, f.den, Interval(q("1.922"), q("1.923")));
  CHECK(b1 <= q("50.7"));
  CHECK(b1 > 50);
  RatFn g = build_f(PhiParams(1, 4, q("4.23")));
  QRat b2 = sup_rational_bound(g.num, g.den, Interval(q("1.581"), q("1.582")));
  CHECK(b2 < 51);
  CHECK(b2 > 50);
}
