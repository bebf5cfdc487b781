#include "cert/phi_lemma.hpp"

namespace cert {

PhiParams::PhiParams(QRat a, QRat b, QRat g) : alpha(std::move(a)), beta(std::move(b)), gamma(std::move(g)) {
  if (alpha == beta) throw ExactError(ExactError::Code::Domain, "phi: alpha must differ from beta");
  if (alpha == 0 || beta == 0) throw ExactError(ExactError::Code::Domain, "phi: alpha and beta must be nonzero");
}

Poly build_phi_gamma_form(const PhiParams& p) {
  const QRat &a = p.alpha, &b = p.beta, &g = p.gamma;
  return Poly({
      4 * a * (a - b) * g * g,
      4 * (a - b) * g * (3 * a - 2 * g),
      9 * a * (a + 8 * b) - 12 * (2 * a + b) * g + 4 * g * g,
      -(18 * a + 36 * b - 12 * g),
      9,
  });
}

Poly build_phi_epsilon_form(const PhiParams& p) {
  const QRat &a = p.alpha, &b = p.beta;
  const QRat e = p.epsilon();
  const QRat s = a + b;
  return Poly({
      4 * a * (a - b) * (s * s - 2 * s * e + e * e),
      4 * (b - a) * ((-a * a + a * b + 2 * b * b) - (a + 4 * b) * e + 2 * e * e),
      (-11 * a * a + 44 * a * b - 8 * b * b) + (16 * a + 4 * b) * e + 4 * e * e,
      -6 * (a + 4 * b + 2 * e),
      9,
  });
}

Poly build_phi(const PhiParams& p) {
  Poly g = build_phi_gamma_form(p);
  if (!(g == build_phi_epsilon_form(p)))
    throw IdentityViolation("phi: the gamma and epsilon expansions disagree");
  return g;
}

RatFn build_f(const PhiParams& p) {
  const QRat &a = p.alpha, &b = p.beta, &g = p.gamma;
  const Poly L = Poly::x();
  const Poly la = Poly::linear(-a, 1), lb = Poly::linear(-b, 1);
  const QRat c = 8 * b * (b - a);
  Poly num = c * Poly::linear(-g, 3).pow(3) - L * la * Poly::linear(9 * b - 2 * g, -3).pow(3);
  return {num, c * L * la * lb};
}

bool verify_derivative_identity(const PhiParams& p) {
  const QRat &a = p.alpha, &b = p.beta, &g = p.gamma;
  RatFn f = build_f(p);
  Poly lhs = (f.num.derive() * f.den - f.num * f.den.derive()) * (4 * b * (b - a)) * Poly::x().pow(2) *
             Poly::linear(-a, 1).pow(2);
  Poly rhs = Poly::linear(-g, 3) * build_phi(p) * f.den.pow(2);
  return lhs == rhs;
}

std::array<QRat, 3> special_points(const PhiParams& p) {
  const QRat two_thirds_g = 2 * p.gamma / 3;
  return {p.gamma / 3, 3 * p.alpha - two_thirds_g, 3 * p.beta - two_thirds_g};
}

SpecialValues special_values(const PhiParams& p) {
  const QRat &a = p.alpha, &b = p.beta, &g = p.gamma;
  const QRat e = p.epsilon();
  SpecialValues sv;
  sv.points = special_points(p);
  Poly d = build_phi(p);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 3; ++i) sv.direct[k][i] = d(sv.points[i]);
    d = d.derive();
  }
  const QRat u = 2 * a - b + e;
  sv.closed[0] = {g * g * (g - 3 * a) * (g - 3 * a), 36 * a * (a - b) * u * u,
                  9 * b * (a - b) * ((4 * a * a - 7 * a * b + 7 * b * b) - 8 * (a - 2 * b) * e + 4 * e * e)};
  sv.closed[1] = {2 * g * (g - 3 * a) * (4 * g - 3 * a - 6 * b), 12 * (a - b) * (13 * a - 2 * b + 2 * e) * u,
                  18 * (a - b) * b * (a - 2 * b + 2 * e)};
  sv.closed[2] = {44 * g * g - 12 * (7 * a + 8 * b) * g + 18 * a * (a + 8 * b),
                  482 * a * a - 560 * a * b + 128 * b * b + (176 * a - 136 * b) * e + 8 * e * e,
                  50 * a * a - 236 * a * b + 236 * b * b - 40 * (a - 2 * b) * e + 8 * e * e};
  sv.closed[3] = {36 * (-3 * a - 6 * b + 4 * g), 36 * (13 * a - 8 * b + 2 * e), 36 * (-5 * a + 10 * b + 2 * e)};
  const QRat second_form = (-22 * a * a + 52 * a * b - 52 * b * b) + (-4 * a + 8 * b) * e + 44 * e * e;
  if (second_form != sv.closed[2][0])
    throw IdentityViolation("phi'' at g/3: the two printed forms disagree");
  static const char* names[3] = {"g/3", "3a-2g/3", "3b-2g/3"};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 3; ++i)
      if (sv.direct[k][i] != sv.closed[k][i])
        throw IdentityViolation("phi derivative " + std::to_string(k) + " at " + names[i] + ": direct " +
                                to_string(sv.direct[k][i]) + " vs closed " + to_string(sv.closed[k][i]));
  return sv;
}

}  // namespace cert
