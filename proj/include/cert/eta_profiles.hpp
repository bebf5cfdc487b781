#pragma once

#include <optional>
#include <string>

#include "cert/exact.hpp"

namespace cert {

// x -> max(0, lambda*(x-3) + gamma), with lambda >= gamma/3 and gamma > 0.
struct EtaProfile {
  QRat lambda;
  QRat gamma;
  EtaProfile(QRat lambda, QRat gamma);
  Poly active_line() const;  // lambda*(x-3) + gamma
  QRat kink() const;         // 3 - gamma/lambda
};

struct PlaceShape {
  enum class Kind { NonExceptional, Degenerate, Chain };
  Kind kind = Kind::NonExceptional;
  QRat alpha = 1;
  QRat beta = 1;

  static PlaceShape non_exceptional();
  static PlaceShape degenerate();
  static PlaceShape chain(const QRat& alpha, const QRat& beta);
  std::string name() const;
};

struct RegimeBoundaries {
  QRat x0;
  std::optional<QRat> t_alpha;
  std::optional<QRat> t_beta;
};

QRat eta_eval(const EtaProfile& p, const QRat& x);
RegimeBoundaries regime_boundaries(const EtaProfile& p, const PlaceShape& s);

// Slopes where the closed form switches: regime 1 is lambda <= first,
// regime 3 is lambda >= second. Shapes with a single switch return it twice.
std::pair<QRat, QRat> regime_switches(const PlaceShape& s, const QRat& gamma);
int regime_of(const EtaProfile& p, const PlaceShape& s);

// The closed form of 6*psi valid in the given regime, as a rational function of lambda.
RatFn psi6_form(const PlaceShape& s, const QRat& gamma, int regime);

QRat psi6_closed(const EtaProfile& p, const PlaceShape& s);

// Integrand of 6*psi on [0, upper] and the upper limit used for this regime.
PiecewisePoly psi6_integrand(const EtaProfile& p, const PlaceShape& s);
QRat psi6_by_integration(const EtaProfile& p, const PlaceShape& s);

// Finite sums d_1, d_2, d_3 with the fractional-upper-limit convention.
QRat d_sum(int order, const QRat& s, const QRat& m, const EtaProfile& p, const PlaceShape& shape);

}  // namespace cert
