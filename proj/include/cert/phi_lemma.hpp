#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "cert/exact.hpp"

namespace cert {

class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constants of the two-piece rational function; epsilon is always alpha + beta - gamma.
struct PhiParams {
  QRat alpha;
  QRat beta;
  QRat gamma;
  PhiParams(QRat alpha, QRat beta, QRat gamma);
  QRat epsilon() const { return alpha + beta - gamma; }
};

Poly build_phi_gamma_form(const PhiParams& p);
Poly build_phi_epsilon_form(const PhiParams& p);
// Both expansions, compared; throws IdentityViolation if they differ.
Poly build_phi(const PhiParams& p);

// (3l-g)^3/(l(l-a)(l-b)) - (9b-2g-3l)^3/(8b(b-a)(l-b)) over the common denominator.
RatFn build_f(const PhiParams& p);

bool verify_derivative_identity(const PhiParams& p);

struct SpecialValues {
  std::array<QRat, 3> points;                    // g/3, 3a-2g/3, 3b-2g/3
  std::array<std::array<QRat, 3>, 4> direct;     // [derivative order][point]
  std::array<std::array<QRat, 3>, 4> closed;
};
std::array<QRat, 3> special_points(const PhiParams& p);
// Throws IdentityViolation when a direct value differs from its closed form.
SpecialValues special_values(const PhiParams& p);

}  // namespace cert
