#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cert/eta_profiles.hpp"
#include "cert/exact.hpp"

namespace cert {

// The bound every certified supremum of 6*psi must stay below.
inline const QRat kBignessLimit{51};

struct BignessOptions {
  QRat width = kDefaultWidth;   // bracket width for the location of interior maxima
  int bracket_budget = kDefaultBudget;
  int fallback_budget = 2048;   // bisection budget when no monotonicity argument applies
};

struct RegimeBound {
  int regime = 0;
  QRat lo;
  std::optional<QRat> hi;  // empty for the unbounded tail
  std::string method;      // phi-cascade, derivative-sign, decreasing, interval-bisection, ...
  bool certified = false;
  QRat bound;              // meaningful only when certified
  std::optional<Interval> argmax;  // degenerate interval for an endpoint maximum
};

struct BignessCertificate {
  PlaceShape shape;
  QRat gamma;
  std::vector<RegimeBound> regimes;
  QRat sup_bound;
  bool pass = false;
  std::optional<Interval> argmax;
};

// Supremum of r over iv (or over [iv.lo, inf) when ray is set) from the sign of
// the cleared derivative, with bisection as the last resort.
RegimeBound analyze_interval(const RatFn& r, const Interval& iv, const BignessOptions& opt = {});
RegimeBound analyze_ray(const RatFn& r, const QRat& lo, const BignessOptions& opt = {});

enum class SignPattern { Pos, Neg, NegToPos, PosToNeg, Unknown };
std::string to_string(SignPattern p);

// Sign patterns of phi, phi', phi'', phi''' (index = derivative order) on the
// middle regime of a chain, inferred from the endpoint values alone.
struct CascadeResult {
  Interval range;
  std::array<SignPattern, 4> pattern{SignPattern::Unknown, SignPattern::Unknown, SignPattern::Unknown,
                                     SignPattern::Unknown};
  bool caveats_ok = false;  // 0 <= eps < 19 and 2*eps <= 2*beta - alpha
  bool determined() const { return pattern[0] != SignPattern::Unknown; }
};
// Requires a chain shape whose middle regime is a nondegenerate interval.
CascadeResult phi_sign_cascade(const PlaceShape& chain, const QRat& gamma);

BignessCertificate certify_place(const PlaceShape& shape, const QRat& gamma, const BignessOptions& opt = {});

class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Threshold gamma* > 0 held through its square; no radical is materialized.
struct GammaThreshold {
  QRat square;
  bool exceeded_by(const QRat& g) const { return g > 0 && g * g > square; }
  // A rational r with r^2 > square and r - sqrt(square) < 10^-6.
  QRat rational_above() const;
};

// For the degenerate shape and chains whose supremum sits at lambda = gamma/3:
// 6*psi(gamma/3) < 51 exactly when gamma^2 > 107*alpha*beta/27.
GammaThreshold minimal_gamma(const PlaceShape& shape, const BignessOptions& opt = {});

struct ThresholdOptions {
  QRat gamma_margin{1, 1000};  // added above radical thresholds
  BignessOptions bigness;
  int adjacent_max = 108;      // Chain(j, j+1) is checked for 2 <= j <= adjacent_max
};

struct ThresholdEntry {
  std::string family;
  std::string label;
  std::optional<GammaThreshold> threshold;  // set when the printed threshold is a radical
  bool strict = false;                      // printed with ">" rather than ">="
  BignessCertificate cert;
};

std::vector<ThresholdEntry> paper_threshold_table(const ThresholdOptions& opt = {});

struct SigmaCheck {
  enum class Reason { Ok, Sigma3TooSmall, Sigma1TooSmall, Sigma2TooSmall };
  bool ok = false;
  Reason reason = Reason::Ok;
  explicit operator bool() const { return ok; }
};
std::string to_string(SigmaCheck::Reason r);

SigmaCheck sigma_hypothesis_check(const QRat& sigma1, const QRat& sigma2_squared, const QRat& sigma3);

}  // namespace cert
