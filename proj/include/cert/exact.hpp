#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cert {

using QRat = mpq_class;
using ZInt = mpz_class;

class ExactError : public std::runtime_error {
 public:
  enum class Code { Parse, Domain, NoRoot, Ambiguous, PoleInInterval, BudgetExhausted };
  ExactError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// mpq_class(n, d) does not reduce; this does.
inline QRat frac(long n, long d) {
  QRat q(n, d);
  q.canonicalize();
  return q;
}

// Accepts "7", "-3/4", "4.23", "-.5". Decimals parse to the exact fraction.
QRat parse_qrat(std::string_view s);
// "num/den", or "num" when the denominator is 1. parse_qrat(to_string(q)) == q.
std::string to_string(const QRat& q);

int sign(const QRat& q);
ZInt floor_q(const QRat& q);
QRat abs_q(const QRat& q);
QRat pow_q(const QRat& q, unsigned e);
// Sign of a - sqrt(n) for n >= 0, decided without radicals.
int cmp_sqrt(const QRat& a, const QRat& n);

class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<QRat> coeffs);
  static Poly constant(const QRat& c);
  static Poly x();
  // a + b*x
  static Poly linear(const QRat& a, const QRat& b);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<QRat>& coeffs() const { return c_; }
  QRat coeff(std::size_t i) const;
  QRat leading() const;

  QRat operator()(const QRat& x) const;
  Poly derive() const;
  Poly antiderive() const;
  // p(q(x))
  Poly compose(const Poly& q) const;
  // p(x + c)
  Poly shift(const QRat& c) const;
  Poly pow(unsigned e) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const QRat& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const QRat& s) { return a *= s; }
  friend Poly operator*(const QRat& s, Poly a) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<QRat> c_;
};

struct DivMod {
  Poly quot;
  Poly rem;
};
DivMod divmod(const Poly& a, const Poly& b);
Poly poly_gcd(Poly a, Poly b);  // monic, or zero
Poly squarefree_part(const Poly& p);

QRat poly_eval(const Poly& p, const QRat& x);
Poly poly_derive(const Poly& p);

struct Interval {
  QRat lo;
  QRat hi;
  Interval() = default;
  Interval(QRat l, QRat h);
  QRat width() const { return hi - lo; }
  QRat mid() const { return (lo + hi) / 2; }
  bool contains(const QRat& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  // Open-interval containment, used for bracket comparisons.
  bool strictly_contains(const Interval& o) const { return lo < o.lo && o.hi < hi; }
};

class PiecewisePoly {
 public:
  PiecewisePoly(std::vector<QRat> breakpoints, std::vector<Poly> pieces);
  const std::vector<QRat>& breakpoints() const { return bp_; }
  const std::vector<Poly>& pieces() const { return pieces_; }
  QRat lo() const { return bp_.front(); }
  QRat hi() const { return bp_.back(); }
  QRat operator()(const QRat& x) const;
  QRat integrate(const QRat& a, const QRat& b) const;

 private:
  std::vector<QRat> bp_;
  std::vector<Poly> pieces_;
};

QRat integrate_piecewise(const PiecewisePoly& f, const QRat& a, const QRat& b);

// Distinct real roots in the closed interval.
int count_roots(const Poly& p, const Interval& iv);
// Distinct real roots in [lo, +inf).
int count_roots_from(const Poly& p, const QRat& lo);

inline const QRat kDefaultWidth{1, 1000};
inline constexpr int kDefaultBudget = 64;

// Bracket of width <= width around the unique root in search. When possible the
// bracket is a cell of the grid width*Z, so that 1/1000 gives 3-decimal brackets.
Interval isolate_root(const Poly& p, const Interval& search, const QRat& width = kDefaultWidth);

struct SignReport {
  enum class Kind { AllPositive, AllNegative, NonNegative, NonPositive, ChangesOnceAt, Mixed };
  Kind kind = Kind::Mixed;
  std::optional<Interval> bracket;  // set for ChangesOnceAt
  // Direction of the single change: +1 means negative to positive.
  int direction = 0;

  bool positive() const { return kind == Kind::AllPositive; }
  bool negative() const { return kind == Kind::AllNegative; }
  bool nonnegative() const { return kind == Kind::AllPositive || kind == Kind::NonNegative; }
  bool nonpositive() const { return kind == Kind::AllNegative || kind == Kind::NonPositive; }
};
std::string to_string(SignReport::Kind k);

SignReport sign_on_interval(const Poly& p, const Interval& iv, const QRat& width = kDefaultWidth);
// Same classification on the ray [lo, +inf); ChangesOnceAt brackets are finite.
SignReport sign_on_ray(const Poly& p, const QRat& lo, const QRat& width = kDefaultWidth);

// Range enclosure of p over iv by the centered (Taylor) form.
Interval poly_range(const Poly& p, const Interval& iv);

// Upper bound for num/den on iv by centered-form enclosures and bisection of the
// worst box, at most `budget` splits. Stops early once the bound is below target.
QRat sup_rational_bound(const Poly& num, const Poly& den, const Interval& iv,
                        int budget = kDefaultBudget, std::optional<QRat> target = std::nullopt);

// num/den with common factors removed, so removable singularities evaluate.
struct RatFn {
  Poly num;
  Poly den;
  RatFn reduced() const;
  QRat operator()(const QRat& x) const;
};

}  // namespace cert
