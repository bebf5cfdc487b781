#include "cert/eta_profiles.hpp"

#include <algorithm>
#include <vector>

namespace cert {

namespace {

[[noreturn]] void domain(const std::string& msg) { throw ExactError(ExactError::Code::Domain, msg); }

const QRat kHalf(1, 2);
const QRat kNineHalves(9, 2);

Poly lam() { return Poly::x(); }

}  // namespace

EtaProfile::EtaProfile(QRat l, QRat g) : lambda(std::move(l)), gamma(std::move(g)) {
  if (gamma <= 0) domain("eta profile: gamma must be positive");
  if (3 * lambda < gamma) domain("eta profile: lambda must be at least gamma/3");
}

Poly EtaProfile::active_line() const { return Poly::linear(gamma - 3 * lambda, lambda); }
QRat EtaProfile::kink() const { return 3 - gamma / lambda; }

PlaceShape PlaceShape::non_exceptional() { return {Kind::NonExceptional, 1, 1}; }
PlaceShape PlaceShape::degenerate() { return {Kind::Degenerate, 1, 1}; }
PlaceShape PlaceShape::chain(const QRat& a, const QRat& b) {
  if (a < 1 || !(a < b)) domain("chain shape needs 1 <= alpha < beta");
  return {Kind::Chain, a, b};
}

std::string PlaceShape::name() const {
  switch (kind) {
    case Kind::NonExceptional: return "NonExceptional";
    case Kind::Degenerate: return "Degenerate";
    case Kind::Chain: return "Chain(" + to_string(alpha) + "," + to_string(beta) + ")";
  }
  return "?";
}

QRat eta_eval(const EtaProfile& p, const QRat& x) {
  if (x < 0) domain("eta_eval: x must be nonnegative");
  QRat v = p.lambda * (x - 3) + p.gamma;
  return v > 0 ? v : QRat(0);
}

RegimeBoundaries regime_boundaries(const EtaProfile& p, const PlaceShape& s) {
  RegimeBoundaries rb;
  rb.x0 = p.kink();
  QRat num = 3 * p.lambda - p.gamma;
  if (p.lambda > s.alpha) rb.t_alpha = num / (p.lambda - s.alpha);
  if (s.kind != PlaceShape::Kind::NonExceptional && p.lambda > s.beta) rb.t_beta = num / (p.lambda - s.beta);
  return rb;
}

std::pair<QRat, QRat> regime_switches(const PlaceShape& s, const QRat& gamma) {
  QRat shift = 2 * gamma / 3;
  if (s.kind == PlaceShape::Kind::Chain) return {3 * s.alpha - shift, 3 * s.beta - shift};
  return {3 - shift, 3 - shift};
}

int regime_of(const EtaProfile& p, const PlaceShape& s) {
  auto [a, b] = regime_switches(s, p.gamma);
  if (p.lambda <= a) return 1;
  if (p.lambda >= b) return 3;
  return 2;
}

RatFn psi6_form(const PlaceShape& s, const QRat& gamma, int regime) {
  const Poly L = lam();
  const Poly rise = Poly::linear(-gamma, 3);             // 3l - g
  const Poly top = Poly::linear(gamma, QRat(3, 2));      // 3l/2 + g
  const QRat full(729, 8);
  switch (s.kind) {
    case PlaceShape::Kind::NonExceptional: {
      const Poly one = Poly::linear(-1, 1);
      if (regime == 1) {
        Poly gap = Poly::linear(kNineHalves - gamma, QRat(-3, 2));  // 9/2 - eta(9/2)
        return {rise.pow(3) - L.pow(2) * gap.pow(3), L.pow(2) * one};
      }
      return {rise.pow(3), L.pow(2) * one};
    }
    case PlaceShape::Kind::Degenerate: {
      if (regime == 1) return {full * L - top.pow(3), L};
      return {rise.pow(3), L * Poly::linear(-1, 1).pow(2)};
    }
    case PlaceShape::Kind::Chain: {
      const QRat& a = s.alpha;
      const QRat& b = s.beta;
      const Poly la = Poly::linear(-a, 1), lb = Poly::linear(-b, 1);
      if (regime == 1) return {full * a * b * L - top.pow(3), a * b * L};
      if (regime == 3) return {rise.pow(3), L * la * lb};
      const QRat c = 8 * b * (b - a);
      const Poly tail = Poly::linear(9 * b - 2 * gamma, -3);
      return {c * rise.pow(3) - L * la * tail.pow(3), c * L * la * lb};
    }
  }
  domain("unknown shape");
}

QRat psi6_closed(const EtaProfile& p, const PlaceShape& s) {
  return psi6_form(s, p.gamma, regime_of(p, s))(p.lambda);
}

namespace {

QRat upper_limit(const EtaProfile& p, const PlaceShape& s, int regime) {
  if (regime != 3) return kNineHalves;
  auto rb = regime_boundaries(p, s);
  if (s.kind == PlaceShape::Kind::Chain) {
    if (rb.t_beta) return *rb.t_beta;
    // lambda == beta == gamma/3: eta = beta*x, so the last piece is identically zero.
    return rb.t_alpha ? *rb.t_alpha : rb.x0;
  }
  return rb.t_alpha ? *rb.t_alpha : rb.x0;
}

Poly integrand_piece(const EtaProfile& p, const PlaceShape& s, const RegimeBoundaries& rb, const QRat& mid) {
  const Poly X = Poly::x();
  const Poly eta = p.active_line();
  if (mid < rb.x0) return QRat(3) * X.pow(2);
  switch (s.kind) {
    case PlaceShape::Kind::NonExceptional: return QRat(3) * (X - eta).pow(2);
    case PlaceShape::Kind::Degenerate: return QRat(3) * (X.pow(2) - eta.pow(2));
    case PlaceShape::Kind::Chain:
      if (!rb.t_alpha || mid < *rb.t_alpha) return QRat(3) * X.pow(2) - QRat(3 / (s.alpha * s.beta)) * eta.pow(2);
      return QRat(3 / (s.beta * (s.beta - s.alpha))) * (s.beta * X - eta).pow(2);
  }
  return {};
}

}  // namespace

PiecewisePoly psi6_integrand(const EtaProfile& p, const PlaceShape& s) {
  const int regime = regime_of(p, s);
  const QRat upper = upper_limit(p, s, regime);
  if (upper <= 0) domain("psi6_integrand: empty integration range");
  auto rb = regime_boundaries(p, s);
  std::vector<QRat> pts{0, upper, rb.x0};
  if (rb.t_alpha) pts.push_back(*rb.t_alpha);
  std::vector<QRat> bp;
  for (const auto& v : pts)
    if (v >= 0 && v <= upper) bp.push_back(v);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<Poly> pieces;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    pieces.push_back(integrand_piece(p, s, rb, (bp[i] + bp[i + 1]) / 2));
  return PiecewisePoly(std::move(bp), std::move(pieces));
}

QRat psi6_by_integration(const EtaProfile& p, const PlaceShape& s) {
  if (upper_limit(p, s, regime_of(p, s)) <= 0) return 0;
  PiecewisePoly f = psi6_integrand(p, s);
  return f.integrate(f.lo(), f.hi());
}

namespace {

QRat summand(int order, const QRat& x, const EtaProfile& p, const PlaceShape& s) {
  if (order == 1) return 1;
  const QRat e = eta_eval(p, x);
  switch (s.kind) {
    case PlaceShape::Kind::NonExceptional:
      return order == 2 ? QRat(QRat(3, 2) * (x - e)) : QRat(kHalf * (x - e) * (x - e));
    case PlaceShape::Kind::Degenerate:
      return order == 2 ? QRat(QRat(3, 2) * x - kHalf * e) : QRat(kHalf * (x * x - e * e));
    case PlaceShape::Kind::Chain: {
      const QRat& a = s.alpha;
      const QRat& b = s.beta;
      if (order == 2 && a != 1) domain("d_sum: order 2 is only defined for chains with alpha = 1");
      if (e <= a * x) return order == 2 ? QRat(QRat(3, 2) * x - kHalf * e) : QRat(kHalf * x * x - e * e / (2 * a * b));
      if (e <= b * x) {
        QRat t = b * x - e;
        return order == 2 ? QRat(t / (b - 1)) : QRat(t * t / (2 * b * (b - a)));
      }
      return 0;
    }
  }
  return 0;
}

}  // namespace

QRat d_sum(int order, const QRat& s, const QRat& m, const EtaProfile& p, const PlaceShape& shape) {
  if (order < 1 || order > 3) domain("d_sum: order must be 1, 2 or 3");
  if (s <= 0 || m <= 0) domain("d_sum: s and m must be positive");
  const QRat r = s * m - 1;
  const ZInt n = floor_q(r);
  auto term = [&](const ZInt& j) { return QRat(summand(order, QRat(j) / s, p, shape) / s); };
  QRat total = 0;
  for (ZInt j = 0; j <= n; ++j) total += term(j);
  total += (r - QRat(n)) * term(n + 1);
  return total;
}

}  // namespace cert
