#include "cert/bigness.hpp"

#include <algorithm>
#include <utility>

#include "cert/phi_lemma.hpp"

namespace cert {

namespace {

Poly cleared_derivative(const RatFn& r) { return r.num.derive() * r.den - r.num * r.den.derive(); }

RegimeBound uncertified(std::string method) {
  RegimeBound rb;
  rb.method = std::move(method);
  return rb;
}

void set_point(RegimeBound& rb, const QRat& x, const QRat& v) {
  rb.certified = true;
  rb.bound = v;
  rb.argmax = Interval(x, x);
}

// Larger endpoint value, with the point where it is attained.
void set_endpoint_max(RegimeBound& rb, const RatFn& r, const QRat& a, const QRat& b) {
  QRat va = r(a), vb = r(b);
  if (va >= vb)
    set_point(rb, a, va);
  else
    set_point(rb, b, vb);
}

void bisect(RegimeBound& rb, const RatFn& r, const Interval& iv, int budget) {
  rb.method = "interval-bisection";
  try {
    rb.bound = sup_rational_bound(r.num, r.den, iv, budget);
    rb.certified = true;
  } catch (const ExactError&) {
    rb.certified = false;
  }
}

void bound_on_bracket(RegimeBound& rb, const RatFn& r, const Interval& br, const BignessOptions& opt) {
  rb.bound = sup_rational_bound(r.num, r.den, br, opt.bracket_budget);
  rb.certified = true;
  rb.argmax = br;
}

// Limit at +infinity when finite.
std::optional<QRat> limit_at_infinity(const RatFn& r) {
  if (r.num.degree() > r.den.degree()) return std::nullopt;
  if (r.num.degree() < r.den.degree()) return QRat(0);
  return QRat(r.num.leading() / r.den.leading());
}

}  // namespace

RegimeBound analyze_interval(const RatFn& r0, const Interval& iv, const BignessOptions& opt) {
  RatFn r = r0.reduced();
  if (count_roots(r.den, iv) > 0) return uncertified("pole");
  RegimeBound rb;
  rb.lo = iv.lo;
  rb.hi = iv.hi;
  rb.method = "derivative-sign";
  if (iv.lo == iv.hi) {
    set_point(rb, iv.lo, r(iv.lo));
    return rb;
  }
  Poly d = cleared_derivative(r);
  if (d.is_zero()) {
    set_point(rb, iv.lo, r(iv.lo));
    return rb;
  }
  SignReport s = sign_on_interval(d, iv, opt.width);
  if (s.nonpositive()) {
    set_point(rb, iv.lo, r(iv.lo));
  } else if (s.nonnegative()) {
    set_point(rb, iv.hi, r(iv.hi));
  } else if (s.kind == SignReport::Kind::ChangesOnceAt && s.direction < 0) {
    bound_on_bracket(rb, r, *s.bracket, opt);
  } else if (s.kind == SignReport::Kind::ChangesOnceAt) {
    set_endpoint_max(rb, r, iv.lo, iv.hi);
  } else {
    bisect(rb, r, iv, opt.fallback_budget);
  }
  return rb;
}

RegimeBound analyze_ray(const RatFn& r0, const QRat& lo, const BignessOptions& opt) {
  RatFn r = r0.reduced();
  if (count_roots_from(r.den, lo) > 0) return uncertified("pole");
  RegimeBound rb;
  rb.lo = lo;
  rb.method = "decreasing";
  auto lim = limit_at_infinity(r);
  Poly d = cleared_derivative(r);
  if (d.is_zero()) {
    set_point(rb, lo, r(lo));
    return rb;
  }
  SignReport s = sign_on_ray(d, lo, opt.width);
  auto tail_max = [&](RegimeBound& out) {
    if (!lim) {
      out.method = "unbounded";
      out.certified = false;
      return;
    }
    QRat v = r(lo);
    out.certified = true;
    out.bound = std::max<QRat>(v, *lim);
    if (v >= *lim) out.argmax = Interval(lo, lo);
  };
  if (s.nonpositive()) {
    set_point(rb, lo, r(lo));
  } else if (s.nonnegative()) {
    rb.method = "derivative-sign";
    tail_max(rb);
  } else if (s.kind == SignReport::Kind::ChangesOnceAt && s.direction < 0) {
    rb.method = "derivative-sign";
    bound_on_bracket(rb, r, *s.bracket, opt);
  } else if (s.kind == SignReport::Kind::ChangesOnceAt) {
    rb.method = "derivative-sign";
    tail_max(rb);
  } else {
    // Past every root of the derivative its sign is that of the leading coefficient.
    QRat cut = lo + 1;
    for (int i = 0; i < d.degree(); ++i) cut = std::max<QRat>(cut, abs_q(d.coeffs()[i] / d.leading()) + 1);
    bisect(rb, r, Interval(lo, cut), opt.fallback_budget);
    if (rb.certified && d.leading() > 0) {
      if (!lim) return uncertified("unbounded");
      rb.bound = std::max<QRat>(rb.bound, *lim);
    }
  }
  return rb;
}

std::string to_string(SignPattern p) {
  switch (p) {
    case SignPattern::Pos: return "+";
    case SignPattern::Neg: return "-";
    case SignPattern::NegToPos: return "-+";
    case SignPattern::PosToNeg: return "+-";
    case SignPattern::Unknown: return "?";
  }
  return "?";
}

namespace {

// Interior sign pattern of a linear function from its endpoint signs.
SignPattern from_endpoints_linear(int l, int r) {
  if (l >= 0 && r >= 0 && l + r > 0) return SignPattern::Pos;
  if (l <= 0 && r <= 0 && l + r < 0) return SignPattern::Neg;
  if (l < 0 && r > 0) return SignPattern::NegToPos;
  if (l > 0 && r < 0) return SignPattern::PosToNeg;
  return SignPattern::Unknown;
}

// Pattern of g on the open interval (c, d) from the pattern of g' and the signs
// of g(c), g(d). A zero endpoint is allowed wherever the interior sign is forced.
SignPattern integrate_pattern(SignPattern deriv, int l, int r) {
  switch (deriv) {
    case SignPattern::Pos:  // increasing
      if (l >= 0) return SignPattern::Pos;
      return r <= 0 ? SignPattern::Neg : SignPattern::NegToPos;
    case SignPattern::Neg:  // decreasing
      if (l <= 0) return SignPattern::Neg;
      return r >= 0 ? SignPattern::Pos : SignPattern::PosToNeg;
    case SignPattern::NegToPos:  // maximum at an endpoint
      if (l <= 0 && r <= 0) return SignPattern::Neg;
      if (l <= 0) return SignPattern::NegToPos;
      return r <= 0 ? SignPattern::PosToNeg : SignPattern::Unknown;
    case SignPattern::PosToNeg:  // minimum at an endpoint
      if (l >= 0 && r >= 0) return SignPattern::Pos;
      if (l >= 0) return SignPattern::PosToNeg;
      return r >= 0 ? SignPattern::NegToPos : SignPattern::Unknown;
    case SignPattern::Unknown: return SignPattern::Unknown;
  }
  return SignPattern::Unknown;
}

}  // namespace

CascadeResult phi_sign_cascade(const PlaceShape& chain, const QRat& gamma) {
  if (chain.kind != PlaceShape::Kind::Chain)
    throw ExactError(ExactError::Code::Domain, "phi cascade needs a chain shape");
  PhiParams pp(chain.alpha, chain.beta, gamma);
  SpecialValues sv = special_values(pp);
  auto [a, b] = regime_switches(chain, gamma);
  const QRat third = gamma / 3;
  const int left = third > a ? 0 : 1;
  CascadeResult cr;
  cr.range = Interval(std::max<QRat>(a, third), b);
  if (!(cr.range.lo < cr.range.hi)) throw ExactError(ExactError::Code::Domain, "middle regime is empty");
  const QRat eps = pp.epsilon();
  cr.caveats_ok = eps >= 0 && eps < 19 && 2 * eps <= 2 * chain.beta - chain.alpha;
  auto sl = [&](int k) { return sign(sv.direct[k][left]); };
  auto sr = [&](int k) { return sign(sv.direct[k][2]); };
  cr.pattern[3] = from_endpoints_linear(sl(3), sr(3));
  for (int k = 2; k >= 0; --k) cr.pattern[k] = integrate_pattern(cr.pattern[k + 1], sl(k), sr(k));
  return cr;
}

namespace {

RegimeBound middle_regime(const PlaceShape& shape, const QRat& gamma, const BignessOptions& opt) {
  RatFn f = psi6_form(shape, gamma, 2).reduced();
  CascadeResult cr = phi_sign_cascade(shape, gamma);
  const Interval& iv = cr.range;
  if (count_roots(f.den, iv) > 0) return uncertified("pole");
  if (!cr.caveats_ok) {
    RegimeBound rb;
    rb.lo = iv.lo;
    rb.hi = iv.hi;
    bisect(rb, f, iv, opt.fallback_budget);
    return rb;
  }
  if (!cr.determined()) {
    RegimeBound rb = analyze_interval(f, iv, opt);
    if (rb.method == "derivative-sign") rb.method = "derivative-sign (cascade undetermined)";
    return rb;
  }
  RegimeBound rb;
  rb.lo = iv.lo;
  rb.hi = iv.hi;
  rb.method = "phi-cascade";
  switch (cr.pattern[0]) {
    case SignPattern::Neg: set_point(rb, iv.lo, f(iv.lo)); break;
    case SignPattern::Pos: set_point(rb, iv.hi, f(iv.hi)); break;
    case SignPattern::NegToPos: set_endpoint_max(rb, f, iv.lo, iv.hi); break;
    case SignPattern::PosToNeg: {
      Poly phi = build_phi(PhiParams(shape.alpha, shape.beta, gamma));
      SignReport s = sign_on_interval(phi, iv, opt.width);
      if (s.kind != SignReport::Kind::ChangesOnceAt) return analyze_interval(f, iv, opt);
      bound_on_bracket(rb, f, *s.bracket, opt);
      break;
    }
    case SignPattern::Unknown: break;
  }
  return rb;
}

void tag(RegimeBound& rb, int regime, const QRat& lo, std::optional<QRat> hi) {
  rb.regime = regime;
  rb.lo = lo;
  rb.hi = std::move(hi);
}

}  // namespace

BignessCertificate certify_place(const PlaceShape& shape, const QRat& gamma, const BignessOptions& opt) {
  if (gamma <= 0) throw ExactError(ExactError::Code::Domain, "certify_place: gamma must be positive");
  BignessCertificate c;
  c.shape = shape;
  c.gamma = gamma;
  const QRat start = gamma / 3;
  auto [a, b] = regime_switches(shape, gamma);

  if (a > start) {
    RegimeBound rb = analyze_interval(psi6_form(shape, gamma, 1), Interval(start, a), opt);
    tag(rb, 1, start, a);
    c.regimes.push_back(std::move(rb));
  }
  QRat tail = std::max<QRat>(a, start);
  if (shape.kind == PlaceShape::Kind::Chain && b > tail) {
    RegimeBound rb = middle_regime(shape, gamma, opt);
    tag(rb, 2, tail, b);
    c.regimes.push_back(std::move(rb));
    tail = b;
  }
  RegimeBound rb = analyze_ray(psi6_form(shape, gamma, 3), tail, opt);
  tag(rb, 3, tail, std::nullopt);
  c.regimes.push_back(std::move(rb));

  bool all = true;
  bool first = true;
  for (const auto& r : c.regimes) {
    if (!r.certified) {
      all = false;
      continue;
    }
    if (first || r.bound > c.sup_bound) {
      c.sup_bound = r.bound;
      c.argmax = r.argmax;
      first = false;
    }
  }
  c.pass = all && !first && c.sup_bound < kBignessLimit;
  return c;
}

QRat GammaThreshold::rational_above() const {
  const ZInt scale = 1000000;
  ZInt n = floor_q(square * QRat(scale * scale));
  ZInt root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  QRat r(root + 1, scale);
  r.canonicalize();
  return r;
}

GammaThreshold minimal_gamma(const PlaceShape& shape, const BignessOptions& opt) {
  if (shape.kind == PlaceShape::Kind::NonExceptional)
    throw NotApplicable("minimal_gamma: the non-exceptional shape has no lower-end threshold");
  GammaThreshold t{QRat(107) * shape.alpha * shape.beta / 27};
  // The lower-end value only governs when the first regime exists at the threshold.
  if (t.square > 9 * shape.alpha * shape.alpha)
    throw NotApplicable("minimal_gamma: " + shape.name() + " has an interior maximum; certify an explicit gamma");
  const QRat g = t.rational_above();
  BignessCertificate c = certify_place(shape, g, opt);
  if (!c.pass || !c.argmax || c.argmax->lo != g / 3 || c.argmax->hi != g / 3)
    throw NotApplicable("minimal_gamma: " + shape.name() + " does not peak at the lower end");
  return t;
}

namespace {

ThresholdEntry radical_entry(std::string family, std::string label, const PlaceShape& s, bool strict,
                             const ThresholdOptions& opt) {
  ThresholdEntry e;
  e.family = std::move(family);
  e.label = std::move(label);
  e.threshold = GammaThreshold{QRat(107) * s.alpha * s.beta / 27};
  e.strict = strict;
  e.cert = certify_place(s, e.threshold->rational_above() + opt.gamma_margin, opt.bigness);
  return e;
}

ThresholdEntry decimal_entry(std::string family, std::string label, const PlaceShape& s, const char* gamma,
                             const ThresholdOptions& opt) {
  ThresholdEntry e;
  e.family = std::move(family);
  e.label = std::move(label);
  e.cert = certify_place(s, parse_qrat(gamma), opt.bigness);
  return e;
}

std::string jk(const char* a, long x, const char* b, long y) {
  return std::string(a) + "=" + std::to_string(x) + "," + b + "=" + std::to_string(y);
}

}  // namespace

std::vector<ThresholdEntry> paper_threshold_table(const ThresholdOptions& opt) {
  std::vector<ThresholdEntry> out;
  auto chain = [](long a, long b) { return PlaceShape::chain(a, b); };

  out.push_back(radical_entry("primary", "n=1", PlaceShape::degenerate(), true, opt));
  out.push_back(radical_entry("primary", "n=2", chain(1, 2), true, opt));
  out.push_back(decimal_entry("primary", "n=3", chain(1, 3), "3.51", opt));
  out.push_back(decimal_entry("primary", "n=4", chain(1, 4), "4.23", opt));
  out.push_back(decimal_entry("primary", "n=5", chain(1, 5), "5", opt));

  const char* wide[] = {"6.31", "9.13", "12"};
  for (long j = 2; j <= 4; ++j)
    out.push_back(decimal_entry("wide", "j=" + std::to_string(j), chain(j, 2 * j + 1), wide[j - 2], opt));

  for (long j = 2; j <= opt.adjacent_max; ++j)
    out.push_back(radical_entry("adjacent", "j=" + std::to_string(j), chain(j, j + 1), true, opt));

  for (long j = 2; j <= 8; ++j)
    for (long k = 2; k <= 12; ++k)
      out.push_back(radical_entry("nested", jk("j", j, "k", k), chain((j - 1) * k + 1, j * k + 1), true, opt));

  for (long j = 2; j <= 3; ++j)
    for (long l = 2; l <= 3; ++l)
      out.push_back(
          radical_entry("double", jk("j", j, "l", l), chain(j * l + j - 1, j * l + l + j), false, opt));
  return out;
}

std::string to_string(SigmaCheck::Reason r) {
  switch (r) {
    case SigmaCheck::Reason::Ok: return "Ok";
    case SigmaCheck::Reason::Sigma3TooSmall: return "Sigma3TooSmall";
    case SigmaCheck::Reason::Sigma1TooSmall: return "Sigma1TooSmall";
    case SigmaCheck::Reason::Sigma2TooSmall: return "Sigma2TooSmall";
  }
  return "?";
}

SigmaCheck sigma_hypothesis_check(const QRat& s1, const QRat& s2sq, const QRat& s3) {
  SigmaCheck c;
  if (s3 <= 3) {
    c.reason = SigmaCheck::Reason::Sigma3TooSmall;
    return c;
  }
  const QRat first = 2 * s3 / (s3 - 1);
  const QRat second = s3 / (s3 - 3);
  if (s1 < first || s1 < second) {
    c.reason = SigmaCheck::Reason::Sigma1TooSmall;
    return c;
  }
  const QRat third = 2 * s3 * s3 / ((s3 - 2) * (s3 - 2));
  if (s2sq < first * first || s2sq < third) {
    c.reason = SigmaCheck::Reason::Sigma2TooSmall;
    return c;
  }
  c.ok = true;
  return c;
}

}  // namespace cert
