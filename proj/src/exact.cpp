#include "cert/exact.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <utility>

namespace cert {

namespace {

[[noreturn]] void fail(ExactError::Code c, const std::string& msg) { throw ExactError(c, msg); }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

}  // namespace

QRat parse_qrat(std::string_view in) {
  std::string_view s = in;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  QRat out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) fail(ExactError::Code::Parse, "bad rational: " + std::string(in));
    ZInt den(std::string(d), 10);
    if (den == 0) fail(ExactError::Code::Parse, "zero denominator: " + std::string(in));
    out = QRat(ZInt(std::string(n), 10), den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      fail(ExactError::Code::Parse, "bad decimal: " + std::string(in));
    std::string digits = std::string(ip) + std::string(fp);
    ZInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    out = QRat(ZInt(digits, 10), den);
  } else {
    if (!all_digits(s)) fail(ExactError::Code::Parse, "bad number: " + std::string(in));
    out = QRat(ZInt(std::string(s), 10));
  }
  out.canonicalize();
  return neg ? QRat(-out) : out;
}

std::string to_string(const QRat& q) { return q.get_str(); }

int sign(const QRat& q) { return sgn(q); }

ZInt floor_q(const QRat& q) {
  ZInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

QRat abs_q(const QRat& q) { return q < 0 ? QRat(-q) : q; }

QRat pow_q(const QRat& q, unsigned e) {
  QRat r = 1;
  for (unsigned i = 0; i < e; ++i) r *= q;
  return r;
}

int cmp_sqrt(const QRat& a, const QRat& n) {
  if (n < 0) fail(ExactError::Code::Domain, "sqrt of negative");
  if (a < 0) return n == 0 && a == 0 ? 0 : -1;
  QRat a2 = a * a;
  return a2 < n ? -1 : (a2 > n ? 1 : 0);
}

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<QRat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const QRat& c) { return Poly({c}); }
Poly Poly::x() { return Poly({QRat(0), QRat(1)}); }
Poly Poly::linear(const QRat& a, const QRat& b) { return Poly({a, b}); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QRat Poly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : QRat(0); }
QRat Poly::leading() const { return c_.empty() ? QRat(0) : c_.back(); }

QRat Poly::operator()(const QRat& x) const {
  QRat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Poly Poly::derive() const {
  std::vector<QRat> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return Poly(std::move(d));
}

Poly Poly::antiderive() const {
  std::vector<QRat> d(c_.size() + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) d[i + 1] = c_[i] / static_cast<long>(i + 1);
  return Poly(std::move(d));
}

Poly Poly::compose(const Poly& q) const {
  Poly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= q;
    acc += constant(*it);
  }
  return acc;
}

Poly Poly::shift(const QRat& c) const {
  // Taylor shift by repeated synthetic division.
  std::vector<QRat> a = c_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) a[j - 1] += c * a[j];
  return Poly(std::move(a));
}

Poly Poly::pow(unsigned e) const {
  Poly r = constant(1);
  for (unsigned i = 0; i < e; ++i) r *= *this;
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<QRat> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  c_ = std::move(r);
  trim();
  return *this;
}

Poly& Poly::operator*=(const QRat& s) {
  for (auto& v : c_) v *= s;
  trim();
  return *this;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const QRat& v = c_[i];
    if (v == 0) continue;
    QRat mag = abs_q(v);
    if (out.empty())
      out += v < 0 ? "-" : "";
    else
      out += v < 0 ? " - " : " + ";
    bool unit = mag == 1 && i > 0;
    if (!unit) out += cert::to_string(mag);
    if (i > 0) out += (unit ? "" : "*") + var + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out;
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ExactError::Code::Domain, "polynomial division by zero");
  std::vector<QRat> r = a.coeffs();
  const int db = b.degree();
  const QRat lead = b.leading();
  std::vector<QRat> q(std::max(0, a.degree() - db + 1));
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    QRat f = r[i] / lead;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.coeffs()[j];
  }
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).rem;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * QRat(1 / a.leading());
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p;
  Poly g = poly_gcd(p, p.derive());
  return divmod(p, g).quot;
}

QRat poly_eval(const Poly& p, const QRat& x) { return p(x); }
Poly poly_derive(const Poly& p) { return p.derive(); }

Interval::Interval(QRat l, QRat h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) fail(ExactError::Code::Domain, "interval with lo > hi");
}

// ---------------------------------------------------------------- PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<QRat> breakpoints, std::vector<Poly> pieces)
    : bp_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (bp_.size() < 2 || pieces_.size() + 1 != bp_.size())
    fail(ExactError::Code::Domain, "piecewise: need one piece per breakpoint gap");
  for (std::size_t i = 1; i < bp_.size(); ++i)
    if (!(bp_[i - 1] < bp_[i])) fail(ExactError::Code::Domain, "piecewise: breakpoints not increasing");
}

QRat PiecewisePoly::operator()(const QRat& x) const {
  if (x < lo() || x > hi()) fail(ExactError::Code::Domain, "piecewise: point outside domain");
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (x <= bp_[i + 1]) return pieces_[i](x);
  return pieces_.back()(x);
}

QRat PiecewisePoly::integrate(const QRat& a, const QRat& b) const {
  if (a > b) return -integrate(b, a);
  if (a < lo() || b > hi()) fail(ExactError::Code::Domain, "piecewise: integration range outside domain");
  QRat total = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    QRat l = std::max(a, bp_[i]);
    QRat h = std::min(b, bp_[i + 1]);
    if (l >= h) continue;
    Poly F = pieces_[i].antiderive();
    total += F(h) - F(l);
  }
  return total;
}

QRat integrate_piecewise(const PiecewisePoly& f, const QRat& a, const QRat& b) { return f.integrate(a, b); }

// ---------------------------------------------------------------- Sturm

namespace {

std::vector<Poly> sturm_chain(const Poly& q) {
  std::vector<Poly> s{q, q.derive()};
  while (!s.back().is_zero()) {
    Poly r = divmod(s[s.size() - 2], s.back()).rem;
    s.push_back(-r);
  }
  s.pop_back();
  return s;
}

int variations(const std::vector<int>& signs) {
  int v = 0, prev = 0;
  for (int sg : signs) {
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++v;
    prev = sg;
  }
  return v;
}

int variations_at(const std::vector<Poly>& chain, const QRat& x) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& p : chain) s.push_back(sign(p(x)));
  return variations(s);
}

int variations_at_inf(const std::vector<Poly>& chain) {
  std::vector<int> s;
  for (const auto& p : chain) s.push_back(sign(p.leading()));
  return variations(s);
}

Poly deflate(const Poly& q, const QRat& r) { return divmod(q, Poly::linear(-r, 1)).quot; }

void require_nonzero(const Poly& p) {
  if (p.is_zero()) fail(ExactError::Code::Domain, "root count of the zero polynomial");
}

QRat cauchy_bound(const Poly& p) {
  QRat m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, abs_q(p.coeffs()[i] / p.leading()));
  return m + 1;
}

// Disjoint closed brackets, sorted, each holding exactly one distinct root of q.
void isolate_all(const Poly& q, const QRat& l, const QRat& h, std::vector<Interval>& out) {
  int n = count_roots(q, Interval(l, h));
  if (n == 0) return;
  if (n == 1) {
    out.emplace_back(l, h);
    return;
  }
  QRat span = h - l;
  QRat s = (l + h) / 2;
  for (int k = 3; q(s) == 0; ++k) s = l + span / k;
  isolate_all(q, l, s, out);
  isolate_all(q, s, h, out);
}

}  // namespace

int count_roots(const Poly& p, const Interval& iv) {
  require_nonzero(p);
  Poly q = squarefree_part(p);
  int cnt = 0;
  if (q(iv.lo) == 0) {
    ++cnt;
    q = deflate(q, iv.lo);
  }
  if (iv.hi != iv.lo && q(iv.hi) == 0) {
    ++cnt;
    q = deflate(q, iv.hi);
  }
  if (iv.lo < iv.hi && q.degree() > 0) {
    auto ch = sturm_chain(q);
    cnt += variations_at(ch, iv.lo) - variations_at(ch, iv.hi);
  }
  return cnt;
}

int count_roots_from(const Poly& p, const QRat& lo) {
  require_nonzero(p);
  Poly q = squarefree_part(p);
  int cnt = 0;
  if (q(lo) == 0) {
    ++cnt;
    q = deflate(q, lo);
  }
  if (q.degree() > 0) {
    auto ch = sturm_chain(q);
    cnt += variations_at(ch, lo) - variations_at_inf(ch);
  }
  return cnt;
}

Interval isolate_root(const Poly& p, const Interval& search, const QRat& width) {
  if (width <= 0) fail(ExactError::Code::Domain, "isolation width must be positive");
  int sl = sign(p(search.lo)), sh = sign(p(search.hi));
  if (sl * sh >= 0) fail(ExactError::Code::NoRoot, "no sign change on search interval");
  if (count_roots(p, search) != 1) fail(ExactError::Code::Ambiguous, "more than one root in search interval");
  QRat lo = search.lo, hi = search.hi;
  while (hi - lo > width) {
    QRat m = (lo + hi) / 2;
    int sm = sign(p(m));
    if (sm == 0) {
      // Exact root: any symmetric window inside the search interval works.
      QRat d = std::min<QRat>({width / 4, m - search.lo, search.hi - m});
      return Interval(m - d, m + d);
    }
    (sm == sl ? lo : hi) = m;
  }
  // Snap to the grid width*Z.
  auto cell_ok = [&](const QRat& a) {
    QRat b = a + width;
    return a >= search.lo && b <= search.hi && p(a) != 0 && p(b) != 0 && sign(p(a)) != sign(p(b));
  };
  QRat a = QRat(floor_q(lo / width)) * width;
  if (hi <= a + width) {
    if (cell_ok(a)) return Interval(a, a + width);
  } else {
    QRat g = a + width;
    int sg = sign(p(g));
    if (sg != 0) {
      QRat c = sg == sl ? g : g - width;
      if (cell_ok(c)) return Interval(c, c + width);
    }
  }
  return Interval(lo, hi);
}

std::string to_string(SignReport::Kind k) {
  switch (k) {
    case SignReport::Kind::AllPositive: return "AllPositive";
    case SignReport::Kind::AllNegative: return "AllNegative";
    case SignReport::Kind::NonNegative: return "NonNegative";
    case SignReport::Kind::NonPositive: return "NonPositive";
    case SignReport::Kind::ChangesOnceAt: return "ChangesOnceAt";
    case SignReport::Kind::Mixed: return "Mixed";
  }
  return "?";
}

SignReport sign_on_interval(const Poly& p, const Interval& iv, const QRat& width) {
  SignReport rep;
  if (p.is_zero()) return rep;
  Poly q = squarefree_part(p);
  std::vector<Interval> br;
  isolate_all(q, iv.lo, iv.hi, br);
  std::vector<QRat> pts{iv.lo, iv.hi};
  for (const auto& b : br) {
    pts.push_back(b.lo);
    pts.push_back(b.hi);
  }
  if (br.empty()) pts.push_back(iv.mid());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<int> signs;
  for (const auto& x : pts)
    if (int s = sign(p(x)); s != 0) signs.push_back(s);
  if (signs.empty()) return rep;  // degenerate interval at a root
  int changes = 0;
  for (std::size_t i = 1; i < signs.size(); ++i) changes += signs[i] != signs[i - 1];
  if (changes == 0) {
    bool pos = signs.front() > 0;
    if (br.empty())
      rep.kind = pos ? SignReport::Kind::AllPositive : SignReport::Kind::AllNegative;
    else
      rep.kind = pos ? SignReport::Kind::NonNegative : SignReport::Kind::NonPositive;
  } else if (changes == 1) {
    // Touching zeros may sit beside the crossing; only interior brackets can cross.
    for (const auto& b : br) {
      if (sign(p(b.lo)) * sign(p(b.hi)) < 0) {
        rep.kind = SignReport::Kind::ChangesOnceAt;
        rep.bracket = isolate_root(p, b, width);
        rep.direction = signs.back();
        break;
      }
    }
  }
  return rep;
}

SignReport sign_on_ray(const Poly& p, const QRat& lo, const QRat& width) {
  if (p.is_zero()) return {};
  QRat hi = std::max(lo, cauchy_bound(p)) + 1;
  return sign_on_interval(p, Interval(lo, hi), width);
}

// ---------------------------------------------------------------- enclosures

Interval poly_range(const Poly& p, const Interval& iv) {
  QRat m = iv.mid();
  QRat r = iv.width() / 2;
  Poly q = p.shift(m);
  QRat c0 = q.coeff(0);
  QRat spread = 0, rk = 1;
  for (int k = 1; k <= q.degree(); ++k) {
    rk *= r;
    spread += abs_q(q.coeffs()[k]) * rk;
  }
  return Interval(c0 - spread, c0 + spread);
}

QRat sup_rational_bound(const Poly& num0, const Poly& den0, const Interval& iv, int budget,
                        std::optional<QRat> target) {
  if (den0.is_zero()) fail(ExactError::Code::PoleInInterval, "zero denominator");
  if (count_roots(den0, iv) > 0) fail(ExactError::Code::PoleInInterval, "denominator vanishes in interval");
  Poly num = num0, den = den0;
  if (sign(den(iv.lo)) < 0) {
    num = -num;
    den = -den;
  }
  if (iv.lo == iv.hi) return num(iv.lo) / den(iv.lo);

  struct Box {
    Interval iv;
    std::optional<QRat> ub;  // empty while the denominator enclosure is not positive
  };
  auto make = [&](const Interval& b) {
    Box box{b, std::nullopt};
    Interval N = poly_range(num, b), D = poly_range(den, b);
    if (D.lo > 0) box.ub = N.hi >= 0 ? QRat(N.hi / D.lo) : QRat(N.hi / D.hi);
    return box;
  };
  auto better = [](const Box& a, const Box& b) {
    if (!a.ub) return false;
    if (!b.ub) return true;
    return *a.ub < *b.ub;
  };
  std::priority_queue<Box, std::vector<Box>, decltype(better)> boxes(better);
  boxes.push(make(iv));
  for (int step = 0; step < budget; ++step) {
    const Box& top = boxes.top();
    if (top.ub && target && *top.ub < *target) break;
    Interval b = top.iv;
    boxes.pop();
    QRat m = b.mid();
    boxes.push(make(Interval(b.lo, m)));
    boxes.push(make(Interval(m, b.hi)));
  }
  if (!boxes.top().ub) fail(ExactError::Code::BudgetExhausted, "denominator enclosure not positive within budget");
  return *boxes.top().ub;
}

RatFn RatFn::reduced() const {
  Poly g = poly_gcd(num, den);
  if (g.degree() <= 0) return *this;
  return {divmod(num, g).quot, divmod(den, g).quot};
}

QRat RatFn::operator()(const QRat& x) const {
  RatFn r = reduced();
  QRat d = r.den(x);
  if (d == 0) fail(ExactError::Code::PoleInInterval, "rational function has a pole at " + to_string(x));
  return r.num(x) / d;
}

}  // namespace cert
