#include "cert/surfaces.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <utility>

namespace cert {

namespace {

[[noreturn]] void fail(SurfaceError::Code c, const std::string& msg) { throw SurfaceError(c, msg); }

std::string join_path(const std::vector<int>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "." : "") + std::to_string(p[i]);
  return s;
}

std::string label_of(bool bracket, const std::vector<int>& p) {
  return (bracket ? "[" : "(") + join_path(p) + (bracket ? "]" : ")");
}

// (a.b.1) names the same curve as (a.b).
std::vector<int> canonical(std::vector<int> p) {
  while (p.size() > 1 && p.back() == 1) p.pop_back();
  return p;
}

ChainDescriptor::Group parse_group(std::string_view body, bool bracket, std::string_view whole) {
  ChainDescriptor::Group g;
  g.bracket = bracket;
  const bool commas = body.find(',') != std::string_view::npos;
  const bool dots = body.find('.') != std::string_view::npos;
  if (commas && dots) fail(SurfaceError::Code::Parse, "mixed separators in '" + std::string(whole) + "'");
  const char sep = commas ? ',' : '.';
  std::size_t pos = 0;
  while (true) {
    std::size_t next = body.find(sep, pos);
    std::string_view tok = body.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (tok.empty() || tok.size() > 4 || !std::all_of(tok.begin(), tok.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      fail(SurfaceError::Code::Parse, "bad index in '" + std::string(whole) + "'");
    g.path.push_back(std::stoi(std::string(tok)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (commas) {
    if (bracket || !std::all_of(g.path.begin(), g.path.end(), [](int v) { return v == 1; }))
      fail(SurfaceError::Code::Parse, "comma form only lists free points, e.g. (1,1)");
    g.path = {static_cast<int>(g.path.size())};
  }
  return g;
}

}  // namespace

ChainDescriptor ChainDescriptor::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) fail(SurfaceError::Code::Parse, "empty chain descriptor");
  ChainDescriptor d;
  std::size_t pos = 0;
  while (pos < s.size()) {
    char open = s[pos];
    if (open != '(' && open != '[') fail(SurfaceError::Code::Parse, "expected '(' or '[' in '" + s + "'");
    char close = open == '(' ? ')' : ']';
    std::size_t end = s.find(close, pos);
    if (end == std::string::npos) fail(SurfaceError::Code::Parse, "unbalanced group in '" + s + "'");
    d.groups_.push_back(parse_group(std::string_view(s).substr(pos + 1, end - pos - 1), open == '[', s));
    pos = end + 1;
  }
  for (std::size_t gi = 0; gi < d.groups_.size(); ++gi) {
    const auto& g = d.groups_[gi];
    if (!g.bracket && gi > 0) fail(SurfaceError::Code::Parse, "only the first group may be parenthesized");
    for (std::size_t e = 0; e < g.path.size(); ++e) {
      int lo = (e == 0 && !g.bracket && g.path.size() == 1) ? 1 : 2;
      if (g.path[e] < lo) fail(SurfaceError::Code::Parse, "index too small in '" + s + "'");
    }
  }

  // A leading restart group sits on a single first blow-up.
  std::map<std::pair<int, std::string>, int> where;  // (group, canonical path) -> step
  auto add = [&](BlowUp b) {
    d.steps_.push_back(std::move(b));
    return static_cast<int>(d.steps_.size()) - 1;
  };
  for (std::size_t gi = 0; gi < d.groups_.size(); ++gi) {
    const auto& g = d.groups_[gi];
    const int key = static_cast<int>(gi);
    if (g.bracket) {
      if (d.steps_.empty()) add({"(1)", BlowUp::Position::Origin, -1});
      where[{key, "1"}] = d.length() - 1;
      for (int n = 2; n <= g.path[0]; ++n)
        where[{key, std::to_string(n)}] = add({label_of(true, {n}), BlowUp::Position::Free, -1});
    } else {
      for (int n = 1; n <= g.path[0]; ++n)
        where[{key, std::to_string(n)}] =
            add({label_of(false, {n}), n == 1 ? BlowUp::Position::Origin : BlowUp::Position::Free, -1});
    }
    for (std::size_t e = 1; e < g.path.size(); ++e) {
      std::vector<int> parent(g.path.begin(), g.path.begin() + static_cast<long>(e));
      std::vector<int> older = parent;
      older.back() -= 1;
      const int attach = where.at({key, join_path(canonical(older))});
      for (int n = 2; n <= g.path[e]; ++n) {
        std::vector<int> lab = parent;
        lab.push_back(n);
        auto p = n == 2 ? BlowUp::Position::AtInfinity : BlowUp::Position::AtZero;
        where[{key, join_path(lab)}] = add({label_of(g.bracket, lab), p, attach});
      }
    }
  }
  return d;
}

std::string ChainDescriptor::to_string() const {
  std::string s;
  for (const auto& g : groups_) s += label_of(g.bracket, g.path);
  return s;
}

long DivisorClass::self_intersection() const {
  long s = static_cast<long>(u) * u;
  for (int w : weights) s -= static_cast<long>(w) * w;
  return s;
}

long DivisorClass::canonical_pairing() const {
  long s = -3L * u;
  for (int w : weights) s += w;
  return s;
}

long chi(const DivisorClass& c) {
  long v = static_cast<long>(c.u + 1) * (c.u + 2) / 2;
  for (int w : c.weights) v -= static_cast<long>(w) * (w + 1) / 2;
  return v;
}

// ------------------------------------------------------------------ closed forms

namespace {

struct FamilyShape {
  ChainFamily family;
  long i = 0, j = 0, k = 0;  // k is the last index: k for ThreeLevel, l for DoubleTail
};

FamilyShape family_shape(const ChainDescriptor& chain) {
  const auto& gs = chain.groups();
  if (gs.size() != 1 || gs[0].bracket)
    fail(SurfaceError::Code::Unsupported, "no closed form for " + chain.to_string() + "; use the oracle");
  const auto& p = gs[0].path;
  if (p.size() == 1) return {ChainFamily::Run, p[0], 0, 0};
  if (p.size() == 2) return {ChainFamily::TwoLevel, p[0], p[1], 0};
  if (p.size() == 3 && p[0] == 2) return {ChainFamily::ThreeLevel, 2, p[1], p[2]};
  if (p.size() == 4 && p[0] == 2 && p[2] == 2) return {ChainFamily::DoubleTail, 2, p[1], p[3]};
  fail(SurfaceError::Code::Unsupported, "no closed form for " + chain.to_string() + "; use the oracle");
}

void check_weights(const ChainDescriptor& chain, const DivisorClass& c) {
  if (static_cast<int>(c.weights.size()) != chain.length())
    fail(SurfaceError::Code::Domain, "need one weight per blow-up of " + chain.to_string());
  if (c.u < 0 || std::any_of(c.weights.begin(), c.weights.end(), [](int w) { return w < 0; }))
    fail(SurfaceError::Code::Domain, "degree and weights must be nonnegative");
}

long sum(const std::vector<int>& v, std::size_t from, std::size_t to) {
  return std::accumulate(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(to), 0L);
}

bool nonincreasing(const std::vector<int>& v, std::size_t from, std::size_t to) {
  for (std::size_t t = from + 1; t < to; ++t)
    if (v[t] > v[t - 1]) return false;
  return true;
}

long floor_long(const QRat& q) { return floor_q(q).get_si(); }

H0Result result(H0Result::Kind k, long v, const char* rule) { return {k, std::max(v, 0L), rule}; }

QRat polys_dim(int u) { return QRat((u + 1) * (u + 2), 2); }

}  // namespace

ChainFamily chain_family(const ChainDescriptor& chain) { return family_shape(chain).family; }

WeightedSum weighted_w(const ChainDescriptor& chain, const DivisorClass& c) {
  FamilyShape f = family_shape(chain);
  check_weights(chain, c);
  const auto& w = c.weights;
  const std::size_t n = w.size();
  switch (f.family) {
    case ChainFamily::Run: return {sum(w, 0, n), 1, f.i};
    case ChainFamily::TwoLevel: {
      const std::size_t head = static_cast<std::size_t>(f.i - 1);
      return {f.j * sum(w, 0, head) + sum(w, head, n), f.j, (f.i - 1) * f.j + 1};
    }
    case ChainFamily::ThreeLevel: {
      const long j = f.j, k = f.k, beta = j * k + 1;
      const std::size_t mid = static_cast<std::size_t>(j);  // w1, then j-1 middle weights
      return {((j - 1) * k + 1) * w[0] + k * sum(w, 1, mid) + sum(w, mid, n), beta - k, beta};
    }
    case ChainFamily::DoubleTail: {
      const long j = f.j, l = f.k, alpha = j * l + j - 1;
      const std::size_t mid = static_cast<std::size_t>(j);
      return {alpha * w[0] + (l + 1) * sum(w, 1, mid) + l * w[mid] + sum(w, mid + 1, n), alpha, j * l + l + j};
    }
  }
  return {};
}

std::string to_string(H0Result::Kind k) {
  switch (k) {
    case H0Result::Kind::Exact: return "Exact";
    case H0Result::Kind::UpperBound: return "UpperBound";
    case H0Result::Kind::Zero: return "Zero";
  }
  return "?";
}

H0Result h0_closed(const ChainDescriptor& chain, const DivisorClass& c) {
  FamilyShape f = family_shape(chain);
  WeightedSum ws = weighted_w(chain, c);
  const auto& w = c.weights;
  const std::size_t n = w.size();
  const long u = c.u;
  const QRat W(ws.w), A(ws.alpha), B(ws.beta);
  const QRat top = polys_dim(c.u);

  if (ws.beta * u < ws.w) return {H0Result::Kind::Zero, 0, "zero"};

  switch (f.family) {
    case ChainFamily::Run: {
      const long len = f.i;
      if (u >= ws.w && nonincreasing(w, 0, n)) return result(H0Result::Kind::Exact, chi(c), "exact");
      if (u >= ws.w) return result(H0Result::Kind::UpperBound, floor_long(top - W * (W + len) / (2 * len)), "schwarz");
      // Here u < w <= len*u, so len >= 2.
      const QRat t(len * u - ws.w);
      const QRat q = t * t / (2 * len * (len - 1)) + t / (len - 1) + 1;
      return result(H0Result::Kind::UpperBound, floor_long(q), "tail");
    }
    case ChainFamily::TwoLevel: {
      const long i = f.i, j = f.j;
      const std::size_t head = static_cast<std::size_t>(i - 1);
      const bool exact = u >= sum(w, 0, head) + w[head] && nonincreasing(w, 0, head) &&
                         w[head - 1] >= sum(w, head, n) && nonincreasing(w, head, n);
      if (exact) return result(H0Result::Kind::Exact, chi(c), "exact");
      if (ws.w <= j * u) {
        const QRat s = W + QRat(i * j, 2);
        return result(H0Result::Kind::UpperBound, floor_long(top - s * s / (2 * j * B) + QRat(i + j - 1, 8)),
                      "schwarz");
      }
      if (i <= 3) {
        const QRat t(ws.beta * u - ws.w), d = 2 * B * (B - j);
        const QRat q = t * t / d + (2 * B - j + 1) * t / d + 1 + QRat((i - 1) * (j - 1) * (j - 1)) / (8 * B);
        return result(H0Result::Kind::UpperBound, floor_long(q), "tail");
      }
      return result(H0Result::Kind::UpperBound, floor_long(top), "dimension");
    }
    case ChainFamily::ThreeLevel: {
      const long j = f.j, k = f.k;
      const std::size_t mid = static_cast<std::size_t>(j);
      const bool exact = u >= w[0] + w[1] && w[0] >= sum(w, 1, mid) + w[mid] && nonincreasing(w, 1, mid) &&
                         w[mid - 1] >= sum(w, mid, n) && nonincreasing(w, mid, n);
      if (exact) return result(H0Result::Kind::Exact, chi(c), "exact");
      if (ws.w <= ws.alpha * u) {
        const QRat s = W + QRat((2 * j - 1) * k + 1, 2);
        return result(H0Result::Kind::UpperBound, floor_long(top - s * s / (2 * A * B) + QRat(j + k, 8)),
                      "schwarz");
      }
      const QRat t(ws.beta * u - ws.w), d = 2 * B * k;
      const QRat q = t * t / d + (B + k + 1) * t / d + 1 + QRat(j + k, 8);
      return result(H0Result::Kind::UpperBound, floor_long(q), "tail");
    }
    case ChainFamily::DoubleTail: {
      const long j = f.j;
      const std::size_t mid = static_cast<std::size_t>(j);
      const bool exact = u >= w[0] + w[1] && w[0] >= sum(w, 1, mid) + w[mid] && nonincreasing(w, 1, mid) &&
                         w[mid - 1] >= w[mid] + w[mid + 1] && nonincreasing(w, mid + 1, n) &&
                         w[mid] >= sum(w, mid + 1, n);
      if (exact) return result(H0Result::Kind::Exact, chi(c), "exact");
      return result(H0Result::Kind::UpperBound, floor_long(top), "dimension");
    }
  }
  return {};
}

// ------------------------------------------------------------------ oracle

namespace {

using Form = std::vector<QRat>;                   // linear form in the unknown coefficients
using Local = std::map<std::pair<int, int>, Form>;  // (deg x, deg y) -> coefficient

void axpy(Form& acc, const QRat& s, const Form& v) {
  for (std::size_t t = 0; t < v.size(); ++t)
    if (v[t] != 0) acc[t] += s * v[t];
}

class RankAccumulator {
 public:
  explicit RankAccumulator(std::size_t dim) : dim_(dim) {}
  std::size_t rank() const { return basis_.size(); }
  bool full() const { return basis_.size() == dim_; }
  void add(Form row) {
    for (const auto& [pivot, b] : basis_)
      if (row[pivot] != 0) axpy(row, QRat(-row[pivot]), b);
    for (std::size_t t = 0; t < dim_; ++t) {
      if (row[t] != 0) {
        QRat inv = 1 / row[t];
        for (auto& v : row) v *= inv;
        for (auto& [pivot, b] : basis_)
          if (b[t] != 0) axpy(b, QRat(-b[t]), row);
        basis_.emplace_back(t, std::move(row));
        return;
      }
    }
  }

 private:
  std::size_t dim_;
  std::vector<std::pair<std::size_t, Form>> basis_;
};

QRat binom(int n, int k) {
  ZInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return QRat(r);
}

// Moves the local equation to the chosen point of the new exceptional curve
// {x = 0}, after dividing by x^w.
Local blow_up(const Local& f, int w, BlowUp::Position pos, const QRat& c) {
  Local out;
  for (const auto& [mono, form] : f) {
    auto [a, b] = mono;
    if (a + b < w) continue;  // already forced to vanish
    if (pos == BlowUp::Position::AtInfinity) {
      auto& slot = out[{a + b - w, a}];
      if (slot.empty()) slot.assign(form.size(), QRat(0));
      axpy(slot, QRat(1), form);
      continue;
    }
    QRat cp = 1;  // c^(b-k), built from k = b downwards
    for (int k = b; k >= 0; --k) {
      if (c != 0 || k == b) {
        auto& slot = out[{a + b - w, k}];
        if (slot.empty()) slot.assign(form.size(), QRat(0));
        axpy(slot, QRat(binom(b, k) * cp), form);
      }
      cp *= c;
    }
  }
  return out;
}

QRat small_rational(std::mt19937_64& g) {
  std::uniform_int_distribution<int> num(1, 7), den(1, 7), sgn(0, 1);
  return frac(sgn(g) ? num(g) : -num(g), den(g));
}

long realize(const ChainDescriptor& chain, const DivisorClass& c, const OracleOptions& opt, int sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(sample)};
  std::mt19937_64 g(seq);
  const int u = c.u;
  const std::size_t dim = static_cast<std::size_t>((u + 1) * (u + 2) / 2);
  Local f;
  std::size_t col = 0;
  for (int a = 0; a <= u; ++a)
    for (int b = 0; a + b <= u; ++b) {
      Form e(dim, QRat(0));
      e[col++] = 1;
      f[{a, b}] = std::move(e);
    }
  RankAccumulator acc(dim);
  const auto& steps = chain.steps();
  for (std::size_t t = 0; t < steps.size() && !acc.full(); ++t) {
    const int w = c.weights[t];
    for (const auto& [mono, form] : f)
      if (mono.first + mono.second < w) acc.add(form);
    if (t + 1 == steps.size()) break;
    const auto pos = steps[t + 1].position;
    QRat where = 0;
    if (pos == BlowUp::Position::Free) {
      where = small_rational(g);
      if (opt.collinear >= 2 && static_cast<int>(t + 1) < opt.collinear) where = 0;
    }
    f = blow_up(f, w, pos, where);
  }
  return static_cast<long>(dim - acc.rank());
}

void check_oracle(const ChainDescriptor& chain, const DivisorClass& c, const OracleOptions& opt) {
  check_weights(chain, c);
  if (c.u > opt.max_degree) fail(SurfaceError::Code::TooLarge, "degree above the oracle cap");
  if (chain.length() > opt.max_length) fail(SurfaceError::Code::TooLarge, "chain longer than the oracle cap");
  if (opt.samples < 1) fail(SurfaceError::Code::Domain, "need at least one sample");
  if (opt.collinear >= 2) {
    const auto& steps = chain.steps();
    for (int t = 1; t < opt.collinear; ++t)
      if (t >= chain.length() || steps[static_cast<std::size_t>(t)].position != BlowUp::Position::Free)
        fail(SurfaceError::Code::Domain, "collinear prefix must consist of free points");
  }
}

}  // namespace

std::vector<long> h0_oracle_samples(const ChainDescriptor& chain, const DivisorClass& c, const OracleOptions& opt) {
  check_oracle(chain, c, opt);
  std::vector<long> out;
  for (int s = 0; s < opt.samples; ++s) out.push_back(realize(chain, c, opt, s));
  return out;
}

long h0_oracle(const ChainDescriptor& chain, const DivisorClass& c, const OracleOptions& opt) {
  check_oracle(chain, c, opt);
  const long floor_value = std::max(chi(c), 0L);
  long best = -1;
  for (int s = 0; s < opt.samples; ++s) {
    long v = realize(chain, c, opt, s);
    if (best < 0 || v < best) best = v;
    if (best == floor_value) break;
  }
  return best;
}

std::vector<std::string> default_grid_chains() {
  return {"(1)", "(2)", "(3)", "(4)", "(2.2)", "(2.3)", "(3.2)", "(3.3)"};
}

GridReport closed_vs_oracle_grid(const std::vector<std::string>& chains, int max_u, int max_weight,
                                 const OracleOptions& opt) {
  GridReport rep;
  for (const auto& text : chains) {
    const auto chain = ChainDescriptor::parse(text);
    const std::size_t len = static_cast<std::size_t>(chain.length());
    for (int u = 0; u <= max_u; ++u) {
      std::vector<int> w(len, 0);
      while (true) {
        DivisorClass c{u, w};
        const H0Result closed = h0_closed(chain, c);
        const long h0 = h0_oracle(chain, c, opt);
        bool ok = h0 >= chi(c);
        switch (closed.kind) {
          case H0Result::Kind::Exact: ok = ok && h0 == closed.value; ++rep.exact_cases; break;
          case H0Result::Kind::Zero: ok = ok && h0 == 0; ++rep.zero_cases; break;
          case H0Result::Kind::UpperBound: ok = ok && h0 <= closed.value; ++rep.bound_cases; break;
        }
        ++rep.instances;
        if (!ok && ++rep.mismatches <= 10) {
          std::string ws;
          for (int x : w) ws += (ws.empty() ? "" : ",") + std::to_string(x);
          rep.failures.push_back(text + " u=" + std::to_string(u) + " w=" + ws + ": " + closed.rule + " " +
                                 std::to_string(closed.value) + ", oracle " + std::to_string(h0));
        }
        std::size_t k = 0;
        while (k < len && w[k] == max_weight) w[k++] = 0;
        if (k == len) break;
        ++w[k];
      }
    }
  }
  return rep;
}

}  // namespace cert
