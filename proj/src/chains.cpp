#include "cert/chains.hpp"

#include <algorithm>

namespace cert {

namespace {

// Older curves whose proper transforms pass through the center of step t.
std::vector<int> curves_through(const ChainDescriptor& chain, int t) {
  std::vector<int> out;
  if (t > 0) out.push_back(t - 1);
  const int a = chain.steps()[static_cast<std::size_t>(t)].attach;
  if (a >= 0) out.push_back(a);
  return out;
}

void check_size(const ChainDescriptor& chain, const MVector& m) {
  if (static_cast<int>(m.size()) != chain.length())
    throw ChainError(ChainError::Code::Domain, "need one multiplicity per blow-up of " + chain.to_string());
}

}  // namespace

std::vector<long> ramifications(const ChainDescriptor& chain) {
  std::vector<long> r;
  for (int t = 0; t < chain.length(); ++t) {
    long v = 1;
    for (int s : curves_through(chain, t)) v += r[static_cast<std::size_t>(s)];
    r.push_back(v);
  }
  return r;
}

long ramification(const ChainDescriptor& chain) { return ramifications(chain).back(); }

std::vector<std::vector<long>> mu_coefficients(const ChainDescriptor& chain) {
  const std::size_t n = static_cast<std::size_t>(chain.length());
  std::vector<std::vector<long>> out;
  for (int t = 0; t < chain.length(); ++t) {
    std::vector<long> c(n, 0);
    c[static_cast<std::size_t>(t)] = 1;
    for (int s : curves_through(chain, t))
      for (std::size_t k = 0; k < n; ++k) c[k] += out[static_cast<std::size_t>(s)][k];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ChainStats> chain_stats(const ChainDescriptor& chain, const MVector& m) {
  check_size(chain, m);
  const auto r = ramifications(chain);
  const auto coeff = mu_coefficients(chain);
  std::vector<ChainStats> out;
  for (std::size_t t = 0; t < r.size(); ++t) {
    QRat v = 0;
    for (std::size_t k = 0; k < m.size(); ++k) v += coeff[t][k] * m[k];
    out.push_back({r[t], v, v - r[t]});
  }
  return out;
}

QRat mu(const ChainDescriptor& chain, const MVector& m) { return chain_stats(chain, m).back().mu; }

std::optional<long> ramification_expanded(const ChainDescriptor& chain) {
  const auto& gs = chain.groups();
  if (gs.size() != 1 || gs[0].bracket || gs[0].path.size() > 4) return std::nullopt;
  const auto& p = gs[0].path;
  const long i = p[0];
  switch (p.size()) {
    case 1: return i;
    case 2: return p[1] * i;
    case 3: {
      const long j = p[1], n = p[2];
      return n * i * j - (n - 1) * (i - 1);
    }
    default: {
      const long j = p[1], k = p[2], n = p[3];
      return i * j * k * n - i * j * n - i * k * n + i * j + n * k + 2 * n * i - n - i;
    }
  }
}

std::optional<std::vector<long>> mu_coefficients_expanded(const ChainDescriptor& chain) {
  const auto& gs = chain.groups();
  if (gs.size() != 1 || gs[0].bracket || gs[0].path.size() > 4) return std::nullopt;
  const auto& p = gs[0].path;
  std::vector<long> c;
  auto push = [&](long count, long value) { c.insert(c.end(), static_cast<std::size_t>(count), value); };
  const long i = p[0];
  switch (p.size()) {
    case 1: push(i, 1); break;
    case 2: push(i - 1, p[1]); push(p[1], 1); break;
    case 3: {
      const long j = p[1], n = p[2];
      push(i - 1, (j - 1) * n + 1);
      push(j - 1, n);
      push(n, 1);
      break;
    }
    default: {
      const long j = p[1], k = p[2], n = p[3];
      push(i - 1, (j - 1) + n * ((j - 1) * (k - 1) + 1));
      push(j - 1, n * (k - 1) + 1);
      push(k - 1, n);
      push(n, 1);
    }
  }
  return c;
}

bool admissible(const ChainDescriptor& chain, const MVector& m, bool small_first) {
  if (static_cast<int>(m.size()) != chain.length()) return false;
  if (std::any_of(m.begin(), m.end(), [](const QRat& v) { return v < 0 || v > 3; })) return false;
  if (small_first && m[0] >= 2) return false;
  std::vector<QRat> load(m.size(), QRat(0));
  for (int t = 0; t < chain.length(); ++t)
    for (int s : curves_through(chain, t)) load[static_cast<std::size_t>(s)] += m[static_cast<std::size_t>(t)];
  for (std::size_t t = 0; t < m.size(); ++t)
    if (m[t] < load[t]) return false;
  return true;
}

MVector minimal_admissible(const ChainDescriptor& chain, const QRat& last) {
  const auto n = static_cast<std::size_t>(chain.length());
  MVector m(n, QRat(0));
  m[n - 1] = last;
  for (int t = chain.length() - 1; t > 0; --t)
    for (int s : curves_through(chain, t)) m[static_cast<std::size_t>(s)] += m[static_cast<std::size_t>(t)];
  return m;
}

MVector random_admissible(const ChainDescriptor& chain, std::mt19937_64& g, long denominator) {
  MVector m;
  std::vector<QRat> load;
  for (int t = 0; t < chain.length(); ++t) {
    QRat cap = 3;
    for (int s : curves_through(chain, t)) {
      const auto u = static_cast<std::size_t>(s);
      cap = std::min<QRat>(cap, m[u] - load[u]);
    }
    QRat v = cap;
    if (g() % 4 != 0) {
      const long top = floor_q(cap * denominator).get_si();
      std::uniform_int_distribution<long> pick(0, std::max(top, 0L));
      v = frac(pick(g), denominator);
    }
    for (int s : curves_through(chain, t)) load[static_cast<std::size_t>(s)] += v;
    m.push_back(v);
    load.emplace_back(0);
  }
  return m;
}

bool DeltaCap::nonincreasing() const {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[k - 1]) return false;
  return true;
}

DeltaCap delta_cap_chain(const ChainDescriptor& chain, const MVector& m) {
  if (!admissible(chain, m)) throw ChainError(ChainError::Code::Domain, "multiplicities are not admissible");
  const auto st = chain_stats(chain, m);
  DeltaCap out;
  for (int t = 0; t + 1 < chain.length(); ++t) {
    if (st[static_cast<std::size_t>(t)].delta >= 1) {
      out.bad_place = chain.steps()[static_cast<std::size_t>(t)].label;
      return out;
    }
  }
  for (int t = 1; t < chain.length(); ++t) {
    const auto& step = chain.steps()[static_cast<std::size_t>(t)];
    if (step.position != BlowUp::Position::AtInfinity) continue;
    // The segment's parent curve is renamed with a trailing ".1".
    std::string label = step.label;
    label[label.size() - 2] = '1';
    out.labels.push_back(label);
    out.values.push_back(st[static_cast<std::size_t>(t - 1)].delta + m[static_cast<std::size_t>(step.attach)]);
  }
  return out;
}

QRat restart_m0_floor(int q) { return frac(q * (q + 1), q * q + q + 1); }

RestartReport restart_defect_check(const QRat& delta0, const QRat& m0, const RestartScenario& s) {
  if (s.p < 2 || s.q < 2) throw ChainError(ChainError::Code::Unsupported, "satellite runs need length >= 2");
  if (delta0 >= 1 || m0 >= 1 || m0 < 0)
    throw ChainError(ChainError::Code::Domain, "needs delta0 < 1 and 0 <= m0 < 1");
  const long p = s.p, q = s.q, inner = (p - 1) * q + 1;
  RestartReport rep;
  rep.first_run_feasible = QRat(p * (delta0 - 1) + (1 + QRat(1, p - 1)) * m0) >= 1;
  rep.second_run_feasible = QRat(inner * delta0 + (q + QRat(1, inner)) * m0) >= 1 + p * q;
  rep.sum_bound = QRat(delta0 + m0) >= QRat(3, 2);
  rep.weighted_bound = QRat(delta0 + frac(q * q + q + 1, (q + 1) * (q + 1)) * m0) >= QRat(2 - QRat(1, q + 1));
  rep.m0_bound = m0 >= restart_m0_floor(static_cast<int>(q));
  return rep;
}

}  // namespace cert
