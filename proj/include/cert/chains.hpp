#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cert/exact.hpp"
#include "cert/surfaces.hpp"

namespace cert {

class ChainError : public std::runtime_error {
 public:
  enum class Code { Domain, Unsupported };
  ChainError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Multiplicities, one per blow-up in process order.
using MVector = std::vector<QRat>;

struct ChainStats {
  long r = 0;
  QRat mu;
  QRat delta;  // mu - r
};

// Per-step values from the recursions: a step adds the values of the curves
// its center lies on (the newest one and, for satellites, the attached one).
std::vector<long> ramifications(const ChainDescriptor& chain);
long ramification(const ChainDescriptor& chain);
// Integer coefficients of mu at every step as a linear form in m.
std::vector<std::vector<long>> mu_coefficients(const ChainDescriptor& chain);
QRat mu(const ChainDescriptor& chain, const MVector& m);
std::vector<ChainStats> chain_stats(const ChainDescriptor& chain, const MVector& m);

// Expanded formulas for single-group chains of depth at most 4; empty otherwise.
std::optional<long> ramification_expanded(const ChainDescriptor& chain);
std::optional<std::vector<long>> mu_coefficients_expanded(const ChainDescriptor& chain);

// 0 <= m, m_first <= 3 (or < 2 with small_first), and every curve carries at
// least the total multiplicity of the later centers lying on it.
bool admissible(const ChainDescriptor& chain, const MVector& m, bool small_first = false);

// Smallest admissible vector with the given last entry: every curve carries
// exactly the load of the later centers on it. Minimizes mu for that last entry.
MVector minimal_admissible(const ChainDescriptor& chain, const QRat& last = 1);

// Sequential sampler: each entry is drawn from [0, cap] where cap is the
// slack left by the proximity inequalities; lands on the cap a quarter of the time.
MVector random_admissible(const ChainDescriptor& chain, std::mt19937_64& g, long denominator = 12);

// Defect plus the multiplicity of the attached curve, at the start of every
// satellite segment, in process order.
struct DeltaCap {
  std::vector<std::string> labels;
  std::vector<QRat> values;
  std::optional<std::string> bad_place;  // first intermediate step with delta >= 1
  bool nonincreasing() const;
};
DeltaCap delta_cap_chain(const ChainDescriptor& chain, const MVector& m);

// A restart off the older curves whose process continues through a satellite
// run of length p and then one of length q, starting from a curve with defect
// delta0 and multiplicity m0 (both below 1).
struct RestartScenario {
  int p = 2;
  int q = 2;
};
struct RestartReport {
  bool first_run_feasible = false;   // the bound forced by the first satellite run
  bool second_run_feasible = false;  // the bound forced by the second one
  bool sum_bound = false;            // delta0 + m0 >= 3/2
  bool weighted_bound = false;       // delta0 + (q^2+q+1)/(q+1)^2 m0 >= 2 - 1/(q+1)
  bool m0_bound = false;             // m0 >= q(q+1)/(q^2+q+1) >= 6/7
  // Conclusions hold whenever the scenario is feasible.
  bool ok() const {
    return !(first_run_feasible && second_run_feasible) || (sum_bound && weighted_bound && m0_bound);
  }
};
RestartReport restart_defect_check(const QRat& delta0, const QRat& m0, const RestartScenario& s);
// q(q+1)/(q^2+q+1)
QRat restart_m0_floor(int q);

}  // namespace cert
