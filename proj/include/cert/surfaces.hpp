#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cert/exact.hpp"

namespace cert {

class SurfaceError : public std::runtime_error {
 public:
  enum class Code { Parse, Unsupported, TooLarge, Domain };
  SurfaceError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// One blow-up of the process, in order. The center lies on the newest
// exceptional curve and, for satellite points, also on the proper transform of
// the curve `attach`.
struct BlowUp {
  enum class Position { Origin, Free, AtZero, AtInfinity };
  std::string label;     // "(3.2.1)" style; a renamed curve keeps its first label
  Position position = Position::Free;
  int attach = -1;       // index of the older curve for satellite points
};

// Parenthesized group first, then any number of bracketed restart groups:
// "(3.2.2)", "(2.3)[2.2]", "[2.3]". "(1,1,...,1)" is accepted for a run of free points.
class ChainDescriptor {
 public:
  struct Group {
    bool bracket = false;
    std::vector<int> path;
  };

  static ChainDescriptor parse(std::string_view text);
  const std::vector<Group>& groups() const { return groups_; }
  const std::vector<BlowUp>& steps() const { return steps_; }
  int length() const { return static_cast<int>(steps_.size()); }
  std::string to_string() const;

 private:
  std::vector<Group> groups_;
  std::vector<BlowUp> steps_;
};

struct DivisorClass {
  int u = 0;
  std::vector<int> weights;  // one per blow-up, total-transform basis, process order
  long self_intersection() const;
  long canonical_pairing() const;
};

long chi(const DivisorClass& c);

enum class ChainFamily { Run, TwoLevel, ThreeLevel, DoubleTail };
// Run: (n). TwoLevel: (i.j). ThreeLevel: (2.j.k). DoubleTail: (2.j.2.l).
ChainFamily chain_family(const ChainDescriptor& chain);

struct WeightedSum {
  long w = 0;
  long alpha = 0;
  long beta = 0;
};
WeightedSum weighted_w(const ChainDescriptor& chain, const DivisorClass& c);

struct H0Result {
  enum class Kind { Exact, UpperBound, Zero };
  Kind kind = Kind::UpperBound;
  long value = 0;
  std::string rule;  // zero, exact, schwarz, tail or dimension
};
std::string to_string(H0Result::Kind k);

H0Result h0_closed(const ChainDescriptor& chain, const DivisorClass& c);

struct OracleOptions {
  int samples = 3;
  std::uint64_t seed = 0;
  // When >= 2, the first `collinear` points are put on one line; 0 means generic.
  int collinear = 0;
  int max_degree = 12;
  int max_length = 8;
};

// h0 of each realization, in sample order.
std::vector<long> h0_oracle_samples(const ChainDescriptor& chain, const DivisorClass& c,
                                    const OracleOptions& opt = {});
// Minimum over the realizations. Stops early once a realization reaches max(chi, 0),
// which no realization can go below.
long h0_oracle(const ChainDescriptor& chain, const DivisorClass& c, const OracleOptions& opt = {});

// Closed forms against the oracle on every u <= max_u and every weight vector
// with entries in [0, max_weight].
struct GridReport {
  long instances = 0;
  long mismatches = 0;
  long exact_cases = 0;
  long zero_cases = 0;
  long bound_cases = 0;
  std::vector<std::string> failures;  // first few, human readable
  bool ok() const { return instances > 0 && mismatches == 0; }
};
GridReport closed_vs_oracle_grid(const std::vector<std::string>& chains, int max_u, int max_weight,
                                 const OracleOptions& opt = {});
// (n) for n <= 4 and (i.j) for 2 <= i, j <= 3.
std::vector<std::string> default_grid_chains();

}  // namespace cert
