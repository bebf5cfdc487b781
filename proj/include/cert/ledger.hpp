#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cert/exact.hpp"

namespace cert {

class LedgerError : public std::runtime_error {
 public:
  enum class Code { Inconclusive, Domain };
  LedgerError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Integer interval [lo, hi], unbounded above when hi is empty.
struct IntRange {
  long lo = 0;
  std::optional<long> hi;
  bool contains(long x) const { return x >= lo && (!hi || x <= *hi); }
  bool bounded() const { return hi.has_value(); }
  std::string to_string() const;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

// Either a rational constant or sqrt(radicand(x))/9 for the case parameter x.
struct Threshold {
  enum class Kind { Rational, Radical };
  Kind kind = Kind::Rational;
  QRat value;
  Poly radicand;
  bool strict = true;
  std::string label;

  static Threshold rational(const QRat& v, bool strict, std::string label);
  static Threshold radical(Poly radicand, bool strict, std::string label);
  bool parametric() const { return kind == Kind::Radical && radicand.degree() > 0; }
};

struct Infimum {
  QRat value;
  std::optional<long> argmin;  // empty when the infimum is a limit that is never reached
  bool unbounded_below = false;
  std::string certificate;
};

// Exact infimum of f over the integers of r. Unbounded tails are closed by the
// sign of the derivative numerator N'D - ND' past its largest real root.
Infimum integer_infimum(const RatFn& f, const IntRange& r);

// Maximal runs of integers in r where f clears the threshold.
std::vector<IntRange> pass_set(const RatFn& f, const Threshold& t, const IntRange& r);

struct CaseSpec {
  std::string id;
  std::string anchor;
  std::string statement;
  std::string param;
  IntRange range;
  RatFn bound;
  Threshold threshold;
  // Value the text gives for the infimum; `printed_exact` false means it is only
  // claimed as a lower bound.
  std::optional<QRat> printed;
  bool printed_exact = true;
  // Extra hypothesis of the threshold lemma: side_sum - threshold <= 3 on the range.
  std::optional<Poly> side_sum;
  std::vector<std::string> notes;
};

struct CertRecord {
  std::string id;
  std::string anchor;
  std::string statement;
  std::vector<std::pair<std::string, std::string>> values;
  bool pass = false;
  bool inconclusive = false;
  std::vector<std::string> notes;
  std::optional<QRat> infimum;
  std::optional<long> argmin;

  void set(const std::string& key, const std::string& value) { values.emplace_back(key, value); }
  const std::string* value(const std::string& key) const;
};

CertRecord run_case(const CaseSpec& spec);

// Where a bad place can sit: the index path of its single-group chain and how
// the process ends there. Continuations are the places with longer paths.
struct Place {
  enum class End { Stop, Restart };
  std::vector<long> path;
  End end = End::Stop;
  int depth() const { return static_cast<int>(path.size()); }
  long at(int k) const { return path[static_cast<std::size_t>(k)]; }
  std::string to_string() const;
};

struct LedgerCase {
  std::string id;
  std::function<CertRecord()> run;
  // Places this case rules out; empty for supporting records.
  std::function<bool(const Place&)> covers;
};

// Truncation of the place space walked by the audit.
struct AuditBounds {
  long max_i = 8;
  long max_j = 130;
  long max_k = 20;
  long max_l = 60;
  long max_n = 6;
  long deep_max_j = 14;  // j bound once the path has four or more entries
  long deep_max_k = 4;   // k and l bounds once the path has five entries
  long deep_max_l = 6;
};
std::vector<Place> enumerate_places(const AuditBounds& b = {});

struct TreeAudit {
  long places = 0;
  long gaps = 0;
  long overlaps = 0;  // places covered by more than one passing case
  std::vector<std::string> gap_examples;
  // Passing cases whose places are all owned by earlier cases. Informational.
  std::vector<std::string> idle_cases;
  std::vector<std::string> failed_cases;
  std::map<std::string, long> owned;
  bool ok() const { return gaps == 0 && failed_cases.empty(); }
};

std::vector<LedgerCase> ledger_registry();
TreeAudit audit_tree(const std::vector<LedgerCase>& cases, const std::vector<CertRecord>& records,
                     const AuditBounds& b = {});

// Uniform closure of the nested family at n = 12, the i <= 5 reduction and the
// two j-gates of the adjacent family.
CertRecord replacement_closure_check();

struct LedgerReport {
  std::vector<CertRecord> records;  // registry order, audit record last
  TreeAudit audit;
  bool pass() const;
  std::vector<std::string> failing_ids() const;
};
LedgerReport run_all(int jobs = 1);

}  // namespace cert
