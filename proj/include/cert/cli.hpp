#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cert/exact.hpp"
#include "cert/ledger.hpp"

namespace cert::cli {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  QRat bisect_width{1, 1000};
  int sup_budget = 64;
  int oracle_samples = 3;
  std::uint64_t seed = 0;
  QRat gamma_margin{1, 1000};
  bool json = false;
  int jobs = 1;
};

struct Report {
  RunConfig config;
  std::vector<CertRecord> records;
  bool pass() const;
  std::vector<std::string> failing_ids() const;
};

// Record groups run by verify-all, in this order.
std::vector<CertRecord> exact_records(const RunConfig& c);
std::vector<CertRecord> phi_records(const RunConfig& c);
std::vector<CertRecord> eta_records(const RunConfig& c);
std::vector<CertRecord> threshold_records(const RunConfig& c);
std::vector<CertRecord> surface_records(const RunConfig& c);
std::vector<CertRecord> chain_records(const RunConfig& c);
std::vector<CertRecord> sigma_records();
std::vector<CertRecord> ledger_records(const RunConfig& c);
Report verify_all(const RunConfig& c);

// Single-command records. Throw ExactError / SurfaceError on bad input.
CertRecord phi_record(const QRat& alpha, const QRat& beta, const QRat& gamma);
CertRecord psi_record(const QRat& lambda, const QRat& gamma, const std::string& shape);
CertRecord h0_record(const std::string& chain, int u, const std::vector<int>& weights, bool closed, bool oracle,
                     const RunConfig& c);
CertRecord sigma_record(const QRat& sigma1, const QRat& sigma2_squared, const QRat& sigma3);

// Exact terminating decimal when the denominator is 2^a 5^b, "num/den" otherwise.
std::string decimal_text(const QRat& q);

std::string to_json(const Report& r);
std::string to_text(const Report& r);
Report from_json(const std::string& s);
Report from_text(const std::string& s);
bool same_records(const Report& a, const Report& b);

// Exit codes: 0 pass, 1 verification failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cert::cli
