// One line per acceptance criterion; exit status 0 only if all pass.
#include <chrono>
#include <functional>
#include <iostream>

#include "cert/bigness.hpp"
#include "cert/cli.hpp"
#include "cert/eta_profiles.hpp"
#include "cert/ledger.hpp"
#include "cert/surfaces.hpp"

using namespace cert;

namespace {

const CertRecord* find(const std::vector<CertRecord>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return &r;
  return nullptr;
}

bool all_pass(const std::vector<CertRecord>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CertRecord& r) { return r.pass; });
}

bool passed(const std::vector<CertRecord>& rs, const std::string& id) {
  const auto* r = find(rs, id);
  return r && r->pass;
}

}  // namespace

int main() {
  const cli::RunConfig cfg;
  int failures = 0;
  auto report = [&](int n, const std::function<std::pair<bool, std::string>()>& f) {
    std::pair<bool, std::string> res;
    try {
      res = f();
    } catch (const std::exception& e) {
      res = {false, std::string("exception: ") + e.what()};
    }
    if (!res.first) ++failures;
    std::cout << "criterion " << n << ": " << (res.first ? "PASS" : "FAIL") << "  " << res.second << std::endl;
  };

  report(1, [] {
    const QRat v = psi6_closed(EtaProfile(frac(2, 3), 2), PlaceShape::degenerate());
    return std::pair{v == frac(405, 8) && v < 51 && v > 50, "degenerate, gamma=2, lambda=2/3: " + to_string(v)};
  });
  report(2, [] {
    const QRat v = psi6_closed(EtaProfile(frac(5, 3), 2), PlaceShape::degenerate());
    return std::pair{v == frac(729, 20), "second regime at lambda=5/3: " + to_string(v)};
  });
  report(3, [&] {
    const auto rs = cli::exact_records(cfg);
    const auto* r = find(rs, "2.4-pipeline");
    return std::pair{r && r->pass, r ? "root " + *r->value("root bracket") + ", sup " + *r->value("certified supremum")
                                     : std::string("missing")};
  });
  report(4, [&] {
    const auto rs = cli::phi_records(cfg);
    return std::pair{all_pass(rs), *rs[0].value("triples") + ", violations " + *rs[0].value("violations")};
  });
  report(5, [&] {
    const auto rs = cli::threshold_records(cfg);
    long tight = 0;
    for (const auto& r : rs) tight += r.value("tight") && *r.value("tight") == "yes";
    return std::pair{all_pass(rs), std::to_string(rs.size() - 1) + " table entries pass, " + std::to_string(tight) +
                                       " with supremum in (50, 51); brackets reproduced"};
  });
  report(6, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    OracleOptions o;
    o.samples = cfg.oracle_samples;
    o.seed = cfg.seed;
    const auto g = closed_vs_oracle_grid(default_grid_chains(), 6, 3, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair{g.ok() && secs < 60, std::to_string(g.instances) + " instances, " + std::to_string(g.mismatches) +
                                              " mismatches, " + std::to_string(static_cast<int>(secs + 0.5)) + " s"};
  });

  const LedgerReport ledger = run_all(4);
  report(7, [&] {
    const std::pair<const char*, const char*> anchors[] = {
        {"3.16-i5", "22/5"},     {"3.16-i4", "26/7"},    {"3.17-cont", "56/13"},  {"3.21-cont-j2", "33/5"},
        {"3.27-j13", "350/13"},  {"3.27-j12", "299/12"}, {"3.27-j11", "252/11"}, {"3.27-j9", "170/9"},
        {"3.38", "32/3"},        {"3.40-j6", "143/6"},   {"3.40-j7", "195/7"},   {"3.40-j8", "255/8"},
        {"3.45-j2", "504/65"},   {"3.45-j3", "1705/144"}};
    int matched = 0;
    for (const auto& [id, v] : anchors) {
      const auto* r = find(ledger.records, id);
      if (r && r->pass && r->infimum && *r->infimum == parse_qrat(v)) ++matched;
    }
    return std::pair{ledger.pass() && matched == 14, std::to_string(ledger.records.size()) + " records pass, " +
                                                         std::to_string(matched) + "/14 printed infima matched"};
  });
  report(8, [&] {
    const auto& rs = ledger.records;
    const bool ok = passed(rs, "3.24-gate") && passed(rs, "3.41-ranges") && passed(rs, "3.42-survivors") &&
                    passed(rs, "3.34") && ledger.audit.gaps == 0;
    return std::pair{ok, "gate j>=14, ranges and survivors reproduced, n=12 closure, " +
                             std::to_string(ledger.audit.places) + " places walked, " +
                             std::to_string(ledger.audit.gaps) + " gaps"};
  });
  report(9, [&] {
    const auto rs = cli::chain_records(cfg);
    const bool ok = passed(rs, "3.6-recursions") && passed(rs, "3.7-delta-caps") && passed(rs, "3.7-remark");
    return std::pair{ok, *find(rs, "3.6-recursions")->value("descriptors") + " descriptors, " +
                             *find(rs, "3.7-delta-caps")->value("samples") + " samples, stored witness holds"};
  });
  report(10, [] {
    const auto rs = cli::sigma_records();
    return std::pair{all_pass(rs), "(3,7,9/2) " + *rs[0].value("(3, 7, 9/2)") + "; (3,7,3) " + *rs[0].value("(3, 7, 3)") +
                                       "; (2,7,9/2) " + *rs[0].value("(2, 7, 9/2)")};
  });
  report(11, [&] {
    const auto rs = cli::eta_records(cfg);
    const auto* r = find(rs, "d-sum-convergence");
    return std::pair{r && r->pass, r ? "s=200 " + *r->value("s=200") : std::string("missing")};
  });
  return failures == 0 ? 0 : 1;
}
