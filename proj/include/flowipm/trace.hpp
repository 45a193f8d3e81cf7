#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace flowipm {

// One JSON line per record.  Non-finite values serialize as null and load
// back as NaN / infinity.
struct TraceRecord {
  long iter = 0;
  std::string phase;  // "iterate", "center", "boost"
  double t = NAN;
  double F_cert = NAN;
  double delta = NAN;
  double w_l1 = NAN;
  double coupling = NAN;
  double rho2 = NAN;
  double rho4 = NAN;
  double rho_inf = NAN;
  double energy = NAN;
  double eta = NAN;
  // phase-specific extras
  double coupling_before = NAN;
  double coupling_after = NAN;
  double W = NAN;
  double g_over_W = NAN;
  double d = NAN;
  double max_slack_times_rho = NAN;
  double r_extra_l1 = NAN;
  long m = 0;
};

class Trace {
 public:
  void add(TraceRecord rec) { records_.push_back(std::move(rec)); }
  const std::vector<TraceRecord>& records() const { return records_; }
  void write_jsonl(std::ostream& out) const;
  static std::vector<TraceRecord> read_jsonl(std::istream& in);

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace flowipm
