#include "flowipm/trace.hpp"

#include <json.hpp>
#include <ostream>

#include "flowipm/graph.hpp"

namespace flowipm {

namespace {

using nlohmann::json;

void put(json& j, const char* key, double v) {
  if (std::isfinite(v)) {
    j[key] = v;
  } else {
    j[key] = nullptr;
  }
}

double get_num(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return NAN;
  return j[key].get<double>();
}

}  // namespace

void Trace::write_jsonl(std::ostream& out) const {
  for (const TraceRecord& r : records_) {
    json j;
    j["iter"] = r.iter;
    j["phase"] = r.phase;
    j["m"] = r.m;
    put(j, "t", r.t);
    put(j, "F_t_cert", r.F_cert);
    put(j, "delta", r.delta);
    put(j, "w_l1", r.w_l1);
    put(j, "coupling", r.coupling);
    put(j, "rho2", r.rho2);
    put(j, "rho4", r.rho4);
    put(j, "rhoinf", r.rho_inf);
    put(j, "energy", r.energy);
    put(j, "eta", r.eta);
    put(j, "coupling_before", r.coupling_before);
    put(j, "coupling_after", r.coupling_after);
    put(j, "W", r.W);
    put(j, "g_over_W", r.g_over_W);
    put(j, "d", r.d);
    put(j, "max_slack_times_rho", r.max_slack_times_rho);
    put(j, "r_extra_l1", r.r_extra_l1);
    out << j.dump() << "\n";
  }
}

std::vector<TraceRecord> Trace::read_jsonl(std::istream& in) {
  std::vector<TraceRecord> recs;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      throw GraphError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
    TraceRecord r;
    r.iter = j.value("iter", 0L);
    r.phase = j.value("phase", std::string());
    r.m = j.value("m", 0L);
    r.t = get_num(j, "t");
    r.F_cert = get_num(j, "F_t_cert");
    r.delta = get_num(j, "delta");
    r.w_l1 = get_num(j, "w_l1");
    r.coupling = get_num(j, "coupling");
    r.rho2 = get_num(j, "rho2");
    r.rho4 = get_num(j, "rho4");
    r.rho_inf = get_num(j, "rhoinf");
    r.energy = get_num(j, "energy");
    r.eta = get_num(j, "eta");
    r.coupling_before = get_num(j, "coupling_before");
    r.coupling_after = get_num(j, "coupling_after");
    r.W = get_num(j, "W");
    r.g_over_W = get_num(j, "g_over_W");
    r.d = get_num(j, "d");
    r.max_slack_times_rho = get_num(j, "max_slack_times_rho");
    r.r_extra_l1 = get_num(j, "r_extra_l1");
    recs.push_back(std::move(r));
  }
  return recs;
}

}  // namespace flowipm
