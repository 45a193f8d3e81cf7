// Command-line front end: solve (DIMACS in, flow file out), audit (re-check a
// solve trace), bench (deterministic instance families, CSV out).
// Exit codes: 0 success, 1 parse error / infeasible input / failed audit
// input, 2 numerical breakdown or invariant violation.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowipm/dimacs.hpp"
#include "flowipm/driver.hpp"

using namespace flowipm;

namespace {

Method parse_method(const std::string& name) {
  if (name == "ipm") return Method::Ipm;
  if (name == "basic-ipm") return Method::BasicIpm;
  if (name == "dinic") return Method::Dinic;
  throw CLI::ValidationError("--method", "unknown method " + name);
}

// Deterministic splitmix64 stream; libc++/libstdc++ distributions are not
// pinned, so all sampling goes through this.
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

Graph gen_instance(const std::string& family, int m_target, int U, Rng& rng) {
  Graph g;
  if (family == "random") {
    g.n = std::max(4, m_target / 4);
  } else if (family == "bipartite") {
    g.n = std::max(4, m_target / 6) * 2 + 2;
  } else if (family == "path") {
    g.n = std::max(3, m_target / 2);
  } else if (family == "star") {
    g.n = std::max(4, m_target / 2 + 2);
  } else {
    throw GraphError("unknown family " + family);
  }
  g.source = 0;
  g.sink = g.n - 1;
  std::vector<double> caps;
  auto add = [&](int u, int v, double c) {
    if (u == v) return;
    g.edges.push_back({u, v});
    caps.push_back(c);
  };
  auto cap = [&]() { return 1.0 + rng.below(U); };
  if (family == "random") {
    while (static_cast<int>(caps.size()) < m_target)
      add(rng.below(g.n), rng.below(g.n), cap());
  } else if (family == "bipartite") {
    const int half = (g.n - 2) / 2;
    for (int i = 0; i < half; ++i) add(0, 1 + i, cap());
    for (int i = 0; i < half; ++i) add(1 + half + i, g.n - 1, cap());
    while (static_cast<int>(caps.size()) < m_target)
      add(1 + rng.below(half), 1 + half + rng.below(half), cap());
  } else if (family == "path") {
    for (int v = 0; v + 1 < g.n; ++v) add(v, v + 1, cap());
    while (static_cast<int>(caps.size()) < m_target) {
      const int u = rng.below(g.n - 1);
      add(u, u + 1 + rng.below(g.n - 1 - u), cap());
    }
  } else {  // star: everything through a small hub layer
    const int hubs = std::max(1, g.n / 16);
    while (static_cast<int>(caps.size()) < m_target) {
      const int h = 1 + rng.below(hubs);
      if (rng.below(2) == 0) {
        add(rng.below(g.n - 1), h, cap());
      } else {
        add(h, 1 + rng.below(g.n - 1), cap());
      }
    }
  }
  g.u_plus = Eigen::Map<Vec>(caps.data(), static_cast<long>(caps.size()));
  g.u_minus = Vec::Zero(g.m());
  return g;
}

int run_solve(const std::string& input, const std::string& output,
              const std::string& trace_path, const std::string& method,
              double eta, double c0) {
  Graph g = input.empty() || input == "-" ? parse_dimacs(std::cin)
                                          : parse_dimacs_file(input);
  DriverConfig cfg;
  cfg.method = parse_method(method);
  cfg.eta_override = eta;
  cfg.C0 = c0;
  Trace trace;
  DriverResult res = maxflow(g, cfg, trace_path.empty() ? nullptr : &trace);
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) throw GraphError("cannot open trace file " + trace_path);
    trace.write_jsonl(tf);
  }
  const FlowValidation val =
      validate_flow(g, res.flow, static_cast<double>(res.value), 1e-6);
  if (!val.ok) throw NumericalBreakdown("final flow failed validation");
  if (output.empty() || output == "-") {
    write_flow(res.flow, static_cast<double>(res.value), std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw GraphError("cannot open output file " + output);
    write_flow(res.flow, static_cast<double>(res.value), out);
  }
  std::cerr << "value=" << res.value << " iterations=" << res.iterations
            << " boosts=" << res.boosts << " eta=" << res.eta
            << " finishing_augmentation=" << res.value_augmented << "\n";
  return 0;
}

int run_audit(const std::string& trace_path) {
  std::ifstream in(trace_path);
  if (!in) throw GraphError("cannot open trace file " + trace_path);
  const auto recs = Trace::read_jsonl(in);
  long violations = 0, checked = 0;
  auto complain = [&](long iter, const std::string& what) {
    ++violations;
    std::cerr << "audit: iter " << iter << ": " << what << "\n";
  };
  for (const auto& r : recs) {
    if (r.phase == "iterate") {
      if (std::isfinite(r.rho2) && std::isfinite(r.energy)) {
        ++checked;
        const double lhs = r.rho2 * r.rho2;
        if (std::abs(lhs - r.energy) > 1e-8 * std::max({1.0, lhs, r.energy}))
          complain(r.iter, "congestion norm--energy identity violated");
      }
      if (std::isfinite(r.w_l1) && r.m > 0 && r.w_l1 > 3.0 * r.m * (1 + 1e-9))
        complain(r.iter, "weight budget above 3m");
    } else if (r.phase == "center") {
      if (std::isfinite(r.coupling_before) && r.coupling_before <= 0.01) {
        ++checked;
        const double bound =
            10.0 * r.coupling_before * r.coupling_before + 1e-12;
        if (r.coupling_after > bound * (1 + 1e-9))
          complain(r.iter, "recentering contraction violated");
      }
    } else if (r.phase == "boost") {
      ++checked;
      if (std::isfinite(r.g_over_W) && std::isfinite(r.d) &&
          r.g_over_W >= r.d)
        complain(r.iter, "energy gain per budget not under d");
      if (std::isfinite(r.rho_inf) && std::isfinite(r.rho2) && r.m > 0 &&
          std::isfinite(r.eta)) {
        const double m_eta = std::pow(double(r.m), -r.eta);
        if (r.rho_inf > m_eta * r.rho2 * (1 + 1e-6))
          complain(r.iter, "congestion max above m^-eta of its norm");
        const double m3 = std::pow(double(r.m), -3.0 * r.eta);
        if (r.max_slack_times_rho > 0.01 * m3 * r.rho2 * (1 + 1e-6))
          complain(r.iter, "slack-times-congestion check failed");
      }
    }
  }
  std::cout << "audit: " << recs.size() << " records, " << checked
            << " checks, " << violations << " violations\n";
  return violations == 0 ? 0 : 2;
}

int run_bench(const std::string& families, const std::string& sizes, int reps,
              int U, uint64_t seed, const std::string& out_path,
              const std::string& methods) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw GraphError("cannot open " + out_path);
    out = &file;
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  *out << "family,m_target,rep,seed,n,m,U,method,value,iterations,boosts,"
          "augmented,wall_ms\n";
  for (const std::string& fam : split(families)) {
    for (const std::string& size_str : split(sizes)) {
      const int m_target = std::stoi(size_str);
      for (int rep = 0; rep < reps; ++rep) {
        const uint64_t inst_seed =
            seed ^ (std::hash<std::string>{}(fam) * 1000003ULL) ^
            (static_cast<uint64_t>(m_target) << 20) ^ rep;
        Rng rng(inst_seed);
        const Graph g = gen_instance(fam, m_target, U, rng);
        for (const std::string& method : split(methods)) {
          DriverConfig cfg;
          cfg.method = parse_method(method);
          const auto start = std::chrono::steady_clock::now();
          DriverResult res = maxflow(g, cfg);
          const double ms =
              std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
          *out << fam << "," << m_target << "," << rep << "," << inst_seed
               << "," << g.n << "," << g.m() << "," << U << "," << method
               << "," << res.value << "," << res.iterations << ","
               << res.boosts << "," << res.value_augmented << "," << ms
               << "\n";
        }
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max flow via interior-point path following"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve a DIMACS max-flow instance");
  std::string input, output, trace_path, method = "ipm";
  double eta = -1.0, c0 = 16.0;
  solve->add_option("input", input, "DIMACS file, - for stdin");
  solve->add_option("-o,--out", output, "flow output file, - for stdout");
  solve->add_option("--trace", trace_path, "JSON-lines trace output");
  solve->add_option("--method", method, "ipm | basic-ipm | dinic");
  solve->add_option("--eta", eta, "override the step exponent");
  solve->add_option("--C0", c0, "reweighting budget multiplier");

  auto* audit = app.add_subcommand("audit", "re-check invariants in a trace");
  std::string audit_trace;
  audit->add_option("trace", audit_trace, "JSON-lines trace file")->required();

  auto* bench = app.add_subcommand("bench", "deterministic benchmark, CSV out");
  std::string families = "random", sizes = "64,256,1024";
  std::string bench_out, bench_methods = "ipm,basic-ipm,dinic";
  int reps = 3, bench_u = 1;
  uint64_t seed = 1;
  bench->add_option("--families", families, "comma list: random,bipartite,path,star");
  bench->add_option("--sizes", sizes, "comma list of edge counts");
  bench->add_option("--reps", reps, "instances per family/size");
  bench->add_option("--U", bench_u, "capacity bound");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--out", bench_out, "CSV output file");
  bench->add_option("--methods", bench_methods, "comma list of solvers");

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed())
      return run_solve(input, output, trace_path, method, eta, c0);
    if (audit->parsed()) return run_audit(audit_trace);
    if (bench->parsed())
      return run_bench(families, sizes, reps, bench_u, seed, bench_out,
                       bench_methods);
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalBreakdown& e) {
    std::cerr << "breakdown: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
