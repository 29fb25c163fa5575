// Command-line front end: generate operator-form SDP instances, solve them,
// verify certificates, and run benchmark sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "lrsdp/instances.hpp"
#include "lrsdp/parallel.hpp"
#include "lrsdp/solver.hpp"

using json = nlohmann::ordered_json;
using namespace lrsdp;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitLimit = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string vector_hash(const Vector& v) {
  return hex64(fnv1a(v.data(), sizeof(double) * static_cast<std::size_t>(v.size())));
}

// ---------------------------------------------------------------------------
// Instance specs as flat key=value maps

using SpecMap = std::map<std::string, std::string>;

SpecMap read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open spec file '" + path + "'");
  SpecMap out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=', first);
    if (eq == std::string::npos)
      throw InputError("spec file: expected key=value, got '" + line + "'");
    std::string key = line.substr(first, eq - first);
    std::string val = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!val.empty() && (val.back() == ' ' || val.back() == '\t' || val.back() == '\r'))
      val.pop_back();
    out[key] = val;
  }
  return out;
}

SpecMap parse_spec_tokens(const std::vector<std::string>& tokens) {
  SpecMap out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw InputError("expected key=value, got '" + tok + "'");
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

long spec_long(const SpecMap& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw InputError("spec: missing key '" + key + "'");
  return std::stol(it->second);
}

std::string spec_str(const SpecMap& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw InputError("spec: missing key '" + key + "'");
  return it->second;
}

// A built instance plus its descriptor for reports.
struct BuiltInstance {
  SdpInstance inst;
  std::string family;
  json descriptor;
  std::string dims;  // compact "n1xn2,r=3"-style label for tables
};

BuiltInstance build_from_spec(const SpecMap& spec) {
  const std::string family = spec_str(spec, "family");
  BuiltInstance out;
  out.family = family;
  if (family == "matcomp") {
    McSpec ms;
    ms.n1 = spec_long(spec, "n1");
    ms.n2 = spec_long(spec, "n2");
    ms.r = static_cast<int>(spec_long(spec, "r"));
    ms.seed = spec.count("seed") ? std::stoull(spec.at("seed")) : 0;
    if (spec.count("tau_safety")) ms.tau_safety = std::stod(spec.at("tau_safety"));
    if (spec.count("offset_sample_count"))
      ms.offset_sample_count = spec.at("offset_sample_count") == "1";
    McInstance mc = gen_matrix_completion(ms);
    out.inst = std::move(mc.inst);
    out.descriptor = {{"family", "matcomp"},
                      {"n1", ms.n1},
                      {"n2", ms.n2},
                      {"r", ms.r},
                      {"seed", ms.seed},
                      {"nuclear_norm", mc.nuclear_norm}};
    out.dims = std::to_string(ms.n1) + "x" + std::to_string(ms.n2) +
               ",r=" + std::to_string(ms.r);
  } else if (family == "phaseret") {
    PrSpec ps;
    ps.n = spec_long(spec, "n");
    ps.L = static_cast<int>(spec_long(spec, "L"));
    ps.seed = spec.count("seed") ? std::stoull(spec.at("seed")) : 0;
    if (spec.count("tau_slack")) ps.tau_slack = std::stod(spec.at("tau_slack"));
    PrInstance pr = gen_phase_retrieval(ps);
    out.inst = std::move(pr.inst);
    out.descriptor = {{"family", "phaseret"},
                      {"n", ps.n},
                      {"L", ps.L},
                      {"seed", ps.seed}};
    out.dims = "n=" + std::to_string(ps.n) + ",L=" + std::to_string(ps.L);
  } else if (family == "theta") {
    Graph g;
    json src;
    if (spec.count("graph")) {
      const std::string path = spec_str(spec, "graph");
      const std::string fmt = spec.count("format") ? spec.at("format") : "edge-list";
      g = load_graph(path, graph_format_from_string(fmt));
      src = {{"graph", path}, {"format", fmt}};
    } else if (spec.count("hypercube")) {
      g = make_hypercube(static_cast<int>(spec_long(spec, "hypercube")));
      src = {{"hypercube", spec_long(spec, "hypercube")}};
    } else if (spec.count("cycle")) {
      g = make_cycle(static_cast<int>(spec_long(spec, "cycle")));
      src = {{"cycle", spec_long(spec, "cycle")}};
    } else if (spec.count("petersen")) {
      g = make_petersen();
      src = {{"petersen", true}};
    } else {
      throw InputError(
          "theta needs --graph (with --format), or one of "
          "hypercube/cycle/petersen");
    }
    out.inst = build_theta_instance(g);
    out.descriptor = {{"family", "theta"},
                      {"vertices", g.n_vertices},
                      {"edges", static_cast<long>(g.edges.size())},
                      {"source", src}};
    if (g.dropped_self_loops > 0)
      out.descriptor["dropped_self_loops"] = g.dropped_self_loops;
    out.dims = "n=" + std::to_string(g.n_vertices) +
               ",|E|=" + std::to_string(g.edges.size());
  } else {
    throw InputError("unknown problem family '" + family + "'");
  }
  out.descriptor["n"] = out.inst.n;
  out.descriptor["m"] = out.inst.m;
  out.descriptor["tau"] = out.inst.tau;
  out.descriptor["b_hash"] = vector_hash(out.inst.b);
  return out;
}

// ---------------------------------------------------------------------------
// Solver plumbing shared by solve and bench

struct CommonOpts {
  double tol = 1e-5;
  std::uint64_t seed = 0;
  int threads = 0;
  double time_limit = 3600.0;
  bool deterministic = false;
  double beta0 = 0.0;
  double beta_growth = 2.0;
  double eps0 = 0.0;
  double eps_decay = 0.5;
  double eps_floor = 0.0;
  int max_outer = 500;
  double lambda0 = 10.0;
  int verbose = 0;
};

SolverConfig make_config(const CommonOpts& o) {
  SolverConfig cfg;
  cfg.eps = o.tol;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.time_limit = o.time_limit;
  cfg.deterministic = o.deterministic;
  cfg.beta0 = o.beta0;
  cfg.beta_growth = o.beta_growth;
  cfg.eps0 = o.eps0;
  cfg.eps_decay = o.eps_decay;
  cfg.eps_floor = o.eps_floor;
  cfg.max_outer = o.max_outer;
  cfg.aipp.lambda0 = o.lambda0;
  return cfg;
}

std::string config_hash(const CommonOpts& o) {
  std::ostringstream ss;
  ss << "tol=" << o.tol << ";seed=" << o.seed << ";time_limit=" << o.time_limit
     << ";deterministic=" << o.deterministic << ";beta0=" << o.beta0
     << ";beta_growth=" << o.beta_growth << ";eps0=" << o.eps0
     << ";eps_decay=" << o.eps_decay << ";eps_floor=" << o.eps_floor
     << ";max_outer=" << o.max_outer << ";lambda0=" << o.lambda0;
  const std::string s = ss.str();
  return hex64(fnv1a(s.data(), s.size()));
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--tol", o.tol, "relative tolerance on the three residuals");
  cmd->add_option("--seed", o.seed, "instance and solver seed");
  cmd->add_option("--threads", o.threads, "kernel worker cap (0 = hardware)");
  cmd->add_option("--time-limit", o.time_limit, "wall-clock limit in seconds");
  cmd->add_flag("--deterministic", o.deterministic,
                "record deterministic mode (reductions are always fixed-order)");
  cmd->add_option("--beta0", o.beta0, "initial penalty (0 = auto)");
  cmd->add_option("--beta-growth", o.beta_growth, "penalty growth factor");
  cmd->add_option("--eps0", o.eps0, "initial inner tolerance (0 = auto)");
  cmd->add_option("--eps-decay", o.eps_decay, "inner tolerance decay");
  cmd->add_option("--eps-floor", o.eps_floor, "inner tolerance floor (0 = auto)");
  cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
  cmd->add_option("--lambda0", o.lambda0, "initial prox stepsize");
  cmd->add_flag("-v,--verbose", o.verbose, "per-iteration progress lines");
}

struct FamilyFlags {
  std::string problem;
  std::string spec_file;
  std::string graph;
  std::string format = "edge-list";
  int hypercube = -1;
  int cycle = -1;
  bool petersen = false;
  long n1 = -1, n2 = -1, r = -1;
  long n = -1, L = -1;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("--problem", f.problem, "matcomp | theta | phaseret");
  cmd->add_option("--spec", f.spec_file, "key=value spec file (alternative to --problem)");
  cmd->add_option("--graph", f.graph, "graph file for theta");
  cmd->add_option("--format", f.format, "edge-list | matrix-market | gset");
  cmd->add_option("--hypercube", f.hypercube, "theta on the d-dimensional hypercube");
  cmd->add_option("--cycle", f.cycle, "theta on the n-cycle");
  cmd->add_flag("--petersen", f.petersen, "theta on the Petersen graph");
  cmd->add_option("--n1", f.n1, "matcomp rows");
  cmd->add_option("--n2", f.n2, "matcomp columns");
  cmd->add_option("--r", f.r, "matcomp hidden rank");
  cmd->add_option("--n", f.n, "phaseret signal length (power of two)");
  cmd->add_option("--L", f.L, "phaseret mask count");
}

SpecMap spec_from_flags(const FamilyFlags& f, std::uint64_t seed) {
  if (!f.spec_file.empty()) return read_spec_file(f.spec_file);
  if (f.problem.empty())
    throw InputError("one of --problem or --spec is required");
  SpecMap spec;
  spec["family"] = f.problem;
  spec["seed"] = std::to_string(seed);
  if (f.problem == "matcomp") {
    if (f.n1 < 0 || f.n2 < 0 || f.r < 0)
      throw InputError("matcomp needs --n1 --n2 --r");
    spec["n1"] = std::to_string(f.n1);
    spec["n2"] = std::to_string(f.n2);
    spec["r"] = std::to_string(f.r);
  } else if (f.problem == "phaseret") {
    if (f.n < 0 || f.L < 0) throw InputError("phaseret needs --n --L");
    spec["n"] = std::to_string(f.n);
    spec["L"] = std::to_string(f.L);
  } else if (f.problem == "theta") {
    spec.erase("seed");  // theta instances are seed-free
    if (!f.graph.empty()) {
      spec["graph"] = f.graph;
      spec["format"] = f.format;
    } else if (f.hypercube > 0) {
      spec["hypercube"] = std::to_string(f.hypercube);
    } else if (f.cycle > 0) {
      spec["cycle"] = std::to_string(f.cycle);
    } else if (f.petersen) {
      spec["petersen"] = "1";
    } else {
      throw InputError("theta needs --graph, --hypercube, --cycle or --petersen");
    }
  } else {
    throw InputError("unknown problem family '" + f.problem + "'");
  }
  return spec;
}

json report_to_json(const BuiltInstance& bi, const SolveReport& rep,
                    const CommonOpts& opts) {
  json j;
  j["version"] = kVersion;
  j["instance"] = bi.descriptor;
  j["config_hash"] = config_hash(opts);
  j["environment"] = {{"threads", max_threads()},
                      {"deterministic", opts.deterministic},
                      {"version", kVersion}};
  j["status"] = to_string(rep.status);
  j["pval"] = rep.pval;
  j["dval"] = rep.dval;
  j["dval_no_theta"] = rep.dval_no_theta;
  j["rel_pfeas"] = rep.rel_pfeas;
  j["rel_gap"] = rep.rel_gap;
  j["rel_dfeas"] = rep.rel_dfeas;
  j["rank"] = rep.rank;
  j["theta"] = rep.dual.theta;
  j["tau"] = rep.tau;
  j["outer_iters"] = rep.outer_iters;
  j["fw_steps"] = rep.fw_steps;
  j["aipp_iters"] = rep.aipp_iters;
  j["fista_iters"] = rep.fista_iters;
  j["eig_products"] = rep.eig_products;
  j["wall_seconds"] = rep.wall_seconds;
  if (!rep.message.empty()) j["message"] = rep.message;

  // post-hoc verification, recomputed from the returned factor and
  // multiplier rather than the solver's internal values
  if (rep.U.U.allFinite() && rep.dual.p.allFinite()) {
    const ScaledInstance scaled = scale_instance(bi.inst);
    EigSettings eig;
    eig.tol = 1e-8;
    eig.seed = opts.seed;
    const TerminationTerms t = check_termination(
        scaled.inst, rep.U, rep.dual.p, rep.dual.theta, eig, opts.tol);
    j["verify"] = {{"rel_pfeas", t.rel_pfeas},
                   {"rel_gap", t.rel_gap},
                   {"rel_dfeas", t.rel_dfeas},
                   {"dual_slack_lambda_min", t.dual_lambda_min + rep.dual.theta},
                   {"eig_trusted", t.eig_trusted}};
  }
  return j;
}

TraceSink make_trace_printer(int verbose) {
  if (verbose == 0) return nullptr;
  return [verbose](const TraceEvent& e) {
    if (e.kind == TraceEvent::Kind::kOuter) {
      std::fprintf(stderr,
                   "[outer] t=%-3d beta=%.3e eps_t=%.3e gap=%.3e theta=%.6f "
                   "rank=%lld pfeas=%.3e gap_rel=%.3e dfeas=%.3e\n",
                   e.outer_iter, e.beta, e.eps_inner, e.gap, e.theta,
                   static_cast<long long>(e.rank), e.rel_pfeas, e.rel_gap,
                   e.rel_dfeas);
    } else if (verbose > 1) {
      std::fprintf(stderr,
                   "[inner] t=%-3d %s gap=%.3e theta=%.6f rank=%lld al=%.9e "
                   "alpha=%.3f\n",
                   e.outer_iter,
                   e.kind == TraceEvent::Kind::kInnerStationary ? "stat" : "fw ",
                   e.gap, e.theta, static_cast<long long>(e.rank), e.al_value,
                   e.fw_alpha);
    }
  };
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kExitOptimal;
    case SolveStatus::kIterationLimit:
    case SolveStatus::kTimeLimit: return kExitLimit;
    case SolveStatus::kNumericalFailure: return kExitNumerical;
  }
  return kExitNumerical;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const FamilyFlags& family, const CommonOpts& opts,
              const std::string& json_out) {
  set_max_threads(opts.threads);
  const SpecMap spec = spec_from_flags(family, opts.seed);
  const BuiltInstance bi = build_from_spec(spec);
  const SolverConfig cfg = make_config(opts);
  const SolveReport rep = solve(bi.inst, cfg, make_trace_printer(opts.verbose));
  const json j = report_to_json(bi, rep, opts);
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) {
      std::cerr << "error: cannot write '" << json_out << "'\n";
      return kExitNoInput;
    }
    out << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return status_exit_code(rep.status);
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const FamilyFlags& family, const CommonOpts& opts,
                 const std::string& out_path) {
  const SpecMap spec = spec_from_flags(family, opts.seed);
  const BuiltInstance bi = build_from_spec(spec);  // validates + computes m
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitNoInput;
    }
    out = &file;
  }
  for (const auto& [k, v] : spec) *out << k << "=" << v << "\n";
  *out << "# n=" << bi.inst.n << " m=" << bi.inst.m
       << " b_hash=" << bi.descriptor["b_hash"].get<std::string>() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchRow {
  SpecMap spec;
  CommonOpts opts;
  BuiltInstance bi;
  SolveReport rep;
  std::string error;
};

int cmd_bench(const std::string& sweep_path, const CommonOpts& base,
              const std::string& csv_out, bool parallel_rows) {
  set_max_threads(base.threads);
  std::ifstream in(sweep_path);
  if (!in) {
    std::cerr << "error: cannot open sweep file '" << sweep_path << "'\n";
    return kExitNoInput;
  }
  std::vector<SpecMap> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    rows.push_back(parse_spec_tokens(tokens));
  }
  if (rows.empty()) {
    std::cerr << "error: sweep file has no instances\n";
    return kExitUsage;
  }

  auto run_row = [&base](const SpecMap& spec) -> BenchRow {
    BenchRow row;
    row.spec = spec;
    row.opts = base;
    if (spec.count("tol")) row.opts.tol = std::stod(spec.at("tol"));
    if (spec.count("time_limit"))
      row.opts.time_limit = std::stod(spec.at("time_limit"));
    if (spec.count("seed")) row.opts.seed = std::stoull(spec.at("seed"));
    try {
      row.bi = build_from_spec(spec);
      row.rep = solve(row.bi.inst, make_config(row.opts));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<BenchRow> results(rows.size());
  if (parallel_rows) {
    std::vector<std::future<BenchRow>> futs;
    futs.reserve(rows.size());
    for (const auto& spec : rows)
      futs.push_back(std::async(std::launch::async, run_row, spec));
    for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) results[i] = run_row(rows[i]);
  }

  const char* header =
      "family,dims,m,tol,status,pval,dval,rel_pfeas,rel_gap,rel_dfeas,rank,"
      "outer_iters,fw_steps,seconds";
  std::ostringstream csv;
  csv << header << "\n";
  double total_seconds = 0.0;
  bool any_failed = false;
  for (const auto& row : results) {
    if (!row.error.empty()) {
      any_failed = true;
      csv << (row.spec.count("family") ? row.spec.at("family") : "?")
          << ",error,,,,,,,,,,,," << "\n";
      std::cerr << "row failed: " << row.error << "\n";
      continue;
    }
    const SolveReport& r = row.rep;
    if (r.status != SolveStatus::kOptimal) any_failed = true;
    total_seconds += r.wall_seconds;
    csv << row.bi.family << "," << row.bi.dims << "," << row.bi.inst.m << ","
        << row.opts.tol << "," << to_string(r.status) << "," << r.pval << ","
        << r.dval << "," << r.rel_pfeas << "," << r.rel_gap << ","
        << r.rel_dfeas << "," << r.rank << "," << r.outer_iters << ","
        << r.fw_steps << "," << r.wall_seconds << "\n";
  }
  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    if (!out) {
      std::cerr << "error: cannot write '" << csv_out << "'\n";
      return kExitNoInput;
    }
    out << csv.str();
  }

  // pretty table
  std::printf("%-9s %-22s %10s %9s %-15s %14s %10s %10s %10s %6s %8s\n",
              "family", "dims", "m", "tol", "status", "pval", "rel_pfeas",
              "rel_gap", "rel_dfeas", "rank", "seconds");
  for (const auto& row : results) {
    if (!row.error.empty()) {
      std::printf("%-9s %s\n",
                  row.spec.count("family") ? row.spec.at("family").c_str() : "?",
                  ("ERROR: " + row.error).c_str());
      continue;
    }
    const SolveReport& r = row.rep;
    std::printf("%-9s %-22s %10lld %9.1e %-15s %14.6f %10.2e %10.2e %10.2e "
                "%6lld %8.2f\n",
                row.bi.family.c_str(), row.bi.dims.c_str(),
                static_cast<long long>(row.bi.inst.m), row.opts.tol,
                to_string(r.status).c_str(), r.pval, r.rel_pfeas, r.rel_gap,
                r.rel_dfeas, static_cast<long long>(r.rank), r.wall_seconds);
  }
  std::printf("total solve time: %.2f s over %zu rows\n", total_seconds,
              results.size());
  return any_failed ? kExitLimit : kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank first-order SDP solver"};
  app.require_subcommand(1);

  FamilyFlags family;
  CommonOpts opts;
  std::string json_out, out_path, sweep_path, csv_out;
  bool parallel_rows = false;

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one instance");
  add_family_flags(solve_cmd, family);
  add_common_flags(solve_cmd, opts);
  solve_cmd->add_option("--json-out", json_out, "write the JSON report here");

  CLI::App* gen_cmd =
      app.add_subcommand("generate", "write an instance spec file");
  add_family_flags(gen_cmd, family);
  gen_cmd->add_option("--seed", opts.seed, "instance seed");
  gen_cmd->add_option("--out", out_path, "output spec path (default stdout)");

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a sweep of instance specs");
  bench_cmd->add_option("--sweep", sweep_path, "sweep file, one spec per line")
      ->required();
  add_common_flags(bench_cmd, opts);
  bench_cmd->add_option("--csv-out", csv_out, "write CSV results here");
  bench_cmd->add_flag("--parallel-rows", parallel_rows,
                      "run rows concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(family, opts, json_out);
    if (gen_cmd->parsed()) return cmd_generate(family, opts, out_path);
    if (bench_cmd->parsed())
      return cmd_bench(sweep_path, opts, csv_out, parallel_rows);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
