// clawsim — command-line driver for the claw-finding walk simulator.
//
// Subcommands: gen, spectra, walk-probe, detect, search, calibrate, errors,
// scaling. CSV goes to --out (or stdout); single results print as one JSON
// line. Every run is deterministic in --seed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clawsim/clawsim.hpp"

namespace {

using namespace clawsim;
using nlohmann::json;

struct GlobalFlags {
  std::uint64_t seed = 1;
  std::string mode = "standard";
  std::string backend = "cost-model";
  std::string out;
};

OracleMode parse_mode(const std::string& s) {
  if (s == "standard") return OracleMode::standard;
  if (s == "comparison") return OracleMode::comparison;
  throw CLI::ValidationError("--mode", "expected 'standard' or 'comparison'");
}

DetectBackend parse_backend(const std::string& s) {
  if (s == "exact") return DetectBackend::exact;
  if (s == "cost-model") return DetectBackend::cost_model;
  throw CLI::ValidationError("--backend", "expected 'exact' or 'cost-model'");
}

std::ofstream open_out_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

// Writes to --out when given, otherwise stdout.
void emit(const GlobalFlags& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    auto f = open_out_file(g.out);
    f << text;
  }
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return deserialize_instance(buf.str());
}

int run_gen(const GlobalFlags& g, const std::vector<std::int64_t>& sizes,
            std::int64_t claws, std::int64_t range) {
  std::int64_t total = 0;
  for (const std::int64_t n : sizes) total += n;
  const std::int64_t effective_range = range > 0 ? range : 2 * total;
  const ProblemInstance inst =
      make_planted_instance(sizes, claws, effective_range, g.seed);
  emit(g, serialize_instance(inst) + "\n");
  return 0;
}

int run_spectra(const GlobalFlags& g, std::int64_t n, std::int64_t k) {
  const Spectrum s = johnson_spectrum(n, k);
  std::ostringstream os;
  os << "row_type,value,count\n";
  char buf[64];
  for (const SpectralLine& line : s.lines) {
    std::snprintf(buf, sizeof buf, "eigenvalue,%.12g,%lld\n", line.eigenvalue,
                  static_cast<long long>(line.multiplicity));
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "gap,%.12g,\n", s.gap);
  os << buf;
  emit(g, os.str());
  return 0;
}

int run_walk_probe(const GlobalFlags& g, const std::string& instance_path,
                   std::int64_t subset_override, std::int64_t max_steps, double c) {
  const ProblemInstance inst = load_instance(instance_path);
  DetectParams params = choose_params(inst.domain_sizes(), c);
  if (subset_override > 0) {
    std::vector<std::int64_t> subsets(static_cast<std::size_t>(inst.k()));
    for (int f = 0; f < inst.k(); ++f)
      subsets[static_cast<std::size_t>(f)] =
          std::min<std::int64_t>(subset_override, inst.domain_size(f));
    params = make_detect_params(inst.domain_sizes(), subsets, c);
  }
  const std::int64_t bound = max_steps > 0 ? max_steps : params.step_bound;
  DetectParams probe_params = params;
  probe_params.step_bound = bound;
  const std::vector<double> profile =
      claw_detect_success_profile(inst, inst.full_domains(), probe_params, 1 << 17);

  std::ostringstream os;
  os << "step_bound,success_probability\n";
  double running = 0.0;
  char buf[64];
  for (std::int64_t t = 1; t <= bound; ++t) {
    running += profile[static_cast<std::size_t>(t - 1)];
    std::snprintf(buf, sizeof buf, "%lld,%.9f\n", static_cast<long long>(t),
                  running / static_cast<double>(t));
    os << buf;
  }
  emit(g, os.str());
  return 0;
}

int run_detect(const GlobalFlags& g, const std::string& instance_path, double p_err,
               double c) {
  const ProblemInstance inst = load_instance(instance_path);
  OracleSession session(inst, parse_mode(g.mode));
  SplitMix64 rng = derive_stream(g.seed);
  const DetectParams params = choose_params(inst.domain_sizes(), c);
  DetectOptions opts;
  opts.error_rate = p_err;
  const DetectOutcome out = claw_detect(session, inst.full_domains(), params,
                                        parse_backend(g.backend), rng, opts);
  json j;
  j["verdict"] = out.claw_found;
  j["queries"] = out.queries_used;
  j["backend"] = to_string(out.backend);
  j["mode"] = g.mode;
  j["step_bound"] = params.step_bound;
  emit(g, j.dump() + "\n");
  return 0;
}

int run_search(const GlobalFlags& g, const std::string& instance_path, double p_err,
               double c, std::int64_t c_final, const std::string& trace_path) {
  const ProblemInstance inst = load_instance(instance_path);
  OracleSession session(inst, parse_mode(g.mode));
  SplitMix64 rng = derive_stream(g.seed);

  SearchConfig cfg;
  cfg.backend = parse_backend(g.backend);
  cfg.error_rate = p_err;
  cfg.walk_constant = c;
  cfg.final_scan_threshold = c_final;

  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file = open_out_file(trace_path);
    cfg.sink = [&trace_file](const DetectCallRecord& rec) {
      json j;
      j["stage"] = rec.stage;
      j["depth"] = rec.depth;
      json intervals = json::array();
      for (const Interval& iv : rec.restriction) intervals.push_back({iv.lo, iv.hi});
      j["intervals"] = intervals;
      j["repetition"] = rec.repetition;
      j["verdict"] = rec.verdict;
      j["queries"] = rec.queries;
      trace_file << j.dump() << '\n';
    };
  }

  const SearchResult res = inst.k() == 2 ? claw_search(session, cfg, rng)
                                         : k_claw_search(session, cfg, rng);
  json j;
  j["claw"] = json(res.claw.indices);
  j["found"] = res.claw.found();
  j["verified"] = res.claw.found() ? res.claw.verifies(inst) : false;
  j["total_queries"] = res.total_queries;
  emit(g, j.dump() + "\n");
  return 0;
}

int run_calibrate(const GlobalFlags& g) {
  const auto family = default_calibration_family(g.seed);
  json j;
  json curve = json::object();
  const double candidates[] = {1.0, 2.0, 4.0, 8.0};
  for (const double c : candidates) {
    double worst = 1.0;
    for (const CalibrationPoint& point : family) {
      const DetectParams params =
          make_detect_params(point.instance.domain_sizes(), point.subset_sizes, c);
      const auto profile = claw_detect_success_profile(
          point.instance, point.instance.full_domains(), params);
      double mean = 0.0;
      for (const double p : profile) mean += p;
      mean /= static_cast<double>(profile.size());
      worst = std::min(worst, mean);
    }
    curve[std::to_string(c)] = worst;
  }
  j["curve"] = curve;
  try {
    j["constant"] = calibrate_walk_constant(family);
  } catch (const CalibrationError& e) {
    j["constant"] = nullptr;
    j["error"] = e.what();
  }
  emit(g, j.dump() + "\n");
  return 0;
}

int run_errors(const GlobalFlags& g, const std::vector<std::int64_t>& sizes,
               std::int64_t trials, std::int64_t claws, double p_err,
               std::int64_t c_final) {
  ExperimentConfig cfg;
  cfg.grid = {sizes};
  cfg.trials = trials;
  cfg.seed = g.seed;
  cfg.mode = parse_mode(g.mode);
  cfg.backend = parse_backend(g.backend);
  cfg.error_rate = p_err;
  cfg.num_claws = claws;
  cfg.final_scan_threshold = c_final;
  const ErrorStats stats = estimate_error_rate(cfg);
  json j;
  j["trials"] = stats.trials;
  j["failures"] = stats.failures;
  j["sentinels"] = stats.sentinel_count;
  j["soundness_violations"] = stats.soundness_violations;
  j["failure_rate"] = stats.rate;
  j["upper_bound_99"] = stats.upper_bound;
  emit(g, j.dump() + "\n");
  return 0;
}

int run_scaling(const GlobalFlags& g, const std::string& preset, int exp_lo, int exp_hi,
                std::int64_t trials, double p_err, std::int64_t c_final,
                bool print_fit) {
  ExperimentConfig cfg;
  ScalingAxis axis = ScalingAxis::domain_product;
  for (int j = exp_lo; j <= exp_hi; ++j) {
    const std::int64_t n = std::int64_t{1} << j;
    if (preset == "balanced") {
      cfg.grid.push_back({n, n});
    } else if (preset == "unbalanced") {
      cfg.grid.push_back({n, n * n * n});
      axis = ScalingAxis::largest_domain;
    } else if (preset == "k3") {
      cfg.grid.push_back({n, n, n});
    } else {
      throw CLI::ValidationError("--preset", "expected balanced, unbalanced or k3");
    }
  }
  cfg.trials = trials;
  cfg.seed = g.seed;
  cfg.mode = parse_mode(g.mode);
  cfg.backend = parse_backend(g.backend);
  cfg.error_rate = p_err;
  cfg.final_scan_threshold = c_final;

  const std::vector<ScalingRow> rows = run_scaling_experiment(cfg);
  std::ostringstream os;
  write_scaling_csv(os, rows);
  emit(g, os.str());

  if (print_fit) {
    const FitResult fit = fit_exponent(rows, axis, cfg.mode);
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    double worst = 0.0;
    for (const double r : fit.residuals) worst = std::max(worst, std::abs(r));
    j["max_abs_residual"] = worst;
    std::cerr << j.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claw-finding walk simulator"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
  app.add_option("--mode", g.mode, "oracle mode: standard | comparison")
      ->capture_default_str();
  app.add_option("--backend", g.backend, "detector backend: exact | cost-model")
      ->capture_default_str();
  app.add_option("--out", g.out, "write output to this path instead of stdout");

  // gen
  auto* gen = app.add_subcommand("gen", "write a planted instance as JSON");
  std::vector<std::int64_t> gen_sizes{16, 16};
  std::int64_t gen_claws = 1, gen_range = 0;
  gen->add_option("--sizes", gen_sizes, "domain sizes, ascending")
      ->required()
      ->delimiter(',');
  gen->add_option("--claws", gen_claws, "number of planted claws")
      ->capture_default_str();
  gen->add_option("--range", gen_range, "range size (default: twice the size sum)");

  // spectra
  auto* spectra = app.add_subcommand("spectra", "chain spectrum of J(n, k) as CSV");
  std::int64_t sp_n = 0, sp_k = 0;
  spectra->add_option("n", sp_n, "ground-set size")->required();
  spectra->add_option("k", sp_k, "subset size")->required();

  // walk-probe
  auto* probe = app.add_subcommand(
      "walk-probe", "success probability against the walk-length bound as CSV");
  std::string probe_instance;
  std::int64_t probe_subset = 0, probe_steps = 0;
  double probe_c = kDefaultWalkConstant;
  probe->add_option("--instance", probe_instance, "instance JSON path")->required();
  probe->add_option("--subset-size", probe_subset,
                    "override the per-function subset size");
  probe->add_option("--max-steps", probe_steps, "largest walk-length bound to report");
  probe->add_option("--c", probe_c, "walk constant")->capture_default_str();

  // detect
  auto* detect = app.add_subcommand("detect", "one detection run as a JSON line");
  std::string detect_instance;
  double detect_perr = kDefaultDetectErrorRate, detect_c = kDefaultWalkConstant;
  detect->add_option("--instance", detect_instance, "instance JSON path")->required();
  detect->add_option("--p-err", detect_perr, "cost-model miss probability")
      ->capture_default_str();
  detect->add_option("--c", detect_c, "walk constant")->capture_default_str();

  // search
  auto* search = app.add_subcommand("search", "one full search as a JSON line");
  std::string search_instance, search_trace;
  double search_perr = kDefaultDetectErrorRate, search_c = kDefaultWalkConstant;
  std::int64_t search_cfinal = 100;
  search->add_option("--instance", search_instance, "instance JSON path")->required();
  search->add_option("--p-err", search_perr, "cost-model miss probability")
      ->capture_default_str();
  search->add_option("--c", search_c, "walk constant")->capture_default_str();
  search->add_option("--c-final", search_cfinal, "final classical-scan threshold")
      ->capture_default_str();
  search->add_option("--trace", search_trace, "JSON-lines trace path");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "walk-constant calibration over the tiny family as JSON");

  // errors
  auto* errors = app.add_subcommand("errors", "failure-rate estimate as JSON");
  std::vector<std::int64_t> err_sizes{1024, 1024};
  std::int64_t err_trials = 10000, err_claws = 1, err_cfinal = 100;
  double err_perr = kDefaultDetectErrorRate;
  errors->add_option("--sizes", err_sizes, "domain sizes, ascending")
      ->delimiter(',')
      ->capture_default_str();
  errors->add_option("--trials", err_trials, "number of trials")->capture_default_str();
  errors->add_option("--claws", err_claws, "planted claws per instance")
      ->capture_default_str();
  errors->add_option("--p-err", err_perr, "cost-model miss probability")
      ->capture_default_str();
  errors->add_option("--c-final", err_cfinal, "final classical-scan threshold")
      ->capture_default_str();

  // scaling
  auto* scaling = app.add_subcommand("scaling", "query-scaling experiment as CSV");
  std::string scaling_preset = "balanced";
  int scaling_lo = 8, scaling_hi = 16;
  std::int64_t scaling_trials = 32, scaling_cfinal = 2;
  double scaling_perr = kDefaultDetectErrorRate;
  bool scaling_fit = false;
  scaling->add_option("--preset", scaling_preset, "balanced | unbalanced | k3")
      ->capture_default_str();
  scaling->add_option("--exp-lo", scaling_lo, "smallest size exponent")
      ->capture_default_str();
  scaling->add_option("--exp-hi", scaling_hi, "largest size exponent")
      ->capture_default_str();
  scaling->add_option("--trials", scaling_trials, "trials per grid point")
      ->capture_default_str();
  scaling->add_option("--p-err", scaling_perr, "cost-model miss probability")
      ->capture_default_str();
  scaling->add_option("--c-final", scaling_cfinal, "final classical-scan threshold")
      ->capture_default_str();
  scaling->add_flag("--print-fit", scaling_fit,
                    "print the fitted exponent as JSON on stderr");

  // global flags may appear after the subcommand name
  for (CLI::App* sub : {gen, spectra, probe, detect, search, calibrate, errors, scaling})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(g, gen_sizes, gen_claws, gen_range);
    if (spectra->parsed()) return run_spectra(g, sp_n, sp_k);
    if (probe->parsed())
      return run_walk_probe(g, probe_instance, probe_subset, probe_steps, probe_c);
    if (detect->parsed()) return run_detect(g, detect_instance, detect_perr, detect_c);
    if (search->parsed())
      return run_search(g, search_instance, search_perr, search_c, search_cfinal,
                        search_trace);
    if (calibrate->parsed()) return run_calibrate(g);
    if (errors->parsed())
      return run_errors(g, err_sizes, err_trials, err_claws, err_perr, err_cfinal);
    if (scaling->parsed())
      return run_scaling(g, scaling_preset, scaling_lo, scaling_hi, scaling_trials,
                         scaling_perr, scaling_cfinal, scaling_fit);
  } catch (const std::exception& e) {
    std::cerr << "clawsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
