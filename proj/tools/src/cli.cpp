#include "eplab_cli/cli.hpp"

#include "eplab/allocation.hpp"
#include "eplab/concavity.hpp"
#include "eplab/entropy.hpp"
#include "eplab/finite_difference.hpp"
#include "eplab/matrix_inequalities.hpp"
#include "eplab_cli/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace eplab::cli {

namespace {

struct IntegratorFlags {
  std::string method;
  int order = 48;
  std::int64_t samples = 1'000'000;
  std::optional<std::uint64_t> seed;
  std::optional<double> target_tolerance;
};

struct ModelFlags {
  std::string constellation;
  std::string lambda;
  std::string lambda_file;
  std::string t_file;
};

struct OutputFlags {
  std::string output;
  std::string csv;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvironmentVariable); env != nullptr && *env != '\0') {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size()) {
      throw ValidationError(std::string(kSeedEnvironmentVariable) + " is not an unsigned integer: " + env);
    }
    return v;
  }
  return 42;
}

IntegratorConfig make_config(const IntegratorFlags& f, int dimension) {
  IntegratorConfig cfg;
  const std::uint64_t seed = f.seed ? *f.seed : default_seed();
  if (f.method.empty()) {
    cfg = IntegratorConfig::defaults_for(dimension);
    cfg.order = f.order;
    cfg.samples = f.samples;
  } else if (parse_integration_method(f.method) == IntegrationMethod::quadrature) {
    cfg = IntegratorConfig::quadrature(f.order);
  } else {
    cfg = IntegratorConfig::monte_carlo(f.samples, seed);
  }
  cfg.seed = seed;
  if (f.target_tolerance) cfg.target_tolerance = *f.target_tolerance;
  cfg.validate();
  return cfg;
}

void add_integrator_flags(CLI::App* cmd, IntegratorFlags& f) {
  cmd->add_option("--method", f.method, "quadrature | monte_carlo (default: quadrature for n <= 3)");
  cmd->add_option("--order", f.order, "Gauss-Hermite nodes per axis")->capture_default_str();
  cmd->add_option("--samples", f.samples, "Monte Carlo sample count")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Monte Carlo / search seed (default $EPLAB_SEED or 42)");
  cmd->add_option("--target-tol", f.target_tolerance, "absolute tolerance on integrated entries");
}

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool allow_matrix) {
  cmd->add_option("--constellation", f.constellation, "constellation JSON file")->required();
  auto* lam = cmd->add_option("--lambda", f.lambda, "diagonal powers, e.g. 0.7,1.3");
  auto* lam_file = cmd->add_option("--lambda-file", f.lambda_file, "JSON file with the diagonal powers");
  lam->excludes(lam_file);
  if (allow_matrix) {
    auto* t = cmd->add_option("--t-file", f.t_file, "JSON file with a PSD scaling matrix T");
    t->excludes(lam)->excludes(lam_file);
  }
}

void add_output_flags(CLI::App* cmd, OutputFlags& f, bool csv) {
  cmd->add_option("--output", f.output, "JSON report path (default: stdout)");
  if (csv) cmd->add_option("--csv", f.csv, "CSV path");
}

Vector read_lambda(const ModelFlags& f, bool required) {
  if (!f.lambda.empty()) return parse_lambda_list(f.lambda);
  if (!f.lambda_file.empty()) return load_lambda_file(f.lambda_file);
  if (required) throw ValidationError("one of --lambda or --lambda-file is required");
  return {};
}

void require_length(const Vector& lambda, const Constellation& c, const char* flag) {
  if (lambda.size() != c.dimension()) {
    throw ValidationError(std::string(flag) + " has " + std::to_string(lambda.size()) +
                          " entries but the constellation has n = " + std::to_string(c.dimension()));
  }
}

void emit(const Json& doc, const OutputFlags& f, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (f.output.empty()) {
    out << text;
  } else {
    write_file(f.output, text);
  }
}

void emit_csv(const std::string& text, const OutputFlags& f) {
  if (!f.csv.empty()) write_file(f.csv, text);
}

Json header(const char* command, const ModelFlags& m, const IntegratorConfig& cfg) {
  Json j;
  j["command"] = command;
  j["constellation"] = m.constellation;
  j["integrator"] = to_json(cfg);
  return j;
}

// ---------------------------------------------------------------- entropy

struct EntropyFlags {
  ModelFlags model;
  IntegratorFlags integrator;
  OutputFlags output;
  std::string sweep_to;
  int sweep_points = 11;
};

int cmd_entropy(const EntropyFlags& f, std::ostream& out) {
  const auto c = load_constellation(f.model.constellation);
  const auto cfg = make_config(f.integrator, c.dimension());
  Json doc = header("entropy", f.model, cfg);
  std::optional<ChannelModel> model;
  Vector lambda;
  if (!f.model.t_file.empty()) {
    auto t = load_matrix_scaling(f.model.t_file);
    if (t.dimension() != c.dimension()) throw ValidationError("--t-file dimension does not match the constellation");
    doc["T"] = to_json(t.matrix());
    model.emplace(c, std::move(t));
  } else {
    lambda = read_lambda(f.model, true);
    require_length(lambda, c, "--lambda");
    doc["lambda"] = to_json(lambda);
    model.emplace(c, ScalingVector(lambda));
  }
  const auto report = differential_entropy(*model, cfg);
  doc["report"] = to_json(report);
  bool ok = report.tolerance_met;

  if (!f.sweep_to.empty()) {
    if (lambda.size() == 0) throw ValidationError("--sweep-to needs a diagonal --lambda");
    const Vector to = parse_lambda_list(f.sweep_to);
    require_length(to, c, "--sweep-to");
    if (f.sweep_points < 2) throw ValidationError("--sweep-points must be >= 2");
    std::vector<SweepRow> rows;
    for (int i = 0; i < f.sweep_points; ++i) {
      const double s = static_cast<double>(i) / (f.sweep_points - 1);
      const Vector l = ((1.0 - s) * lambda + s * to).cwiseMax(0.0);
      rows.push_back({l, entropy_power_hessian(ChannelModel(c, ScalingVector(l)), cfg)});
      ok = ok && rows.back().report.entropy.tolerance_met;
    }
    Json sweep;
    sweep["to"] = to_json(to);
    sweep["points"] = f.sweep_points;
    sweep["tolerance_met"] = ok;
    doc["sweep"] = std::move(sweep);
    emit_csv(sweep_csv(rows), f.output);
  }
  emit(doc, f.output, out);
  return ok ? kOk : kIntegrationBudget;
}

// ---------------------------------------------------------------- hessian

struct HessianFlags {
  ModelFlags model;
  IntegratorFlags integrator;
  OutputFlags output;
  bool check_fd = false;
};

int cmd_hessian(const HessianFlags& f, std::ostream& out) {
  const auto c = load_constellation(f.model.constellation);
  const auto cfg = make_config(f.integrator, c.dimension());
  const Vector lambda = read_lambda(f.model, true);
  require_length(lambda, c, "--lambda");
  const ChannelModel model(c, ScalingVector(lambda));
  auto report = entropy_power_hessian(model, cfg);
  if (f.check_fd) report.fd_residuals = check_finite_differences(model, report, cfg);

  Json doc = header("hessian", f.model, cfg);
  doc["lambda"] = to_json(lambda);
  doc["report"] = to_json(report);
  emit(doc, f.output, out);
  if (report.fd_residuals && !report.fd_residuals->pass) return kSelfCheck;
  return report.entropy.tolerance_met ? kOk : kIntegrationBudget;
}

// ---------------------------------------------------------- verify-lemmas

struct LemmaFlags {
  int trials = 1000;
  std::optional<std::uint64_t> seed;
  int max_dim = 8;
  OutputFlags output;
};

int cmd_verify_lemmas(const LemmaFlags& f, std::ostream& out) {
  LemmaSuiteOptions opts;
  opts.trials = f.trials;
  opts.seed = f.seed ? *f.seed : default_seed();
  opts.max_dim = f.max_dim;
  const auto summaries = run_lemma_suite(opts);
  std::string text;
  bool ok = true;
  for (const auto& s : summaries) {
    text += to_json(s).dump() + "\n";
    ok = ok && s.pass;
  }
  if (f.output.output.empty()) {
    out << text;
  } else {
    write_file(f.output.output, text);
  }
  return ok ? kOk : kSelfCheck;
}

// ------------------------------------------------------------------ probe

struct ProbeFlags {
  ModelFlags model;
  IntegratorFlags integrator;
  OutputFlags output;
  std::string mode;
  std::string lambda_to;
  std::string t_file_to;
  std::optional<double> t_min;
  double t_max = 4.0;
  int grid = 33;
  int search_pairs = 0;
};

int cmd_probe(const ProbeFlags& f, std::ostream& out) {
  const auto c = load_constellation(f.model.constellation);
  const auto cfg = make_config(f.integrator, c.dimension());
  Json doc = header("probe", f.model, cfg);
  doc["mode"] = f.mode;
  doc["grid"] = f.grid;

  auto finish_single = [&](const SegmentProbe& p, bool violation_is_failure) {
    doc["probe"] = to_json(p);
    emit_csv(probe_csv(p), f.output);
    emit(doc, f.output, out);
    if (violation_is_failure && p.violation) return kSelfCheck;
    return p.tolerance_met ? kOk : kIntegrationBudget;
  };

  if (f.mode == "diagonal") {
    const Vector a = read_lambda(f.model, true);
    require_length(a, c, "--lambda");
    if (f.lambda_to.empty()) throw ValidationError("--mode diagonal needs --lambda-to");
    const Vector b = parse_lambda_list(f.lambda_to);
    require_length(b, c, "--lambda-to");
    return finish_single(probe_diagonal_segment(c, a, b, f.grid, cfg), true);
  }
  if (f.mode == "scalar-signal" || f.mode == "scalar-noise") {
    const bool noise = f.mode == "scalar-noise";
    Vector lambda0 = read_lambda(f.model, false);
    if (lambda0.size() == 0) lambda0 = Vector::Ones(c.dimension());
    require_length(lambda0, c, "--lambda");
    const double t_min = f.t_min ? *f.t_min : (noise ? 0.1 : 0.0);
    doc["t_min"] = t_min;
    doc["t_max"] = f.t_max;
    return finish_single(probe_scalar_costa(c, lambda0, noise ? CostaMode::noise : CostaMode::signal,
                                            t_min, f.t_max, f.grid, cfg),
                         true);
  }
  if (f.mode == "matrix") {
    if (f.search_pairs > 0) {
      if (!f.model.t_file.empty() || !f.t_file_to.empty()) {
        throw ValidationError("--search-pairs cannot be combined with --t-file/--t-file-to");
      }
      const std::uint64_t seed = f.integrator.seed ? *f.integrator.seed : default_seed();
      const auto r = search_matrix_counterexamples(c, f.search_pairs, seed, f.grid, cfg);
      Json pairs = Json::array();
      bool ok = true;
      for (const auto& p : r.probes) {
        Json pj;
        pj["T_a"] = to_json(p.t_a);
        pj["T_b"] = to_json(p.t_b);
        pj["min_second_difference"] = p.min_second_difference;
        pj["max_second_difference"] = p.max_second_difference;
        pj["max_excess"] = p.max_excess;
        pj["violation"] = p.violation;
        pairs.push_back(std::move(pj));
        ok = ok && p.tolerance_met;
      }
      Json search;
      search["seed"] = seed;
      search["pairs"] = std::move(pairs);
      search["found"] = r.found;
      search["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
      search["best_excess"] = r.best_excess;
      doc["search"] = std::move(search);
      emit_csv(search_csv(r), f.output);
      emit(doc, f.output, out);
      return ok ? kOk : kIntegrationBudget;
    }
    if (f.model.t_file.empty() || f.t_file_to.empty()) {
      throw ValidationError("--mode matrix needs --t-file and --t-file-to, or --search-pairs");
    }
    const auto ta = load_matrix_scaling(f.model.t_file);
    const auto tb = load_matrix_scaling(f.t_file_to);
    // A violation along a full-matrix segment is a finding, not a failure.
    return finish_single(probe_matrix_segment(c, ta.matrix(), tb.matrix(), f.grid, cfg), false);
  }
  throw ValidationError("--mode must be one of diagonal, scalar-signal, scalar-noise, matrix");
}

// --------------------------------------------------------------- optimize

struct OptimizeFlags {
  ModelFlags model;
  IntegratorFlags integrator;
  OutputFlags output;
  double power = 0.0;
  double tol = 1e-6;
  int max_iter = 500;
  bool newton = false;
};

int cmd_optimize(const OptimizeFlags& f, std::ostream& out) {
  const auto c = load_constellation(f.model.constellation);
  const auto cfg = make_config(f.integrator, c.dimension());
  AllocationOptions opts;
  opts.power = f.power;
  opts.tolerance = f.tol;
  opts.max_iter = f.max_iter;
  opts.newton = f.newton;
  const auto r = optimize_power_allocation(c, opts, cfg);
  Json doc = header("optimize", f.model, cfg);
  doc["power"] = f.power;
  doc["tol"] = f.tol;
  doc["max_iter"] = f.max_iter;
  doc["newton"] = f.newton;
  doc["result"] = to_json(r);
  emit(doc, f.output, out);
  return r.tolerance_met ? kOk : kIntegrationBudget;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy-power laboratory for finite-constellation Gaussian channels", "eplab"};
  app.require_subcommand(1);
  app.fallthrough(false);

  EntropyFlags entropy;
  auto* e = app.add_subcommand("entropy", "h(Y), N(Y) and I(X;Y)");
  add_model_flags(e, entropy.model, true);
  add_integrator_flags(e, entropy.integrator);
  add_output_flags(e, entropy.output, true);
  e->add_option("--sweep-to", entropy.sweep_to, "endpoint λ of a CSV sweep from --lambda");
  e->add_option("--sweep-points", entropy.sweep_points, "sweep grid size")->capture_default_str();

  HessianFlags hessian;
  auto* h = app.add_subcommand("hessian", "gradient and Hessians of h and N in λ");
  add_model_flags(h, hessian.model, false);
  add_integrator_flags(h, hessian.integrator);
  add_output_flags(h, hessian.output, false);
  h->add_flag("--check-fd", hessian.check_fd, "attach finite-difference residuals");

  LemmaFlags lemmas;
  auto* v = app.add_subcommand("verify-lemmas", "randomized matrix-inequality suite (JSON lines)");
  v->add_option("--trials", lemmas.trials, "trials per claim")->capture_default_str();
  v->add_option("--seed", lemmas.seed, "suite seed (default $EPLAB_SEED or 42)");
  v->add_option("--max-dim", lemmas.max_dim, "largest matrix dimension")->capture_default_str();
  add_output_flags(v, lemmas.output, false);

  ProbeFlags probe;
  auto* p = app.add_subcommand("probe", "concavity probes along parameter segments");
  add_model_flags(p, probe.model, true);
  add_integrator_flags(p, probe.integrator);
  add_output_flags(p, probe.output, true);
  p->add_option("--mode", probe.mode, "diagonal | scalar-signal | scalar-noise | matrix")->required();
  p->add_option("--lambda-to", probe.lambda_to, "diagonal mode: second endpoint");
  p->add_option("--t-file-to", probe.t_file_to, "matrix mode: second endpoint");
  p->add_option("--t-min", probe.t_min, "scalar modes: first grid point (default 0, or 0.1 for noise)");
  p->add_option("--t-max", probe.t_max, "scalar modes: last grid point")->capture_default_str();
  p->add_option("--grid", probe.grid, "grid size")->capture_default_str();
  p->add_option("--search-pairs", probe.search_pairs, "matrix mode: random endpoint pairs to probe");

  OptimizeFlags optimize;
  auto* o = app.add_subcommand("optimize", "mutual-information power allocation");
  add_model_flags(o, optimize.model, false);
  add_integrator_flags(o, optimize.integrator);
  add_output_flags(o, optimize.output, false);
  o->add_option("--power", optimize.power, "total power budget P")->required();
  o->add_option("--tol", optimize.tol, "KKT residual tolerance")->capture_default_str();
  o->add_option("--max-iter", optimize.max_iter, "iteration cap")->capture_default_str();
  o->add_flag("--newton", optimize.newton, "Newton steps on the free face");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kValidation;
  }

  try {
    if (e->parsed()) return cmd_entropy(entropy, out);
    if (h->parsed()) return cmd_hessian(hessian, out);
    if (v->parsed()) return cmd_verify_lemmas(lemmas, out);
    if (p->parsed()) return cmd_probe(probe, out);
    if (o->parsed()) return cmd_optimize(optimize, out);
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << "\n";
    return kValidation;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace eplab::cli
