// Desk-scale acceptance run. Prints one "CRITERION k PASS|FAIL" line per
// criterion and exits nonzero if any of them fails.

#include "eplab/allocation.hpp"
#include "eplab/concavity.hpp"
#include "eplab/entropy.hpp"
#include "eplab/finite_difference.hpp"
#include "eplab/identities.hpp"
#include "eplab/linalg.hpp"
#include "eplab/matrix_inequalities.hpp"
#include "eplab/mmse.hpp"
#include "eplab_cli/cli.hpp"
#include "eplab_cli/io.hpp"
#include "oracles.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace eplab;
namespace fs = std::filesystem;

namespace {

const std::string kData = EPLAB_TEST_DATA_DIR;

struct Instance {
  Constellation constellation;
  Vector lambda;
};

// n ∈ {1, 2, 3} cycling, K ∈ [2, 8], λ ∈ [0.1, 3]ⁿ.
std::vector<Instance> seeded_instances(int count, std::uint64_t seed, double lambda_lo = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> atoms(2, 8);
  std::uniform_real_distribution<double> power(lambda_lo, 3.0);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + i % 3;
    const int k = atoms(rng);
    Vector lambda(n);
    for (int j = 0; j < n; ++j) lambda(j) = power(rng);
    out.push_back({random_constellation(n, k, rng()), lambda});
  }
  return out;
}

double max_symmetric_eigenvalue(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double spectral_norm(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

class Verdicts {
 public:
  void record(int criterion, bool pass, const std::string& detail, double seconds) {
    all_ = all_ && pass;
    fmt::print("CRITERION {} {}: {} [{:.1f}s]\n", criterion, pass ? "PASS" : "FAIL", detail, seconds);
    std::fflush(stdout);
  }
  bool all() const { return all_; }

 private:
  bool all_ = true;
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void criteria_1_2(Verdicts& v) {
  const auto t0 = Clock::now();
  const auto cfg = IntegratorConfig::quadrature();
  double worst_grad = 0.0, worst_hess = 0.0;
  bool grad_ok = true, hess_ok = true;
  for (const auto& inst : seeded_instances(20, 1001)) {
    const ChannelModel model(inst.constellation, ScalingVector(inst.lambda));
    const auto report = entropy_power_hessian(model, cfg);
    const auto fd = check_finite_differences(model, report, cfg);
    worst_grad = std::max(worst_grad, fd.gradient_residual / fd.gradient_bound);
    worst_hess = std::max(worst_hess, fd.hessian_residual / fd.hessian_bound);
    grad_ok = grad_ok && fd.gradient_residual <= fd.gradient_bound;
    hess_ok = hess_ok && fd.hessian_residual <= fd.hessian_bound;
  }
  v.record(1, grad_ok, fmt::format("20 instances, worst gradient residual/bound = {:.3g}", worst_grad), since(t0));

  bool nsd_ok = true;
  double worst_ratio = -1e300;
  const auto quick = cfg.without_error_estimate();
  for (const auto& inst : seeded_instances(100, 2002)) {
    const auto ex = integrate_channel(ChannelModel(inst.constellation, ScalingVector(inst.lambda)), quick);
    const Matrix hess = -0.5 * ex.phi_hadamard;
    const double top = max_symmetric_eigenvalue(hess);
    const double allowed = 1e-8 * std::max(1.0, spectral_norm(hess));
    nsd_ok = nsd_ok && top <= allowed;
    worst_ratio = std::max(worst_ratio, top / allowed);
  }
  v.record(2, hess_ok && nsd_ok,
           fmt::format("FD Hessian worst residual/bound = {:.3g}; 100 instances max eig / allowance = {:.3g}",
                       worst_hess, worst_ratio),
           since(t0));
}

void criterion_3(Verdicts& v) {
  const auto t0 = Clock::now();
  const auto quick = IntegratorConfig::quadrature().without_error_estimate();
  bool ok = true;
  double worst_residual = 0.0, worst_ratio = -1e300;
  for (const auto& inst : seeded_instances(100, 3003)) {
    const auto report = entropy_power_hessian(ChannelModel(inst.constellation, ScalingVector(inst.lambda)), quick);
    const double residual = chain_rule_residual(report);
    const double top = max_symmetric_eigenvalue(report.hessian_N);
    const double allowed = 1e-8 * std::max(1.0, spectral_norm(report.hessian_N));
    ok = ok && residual <= 1e-12 && top <= allowed;
    worst_residual = std::max(worst_residual, residual);
    worst_ratio = std::max(worst_ratio, top / allowed);
  }
  v.record(3, ok,
           fmt::format("100 instances, worst relative assembly gap = {:.3g}, max eig / allowance = {:.3g}",
                       worst_residual, worst_ratio),
           since(t0));
}

void criterion_4(Verdicts& v) {
  const auto t0 = Clock::now();
  LemmaSuiteOptions opts;
  opts.trials = 1000;
  opts.seed = 42;
  const auto claims = run_lemma_suite(opts);
  bool ok = claims.size() == 11;
  std::string failing;
  double worst = 1e300;
  for (const auto& c : claims) {
    ok = ok && c.pass && c.trials == 1000 && c.min_margin >= -1e-9;
    if (!c.pass) failing += " " + c.claim;
    worst = std::min(worst, c.min_margin);
  }
  // The corollary's equality case on fixed diagonal inputs.
  for (int n = 1; n <= 6; ++n) {
    Vector d = Vector::LinSpaced(n, 0.5, 4.0);
    const auto r = check_cor1(d.asDiagonal());
    ok = ok && r.pass && r.equality && r.value <= n + 1e-9 * n;
  }
  v.record(4, ok,
           fmt::format("{} claims x 1000 trials, smallest margin = {:.3g}{}", claims.size(), worst,
                       failing.empty() ? "" : "; failing:" + failing),
           since(t0));
}

void criterion_5(Verdicts& v) {
  const auto t0 = Clock::now();
  const auto cfg = IntegratorConfig::quadrature();
  int reciprocal = 0, bruijn = 0, score = 0, gamma = 0;
  double worst_score = 0.0;
  const auto instances = seeded_instances(10, 5005);
  for (const auto& inst : instances) {
    const ChannelModel model(inst.constellation, ScalingVector(inst.lambda));
    reciprocal += reciprocal_identity_check(model, cfg).pass;
    bruijn += de_bruijn_check(model, cfg).pass;
    const auto s = score_identity_check(model, cfg);
    score += s.pass && s.max_residual <= 1e-10;
    worst_score = std::max(worst_score, s.max_residual);
    gamma += hessian_gamma_check(model, cfg).pass;
  }
  const int n = static_cast<int>(instances.size());
  v.record(5, reciprocal == n && bruijn == n && score == n && gamma == n,
           fmt::format("passing out of {}: reciprocal {}, de Bruijn {}, score {} (worst {:.2g}), gamma Hessian {}", n,
                       reciprocal, bruijn, score, worst_score, gamma),
           since(t0));
}

void criterion_6(Verdicts& v) {
  const auto t0 = Clock::now();
  const auto cfg = IntegratorConfig::quadrature();
  Vector one(1);
  one << 1.0;
  Vector two(2);
  two << 1.0, 0.6;
  struct Case {
    const char* name;
    Constellation c;
    Vector lambda0;
  };
  const std::vector<Case> cases{{"bpsk", Constellation::bpsk(), one},
                                {"2-D 3-point", cli::load_constellation(kData + "/three_point_2d.json"), two}};
  bool ok = true;
  std::string detail;
  for (const auto& cs : cases) {
    const auto sig = probe_scalar_costa(cs.c, cs.lambda0, CostaMode::signal, 0.0, 4.0, 33, cfg);
    const auto noise = probe_scalar_costa(cs.c, cs.lambda0, CostaMode::noise, 0.1, 4.0, 33, cfg);
    ok = ok && !sig.violation && !noise.violation;
    detail += fmt::format("{}: signal max excess {:.3g}, noise max excess {:.3g}; ", cs.name, sig.max_excess,
                          noise.max_excess);
  }
  v.record(6, ok, detail.substr(0, detail.size() - 2), since(t0));
}

void criterion_7(Verdicts& v) {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    Vector point = Vector::LinSpaced(n, -1.0, 2.0);
    Vector lambda = Vector::LinSpaced(n, 0.5, 2.5);
    const ChannelModel model(Constellation::deterministic(point), ScalingVector(lambda));
    const auto report = entropy_power_hessian(model, IntegratorConfig::quadrature());
    const double dev = std::max({std::abs(report.entropy.entropy_power - 1.0),
                                 std::abs(report.entropy.mutual_information), report.gradient_h.cwiseAbs().maxCoeff(),
                                 report.hessian_h.cwiseAbs().maxCoeff(), report.hessian_N.cwiseAbs().maxCoeff()});
    worst = std::max(worst, dev);
    ok = ok && dev <= 1e-9;
  }
  v.record(7, ok, fmt::format("n = 1..3, largest deviation = {:.3g}", worst), since(t0));
}

void criterion_8(Verdicts& v) {
  const auto t0 = Clock::now();
  const double lambda = 1.0;
  Vector l(1);
  l << lambda;
  const ChannelModel model(Constellation::discretized_gaussian(64), ScalingVector(l));
  const auto cfg = IntegratorConfig::quadrature();
  const double e = mmse_matrix(model, cfg).e_matrix(0, 0);
  const double h = differential_entropy(model, cfg).entropy;
  const double e_gap = std::abs(e - 1.0 / (1.0 + lambda));
  const double h_gap = std::abs(h - 0.5 * std::log(2.0 * M_PI * M_E * (1.0 + lambda)));
  v.record(8, e_gap <= 1e-3 && h_gap <= 1e-3,
           fmt::format("64 atoms, |E - 0.5| = {:.3g}, |h - closed form| = {:.3g}", e_gap, h_gap), since(t0));
}

void criterion_9(Verdicts& v) {
  const auto t0 = Clock::now();
  const auto cfg = IntegratorConfig::quadrature();
  struct Case {
    const char* name;
    Constellation c;
    double power;
  };
  const std::vector<Case> cases{
      {"bpsk x pam4", Constellation::product(Constellation::bpsk(), Constellation::pam(4)), 2.0},
      {"bpsk x point", Constellation::product(Constellation::bpsk(), Constellation::deterministic(Vector::Zero(1))),
       1.5},
      {"random 2-D", random_constellation(2, 5, 909), 3.0}};
  bool ok = true;
  std::string detail;
  for (const auto& cs : cases) {
    AllocationOptions opts;
    opts.power = cs.power;
    const auto r = optimize_power_allocation(cs.c, opts, cfg);
    bool monotone = true;
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      monotone = monotone && r.objective_history[i] >= r.objective_history[i - 1] - 1e-12;
    }
    const bool feasible = r.lambda.minCoeff() >= -1e-12 && r.lambda.sum() <= cs.power + 1e-12;
    const auto quick = cfg.without_error_estimate();
    const auto [best, best_l1] = oracle::grid_search_2d(
        [&](double a, double b) {
          Vector l(2);
          l << a, b;
          return differential_entropy(ChannelModel(cs.c, ScalingVector(l)), quick).mutual_information;
        },
        cs.power, 0.01);
    const double gap = std::abs(r.mutual_information - best);
    ok = ok && r.converged && monotone && feasible && gap <= 1e-3;
    detail += fmt::format("{}: gap {:.2g} after {} iterations{}{}{}; ", cs.name, gap, r.iterations,
                          r.converged ? "" : " NOT CONVERGED", monotone ? "" : " NON-MONOTONE",
                          feasible ? "" : " INFEASIBLE");
    (void)best_l1;
  }
  v.record(9, ok, detail.substr(0, detail.size() - 2), since(t0));
}

void criterion_10(Verdicts& v) {
  const auto t0 = Clock::now();
  bool ok = true;
  // Kinks placed on grid nodes of a 41-point grid over [0, 2].
  const auto t = uniform_grid(0.0, 2.0, 41);
  for (int kink : {7, 20, 33}) {
    std::vector<double> values;
    for (double s : t) values.push_back(-s * s + 0.3 * std::abs(s - t[static_cast<std::size_t>(kink)]));
    const auto p = detect_concavity_violations(t, values, std::vector<double>(t.size(), 1e-9));
    ok = ok && p.violation && p.violation_index && static_cast<int>(*p.violation_index) == kink;
  }
  const auto cfg = IntegratorConfig::quadrature();
  int fired = 0;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> power(0.0, 4.0);
  for (int trial = 0; trial < 4; ++trial) {
    const auto c = random_constellation(2, 3 + trial, rng());
    Vector a(2), b(2);
    a << power(rng), power(rng);
    b << power(rng), power(rng);
    fired += probe_matrix_segment(c, a.asDiagonal(), b.asDiagonal(), 17, cfg).violation;
  }
  ok = ok && fired == 0;
  v.record(10, ok, fmt::format("kinks located at their nodes; diagonal segments fired {} of 4", fired), since(t0));
}

// The CLI suite: every subcommand with file outputs, run into `dir`.
std::vector<std::string> run_cli_suite(const fs::path& dir) {
  fs::create_directories(dir);
  auto data = [](const char* f) { return kData + "/" + f; };
  auto out = [&](const char* f) { return (dir / f).string(); };
  const std::vector<std::pair<const char*, std::vector<std::string>>> suite{
      {"entropy_bpsk",
       {"entropy", "--constellation", data("bpsk.json"), "--lambda", "0.5", "--sweep-to", "2", "--sweep-points", "6",
        "--output", out("entropy_bpsk.json"), "--csv", out("entropy_bpsk.csv")}},
      {"entropy_mc",
       {"entropy", "--constellation", data("qpsk.json"), "--lambda", "1,2", "--method", "monte_carlo", "--samples",
        "200000", "--output", out("entropy_mc.json")}},
      {"entropy_matrix",
       {"entropy", "--constellation", data("three_point_2d.json"), "--t-file", data("t_a.json"), "--output",
        out("entropy_matrix.json")}},
      {"hessian",
       {"hessian", "--constellation", data("three_point_2d.json"), "--lambda-file", data("lambda_2d.json"),
        "--check-fd", "--output", out("hessian.json")}},
      {"lemmas", {"verify-lemmas", "--trials", "50", "--output", out("lemmas.jsonl")}},
      {"probe_diagonal",
       {"probe", "--constellation", data("qpsk.json"), "--lambda", "0.2,2", "--lambda-to", "2,0.3", "--mode",
        "diagonal", "--grid", "9", "--output", out("probe_diagonal.json"), "--csv", out("probe_diagonal.csv")}},
      {"probe_matrix",
       {"probe", "--constellation", data("three_point_2d.json"), "--mode", "matrix", "--search-pairs", "2",
        "--grid", "9", "--order", "24", "--output", out("probe_matrix.json"), "--csv", out("probe_matrix.csv")}},
      {"optimize",
       {"optimize", "--constellation", data("bpsk_x_pam4.json"), "--power", "2", "--output", out("optimize.json")}},
  };
  std::vector<std::string> problems;
  for (const auto& [name, args] : suite) {
    std::ostringstream o, e;
    const int code = cli::run_cli(args, o, e);
    if (code != 0) problems.push_back(fmt::format("{} exited {}: {}", name, code, e.str()));
  }
  return problems;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = cli::read_file(entry.path());
  }
  return files;
}

void criterion_11(Verdicts& v) {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / fmt::format("eplab_acceptance_{}", ::getpid());
  fs::remove_all(root);
  auto problems = run_cli_suite(root / "a");
  const auto second = run_cli_suite(root / "b");
  problems.insert(problems.end(), second.begin(), second.end());
  const auto a = snapshot(root / "a");
  const auto b = snapshot(root / "b");
  int differing = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    differing += it == b.end() || it->second != bytes;
  }
  fs::remove_all(root);
  const bool ok = problems.empty() && differing == 0 && a.size() == b.size() && a.size() == 11;
  std::string detail = fmt::format("{} artifacts per run, {} differ", a.size(), differing);
  for (const auto& p : problems) detail += "; " + p;
  v.record(11, ok, detail, since(t0));
}

}  // namespace

int main() {
  ::unsetenv(cli::kSeedEnvironmentVariable);
  Verdicts v;
  const auto t0 = Clock::now();
  criteria_1_2(v);
  criterion_3(v);
  criterion_4(v);
  criterion_5(v);
  criterion_6(v);
  criterion_7(v);
  criterion_8(v);
  criterion_9(v);
  criterion_10(v);
  criterion_11(v);
  fmt::print("acceptance: {} in {:.1f}s\n", v.all() ? "all criteria pass" : "FAILURES", since(t0));
  return v.all() ? 0 : 1;
}
