#include "eplab/entropy.hpp"

#include "eplab/linalg.hpp"

#include <cmath>
#include <vector>

namespace eplab {

double entropy_power_from_entropy(double entropy, int dimension) {
  return std::exp(2.0 * entropy / dimension) / kTwoPiE;
}

double mutual_information_from_entropy(double entropy, int dimension) {
  return entropy - 0.5 * dimension * std::log(kTwoPiE);
}

EntropyReport EntropyReport::from_entropy(int dimension, double entropy, double entropy_error,
                                          bool tolerance_met) {
  EntropyReport r;
  r.dimension = dimension;
  r.entropy = entropy;
  r.entropy_power = entropy_power_from_entropy(entropy, dimension);
  r.mutual_information = mutual_information_from_entropy(entropy, dimension);
  r.entropy_error = entropy_error;
  // dN = N · (2/n) dh to first order.
  r.entropy_power_error = r.entropy_power * 2.0 / dimension * entropy_error;
  r.mutual_information_error = entropy_error;
  r.tolerance_met = tolerance_met;
  return r;
}

EntropyReport differential_entropy(const ChannelModel& model, const IntegratorConfig& cfg) {
  const auto& law = model.mixture();
  std::vector<double> resp(static_cast<std::size_t>(law.components()));
  const auto ex = expect(law, cfg, 1, [&](const double* y, double* out) {
    out[0] = -law.log_density_and_responsibilities(y, resp.data());
  });
  return EntropyReport::from_entropy(model.dimension(), ex.values[0], ex.errors[0],
                                     ex.tolerance_met);
}

Vector entropy_gradient(const ChannelModel& model, const IntegratorConfig& cfg) {
  model.require_diagonal("entropy_gradient");
  return 0.5 * integrate_channel(model, cfg).mmse.diagonal();
}

Matrix entropy_hessian(const ChannelModel& model, const IntegratorConfig& cfg) {
  model.require_diagonal("entropy_hessian");
  return -0.5 * integrate_channel(model, cfg).phi_hadamard;
}

Matrix entropy_power_hessian_from_mmse(double entropy_power, const Vector& diag_e,
                                       const Matrix& phi_hadamard) {
  const double n = static_cast<double>(diag_e.size());
  const Matrix rank_one = diag_e * diag_e.transpose() / n;
  return (entropy_power / n) * (rank_one - phi_hadamard);
}

Matrix entropy_power_hessian_chain_rule(double entropy_power, const Vector& gradient_h,
                                        const Matrix& hessian_h) {
  const double n = static_cast<double>(gradient_h.size());
  return (2.0 * entropy_power / n) *
         (2.0 * gradient_h * gradient_h.transpose() / n + hessian_h);
}

HessianReport assemble_hessian_report(const ChannelExpectations& ex) {
  HessianReport r;
  r.entropy = EntropyReport::from_entropy(ex.dimension, ex.entropy, ex.entropy_error,
                                          ex.tolerance_met);
  r.gradient_h = 0.5 * ex.mmse.diagonal();
  r.gradient_error = 0.5 * ex.mmse_error.diagonal();
  r.hessian_h = -0.5 * ex.phi_hadamard;
  r.hessian_h_error = 0.5 * ex.phi_hadamard_error;
  r.hessian_N = entropy_power_hessian_from_mmse(r.entropy.entropy_power, ex.mmse.diagonal(),
                                                ex.phi_hadamard);
  r.max_eigenvalue_h = max_eigenvalue(r.hessian_h);
  r.max_eigenvalue_N = max_eigenvalue(r.hessian_N);
  return r;
}

HessianReport entropy_power_hessian(const ChannelModel& model, const IntegratorConfig& cfg) {
  model.require_diagonal("entropy_power_hessian");
  return assemble_hessian_report(integrate_channel(model, cfg));
}

double chain_rule_residual(const HessianReport& report) {
  const Matrix chain = entropy_power_hessian_chain_rule(report.entropy.entropy_power,
                                                        report.gradient_h, report.hessian_h);
  const double diff = (report.hessian_N - chain).norm();
  const double scale = report.hessian_N.norm();
  if (scale == 0.0) return diff;
  return diff / scale;
}

double chain_rule_assembly_check(const ChannelModel& model, const IntegratorConfig& cfg) {
  return chain_rule_residual(entropy_power_hessian(model, cfg));
}

}  // namespace eplab
