#include "eplab_cli/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace eplab::cli {

namespace fs = std::filesystem;

namespace {

Json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

std::vector<double> number_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError(what + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix square_matrix(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a non-empty array of rows");
  const auto n = static_cast<long>(j.size());
  Matrix m(n, n);
  for (long i = 0; i < n; ++i) {
    const auto row = number_array(j[static_cast<std::size_t>(i)], what + " row");
    if (static_cast<long>(row.size()) != n) throw ValidationError(what + " must be square");
    for (long k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json number_list(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ValidationError("failed writing file: " + path.string());
}

Constellation constellation_from_json(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("constellation: expected a JSON object");
  for (const char* key : {"n", "points", "probs"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("constellation: missing \"") + key + "\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1) {
    throw ValidationError("constellation: \"n\" must be a positive integer");
  }
  const auto n = doc["n"].get<std::size_t>();
  if (!doc["points"].is_array()) throw ValidationError("constellation: \"points\" must be an array");
  std::vector<std::vector<double>> points;
  for (const auto& p : doc["points"]) {
    points.push_back(number_array(p, "constellation point"));
    if (points.back().size() != n) {
      throw ValidationError("constellation: point " + std::to_string(points.size() - 1) +
                            " has length " + std::to_string(points.back().size()) +
                            ", expected n = " + std::to_string(n));
    }
  }
  return validate_constellation(points, number_array(doc["probs"], "constellation probs"));
}

Constellation load_constellation(const fs::path& path) {
  try {
    return constellation_from_json(parse_json_file(path));
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0 || msg.rfind("cannot open", 0) == 0) throw;
    throw ValidationError(path.string() + ": " + msg);
  }
}

Json constellation_to_json(const Constellation& c) {
  Json doc;
  doc["n"] = c.dimension();
  Json points = Json::array();
  for (int k = 0; k < c.size(); ++k) points.push_back(to_json(Vector(c.points().col(k))));
  doc["points"] = std::move(points);
  doc["probs"] = to_json(c.probs());
  return doc;
}

Vector parse_lambda_list(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string token(text.substr(start, end - start));
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw ValidationError("--lambda: empty entry in \"" + std::string(text) + "\"");
    token = token.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ValidationError("--lambda: not a number: \"" + token + "\"");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<long>(values.size()));
}

Vector load_lambda_file(const fs::path& path) {
  const Json doc = parse_json_file(path);
  const Json& arr = doc.is_object() && doc.contains("lambda") ? doc["lambda"] : doc;
  const auto values = number_array(arr, path.string() + ": lambda");
  if (values.empty()) throw ValidationError(path.string() + ": lambda is empty");
  return Eigen::Map<const Vector>(values.data(), static_cast<long>(values.size()));
}

MatrixScaling load_matrix_scaling(const fs::path& path) {
  const Json doc = parse_json_file(path);
  if (!doc.is_object() || !doc.contains("T")) {
    throw ValidationError(path.string() + ": expected an object with a \"T\" matrix");
  }
  const Matrix t = square_matrix(doc["T"], path.string() + ": T");
  if (doc.contains("factor")) {
    return MatrixScaling(t, square_matrix(doc["factor"], path.string() + ": factor"));
  }
  return MatrixScaling::from_matrix(t);
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (long i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

Json to_json(const IntegratorConfig& cfg) {
  Json j;
  j["method"] = std::string(to_string(cfg.method));
  if (cfg.method == IntegrationMethod::quadrature) {
    j["order"] = cfg.order;
  } else {
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
  }
  j["target_tolerance"] = cfg.target_tolerance;
  return j;
}

Json to_json(const EntropyReport& r) {
  Json j;
  j["dimension"] = r.dimension;
  j["entropy"] = number(r.entropy);
  j["entropy_error_estimate"] = number(r.entropy_error);
  j["entropy_power"] = number(r.entropy_power);
  j["entropy_power_error_estimate"] = number(r.entropy_power_error);
  j["mutual_information"] = number(r.mutual_information);
  j["mutual_information_error_estimate"] = number(r.mutual_information_error);
  j["tolerance_met"] = r.tolerance_met;
  return j;
}

Json to_json(const FdResiduals& r) {
  Json j;
  j["fd_gradient"] = to_json(r.fd_gradient);
  j["fd_hessian"] = to_json(r.fd_hessian);
  j["gradient_residual"] = number(r.gradient_residual);
  j["gradient_bound"] = number(r.gradient_bound);
  j["hessian_residual"] = number(r.hessian_residual);
  j["hessian_bound"] = number(r.hessian_bound);
  j["pass"] = r.pass;
  return j;
}

Json to_json(const HessianReport& r) {
  Json j;
  j["entropy"] = to_json(r.entropy);
  j["gradient_h"] = to_json(r.gradient_h);
  j["gradient_h_error_estimate"] = to_json(r.gradient_error);
  j["hessian_h"] = to_json(r.hessian_h);
  j["hessian_h_error_estimate"] = to_json(r.hessian_h_error);
  j["hessian_N"] = to_json(r.hessian_N);
  j["max_eigenvalue_h"] = number(r.max_eigenvalue_h);
  j["max_eigenvalue_N"] = number(r.max_eigenvalue_N);
  if (r.fd_residuals) j["fd_residuals"] = to_json(*r.fd_residuals);
  return j;
}

Json to_json(const ClaimSummary& s) {
  Json j;
  j["claim"] = s.claim;
  j["trials"] = s.trials;
  j["min_margin"] = number(s.min_margin);
  j["pass"] = s.pass;
  if (s.witness) j["witness"] = to_json(*s.witness);
  return j;
}

Json to_json(const SegmentProbe& p) {
  Json j;
  j["kind"] = std::string(to_string(p.kind));
  if (p.lambda_a.size() > 0) j["lambda_a"] = to_json(p.lambda_a);
  if (p.lambda_b.size() > 0) j["lambda_b"] = to_json(p.lambda_b);
  if (p.t_a.size() > 0) j["T_a"] = to_json(p.t_a);
  if (p.t_b.size() > 0) j["T_b"] = to_json(p.t_b);
  j["grid_size"] = p.grid_size();
  j["t"] = number_list(p.t);
  j["N"] = number_list(p.values);
  j["N_error_estimate"] = number_list(p.errors);
  j["second_differences"] = number_list(p.second_differences);
  j["min_second_difference"] = number(p.min_second_difference);
  j["max_second_difference"] = number(p.max_second_difference);
  j["max_excess"] = number(p.max_excess);
  j["violation"] = p.violation;
  if (p.violation_index) {
    j["violation_index"] = *p.violation_index;
    j["violation_t"] = number(p.t[static_cast<std::size_t>(*p.violation_index)]);
  } else {
    j["violation_index"] = nullptr;
    j["violation_t"] = nullptr;
  }
  j["tolerance_met"] = p.tolerance_met;
  return j;
}

Json to_json(const AllocationResult& r) {
  Json j;
  j["lambda"] = to_json(r.lambda);
  j["mutual_information"] = number(r.mutual_information);
  j["mutual_information_error_estimate"] = number(r.mutual_information_error);
  j["iterations"] = r.iterations;
  j["kkt_residual"] = number(r.kkt_residual);
  j["gradient"] = to_json(r.gradient);
  j["converged"] = r.converged;
  j["tolerance_met"] = r.tolerance_met;
  j["objective_history"] = number_list(r.objective_history);
  return j;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  return fmt::format("{}", x);
}

namespace {

void probe_rows(std::string& out, const SegmentProbe& p, const std::string& prefix) {
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    out += prefix;
    out += format_number(p.t[i]) + "," + format_number(p.values[i]) + "," +
           format_number(p.errors[i]) + "," + format_number(p.second_differences[i]) + "," +
           format_number(p.thresholds[i]) + "\n";
  }
}

}  // namespace

std::string probe_csv(const SegmentProbe& p) {
  std::string out = "t,N,error,second_difference,threshold\n";
  probe_rows(out, p, "");
  return out;
}

std::string search_csv(const MatrixSearchReport& r) {
  std::string out = "pair,t,N,error,second_difference,threshold\n";
  for (std::size_t k = 0; k < r.probes.size(); ++k) {
    probe_rows(out, r.probes[k], std::to_string(k) + ",");
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  const long n = rows.empty() ? 0 : rows.front().lambda.size();
  for (long i = 0; i < n; ++i) out += "lambda_" + std::to_string(i + 1) + ",";
  out += "h,N,I,max_eig_hess_h,max_eig_hess_N\n";
  for (const auto& row : rows) {
    for (long i = 0; i < n; ++i) out += format_number(row.lambda(i)) + ",";
    const auto& e = row.report.entropy;
    out += format_number(e.entropy) + "," + format_number(e.entropy_power) + "," +
           format_number(e.mutual_information) + "," + format_number(row.report.max_eigenvalue_h) +
           "," + format_number(row.report.max_eigenvalue_N) + "\n";
  }
  return out;
}

}  // namespace eplab::cli
