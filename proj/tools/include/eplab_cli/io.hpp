#pragma once

#include "eplab/allocation.hpp"
#include "eplab/concavity.hpp"
#include "eplab/constellation.hpp"
#include "eplab/entropy.hpp"
#include "eplab/matrix_inequalities.hpp"
#include "eplab/quadrature.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace eplab::cli {

using Json = nlohmann::ordered_json;

/// Reads `{"n": int, "points": [[x_1..x_n], ...], "probs": [...]}`; one inner
/// array per atom.
Constellation load_constellation(const std::filesystem::path& path);
Constellation constellation_from_json(const Json& doc);
Json constellation_to_json(const Constellation& c);

/// "0.7,1.3" → (0.7, 1.3). Whitespace around entries is ignored.
Vector parse_lambda_list(std::string_view text);
/// A bare JSON array or {"lambda": [...]}.
Vector load_lambda_file(const std::filesystem::path& path);

/// {"T": [[...], ...]} with an optional "factor" of the same shape.
MatrixScaling load_matrix_scaling(const std::filesystem::path& path);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const IntegratorConfig& cfg);
Json to_json(const EntropyReport& r);
Json to_json(const HessianReport& r);
Json to_json(const FdResiduals& r);
Json to_json(const ClaimSummary& s);
Json to_json(const SegmentProbe& p);
Json to_json(const AllocationResult& r);

/// Shortest decimal that round-trips; NaN and infinities print as empty.
std::string format_number(double x);

/// Columns t, N, error, second_difference, threshold.
std::string probe_csv(const SegmentProbe& p);
/// Same columns preceded by the pair index.
std::string search_csv(const MatrixSearchReport& r);

struct SweepRow {
  Vector lambda;
  HessianReport report;
};
/// Columns lambda_1..lambda_n, h, N, I, max_eig_hess_h, max_eig_hess_N.
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace eplab::cli
