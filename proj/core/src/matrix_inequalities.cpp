#include "eplab/matrix_inequalities.hpp"

#include "eplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace eplab {

namespace {

constexpr double kDefiniteTolerance = 1e-10;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
  if (!is_symmetric(m, 1e-12)) throw ValidationError(std::string(what) + ": matrix not symmetric");
}

void require_psd(const Matrix& m, const char* what) {
  require_square(m, what);
  if (min_eigenvalue(m) < -kDefiniteTolerance * tolerance_scale(m)) {
    throw ValidationError(std::string(what) + ": matrix is not positive semidefinite");
  }
}

void require_pd(const Matrix& m, const char* what) {
  require_square(m, what);
  const auto eig = symmetric_eigen(m);
  const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  if (!(eig.values(0) > kDefiniteTolerance * norm)) {
    throw ValidationError(std::string(what) + ": matrix is not positive definite");
  }
}

Matrix spd_inverse(const Matrix& m, const char* what) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw ValidationError(std::string(what) + ": matrix is numerically singular");
  }
  Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  return 0.5 * (inv + inv.transpose());
}

double max_scale(std::initializer_list<const Matrix*> terms) {
  double s = 1.0;
  for (const Matrix* t : terms) s = std::max(s, spectral_norm(*t));
  return s;
}

std::uint64_t seed_for(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  return rng();
}

}  // namespace

PsdCheckReport certify_psd(std::string claim, const Matrix& m, double scale) {
  const auto eig = symmetric_eigen(m);
  PsdCheckReport r;
  r.claim = std::move(claim);
  r.min_eigenvalue = eig.values.size() ? eig.values(0) : 0.0;
  r.scale = std::max(1.0, scale);
  r.tolerance = kPsdRelativeTolerance * r.scale;
  r.pass = r.min_eigenvalue >= -r.tolerance;
  if (!r.pass) r.witness = eig.vectors.col(0);
  return r;
}

Matrix random_psd(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_psd: n must be >= 1");
  std::mt19937_64 rng(seed);
  const Matrix c = gaussian_matrix(n, n + 4, rng);
  Matrix a = c * c.transpose();
  return 0.5 * (a + a.transpose());
}

Matrix random_psd(int n, std::uint64_t seed, const Vector& spectrum) {
  if (n < 1) throw ValidationError("random_psd: n must be >= 1");
  if (spectrum.size() != n) throw ValidationError("random_psd: spectrum length must equal n");
  if (!spectrum.allFinite() || (spectrum.array() < 0.0).any()) {
    throw ValidationError("random_psd: spectrum entries must be finite and nonnegative");
  }
  std::mt19937_64 rng(seed);
  const Matrix q = random_orthogonal(n, rng);
  Matrix a = q * spectrum.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

Matrix random_psd_of_rank(int n, int rank, std::uint64_t seed) {
  if (n < 1 || rank < 0 || rank > n) throw ValidationError("random_psd_of_rank: bad shape");
  if (rank == 0) return Matrix::Zero(n, n);
  std::mt19937_64 rng(seed);
  const Matrix c = gaussian_matrix(n, rank, rng);
  Matrix a = c * c.transpose();
  return 0.5 * (a + a.transpose());
}

Matrix random_correlation(int n, std::uint64_t seed) {
  const Matrix a = random_psd(n, seed);
  const Vector inv_root = a.diagonal().cwiseSqrt().cwiseInverse();
  Matrix r = inv_root.asDiagonal() * a * inv_root.asDiagonal();
  r = (0.5 * (r + r.transpose())).eval();
  r.diagonal().setOnes();
  return r;
}

Matrix diag_matrix(const Matrix& a) { return a.diagonal().asDiagonal(); }

PsdCheckReport check_block_replication(const Matrix& a) {
  require_psd(a, "check_block_replication");
  const long n = a.rows();
  Matrix block(2 * n, 2 * n);
  block << a, a, a, a;
  return certify_psd("lemma1_block_replication", block, tolerance_scale(block));
}

PsdCheckReport check_block_inverse(const Matrix& a) {
  require_pd(a, "check_block_inverse");
  const long n = a.rows();
  const Matrix inv = spd_inverse(a, "check_block_inverse");
  const Matrix id = Matrix::Identity(n, n);
  Matrix block(2 * n, 2 * n);
  block << a, id, id, inv;
  return certify_psd("lemma2_block_inverse", block, tolerance_scale(block));
}

SchurProductReport check_schur_product(const Matrix& a, const Matrix& b) {
  require_psd(a, "check_schur_product");
  require_psd(b, "check_schur_product");
  if (a.rows() != b.rows()) throw ValidationError("check_schur_product: dimension mismatch");
  const Matrix product = a.cwiseProduct(b);
  SchurProductReport r;
  r.psd = certify_psd("lemma3_schur_product", product, max_scale({&a, &b, &product}));
  auto definite = [](const Matrix& m) {
    return min_eigenvalue(m) > kDefiniteTolerance * tolerance_scale(m);
  };
  r.inputs_positive_definite = definite(a) && definite(b);
  r.product_positive_definite = definite(product);
  return r;
}

SchurComplementReport check_schur_complement_equivalence(const Matrix& a, const Matrix& b,
                                                         const Matrix& d) {
  require_pd(a, "check_schur_complement_equivalence (A)");
  require_pd(b, "check_schur_complement_equivalence (B)");
  if (d.rows() != a.rows() || d.cols() != b.rows()) {
    throw ValidationError("check_schur_complement_equivalence: D must be n×m");
  }
  const long n = a.rows();
  const long m = b.rows();
  Matrix block(n + m, n + m);
  block << a, d, d.transpose(), b;
  const Matrix dt_ainv_d = d.transpose() * spd_inverse(a, "A") * d;
  const Matrix d_binv_dt = d * spd_inverse(b, "B") * d.transpose();
  const Matrix schur_b = b - dt_ainv_d;
  const Matrix schur_a = a - d_binv_dt;

  const auto block_check = certify_psd("block", block, tolerance_scale(block));
  const auto b_check = certify_psd("schur_b", schur_b, max_scale({&b, &dt_ainv_d}));
  const auto a_check = certify_psd("schur_a", schur_a, max_scale({&a, &d_binv_dt}));

  SchurComplementReport r;
  r.block_psd = block_check.pass;
  r.b_dominates = b_check.pass;
  r.a_dominates = a_check.pass;
  r.margins[0] = block_check.margin();
  r.margins[1] = b_check.margin();
  r.margins[2] = a_check.margin();
  r.agree = (r.block_psd == r.b_dominates) && (r.b_dominates == r.a_dominates);
  return r;
}

PsdCheckReport check_prop1(const Matrix& a, const Matrix& b) {
  require_pd(a, "check_prop1");
  require_pd(b, "check_prop1");
  if (a.rows() != b.rows()) throw ValidationError("check_prop1: dimension mismatch");
  const Matrix lhs = a.cwiseProduct(spd_inverse(b, "check_prop1 (B)"));
  const Matrix da = diag_matrix(a);
  const Matrix rhs = da * spd_inverse(a.cwiseProduct(b), "check_prop1 (A∘B)") * da;
  return certify_psd("prop1_hadamard_inverse", lhs - rhs, max_scale({&lhs, &rhs}));
}

Cor1Report check_cor1(const Matrix& a) {
  require_pd(a, "check_cor1");
  const Vector d = a.diagonal();
  const Matrix aa = a.cwiseProduct(a);
  Eigen::LLT<Matrix> llt(aa);
  if (llt.info() != Eigen::Success) throw ValidationError("check_cor1: A∘A is singular");
  Cor1Report r;
  r.n = static_cast<int>(a.rows());
  r.value = d.dot(llt.solve(d));
  r.pass = r.value <= r.n + 1e-9 * r.n;
  r.equality = std::abs(r.value - r.n) <= 1e-9 * r.n;
  return r;
}

PsdCheckReport check_prop2(const Matrix& a) {
  require_psd(a, "check_prop2");
  const Vector d = a.diagonal();
  const Matrix lhs = a.cwiseProduct(a);
  const Matrix rhs = d * d.transpose() / static_cast<double>(a.rows());
  return certify_psd("prop2_hadamard_square", lhs - rhs, max_scale({&lhs, &rhs}));
}

PsdCheckReport check_styan(const Matrix& r) {
  require_pd(r, "check_styan");
  if ((r.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw ValidationError("check_styan: R must have unit diagonal");
  }
  const long n = r.rows();
  const Matrix lhs = r.cwiseProduct(spd_inverse(r, "check_styan (R)")) + Matrix::Identity(n, n);
  const Matrix rhs = 2.0 * spd_inverse(r.cwiseProduct(r), "check_styan (R∘R)");
  return certify_psd("styan_correlation", lhs - rhs, max_scale({&lhs, &rhs}));
}

double hadamard_inverse_sum(const Matrix& a) {
  require_square(a, "hadamard_inverse_sum");
  const Matrix inv = a.inverse();
  return a.cwiseProduct(inv).sum();
}

std::vector<ClaimSummary> run_lemma_suite(const LemmaSuiteOptions& options) {
  if (options.trials < 1) throw ValidationError("lemma suite: trials must be >= 1");
  if (options.max_dim < 1) throw ValidationError("lemma suite: max_dim must be >= 1");

  // One trial: returns the normalized margin (pass iff ≥ −1e-9) and, on
  // failure, the input that produced it.
  using Trial = std::function<double(int n, std::uint64_t seed, Matrix& input)>;
  struct Claim {
    const char* name;
    Trial run;
  };

  auto hcat = [](const Matrix& x, const Matrix& y) {
    Matrix out(x.rows(), x.cols() + y.cols());
    out << x, y;
    return out;
  };

  const std::vector<Claim> claims = {
      {"lemma1_block_replication",
       [](int n, std::uint64_t s, Matrix& in) {
         in = (s % 4 == 0) ? random_psd_of_rank(n, n / 2, s) : random_psd(n, s);
         return check_block_replication(in).margin();
       }},
      {"lemma2_block_inverse",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_psd(n, s);
         return check_block_inverse(in).margin();
       }},
      {"lemma3_schur_product",
       [&](int n, std::uint64_t s, Matrix& in) {
         const Matrix a = (s % 3 == 0) ? random_psd_of_rank(n, std::max(0, n - 2), s) : random_psd(n, s);
         const Matrix b = random_psd(n, s ^ 0x9e3779b97f4a7c15ULL);
         in = hcat(a, b);
         return check_schur_product(a, b).psd.margin();
       }},
      {"lemma4_schur_complement",
       [&](int n, std::uint64_t s, Matrix& in) {
         std::mt19937_64 rng(s);
         const int m = 1 + static_cast<int>(rng() % 8);
         std::uniform_real_distribution<double> eig(0.1, 10.0);
         Vector sa(n);
         Vector sb(m);
         for (int i = 0; i < n; ++i) sa(i) = eig(rng);
         for (int i = 0; i < m; ++i) sb(i) = eig(rng);
         const Matrix a = random_psd(n, rng(), sa);
         const Matrix b = random_psd(m, rng(), sb);
         Matrix d = gaussian_matrix(n, m, rng);
         // Scale D relative to the exact boundary ‖A^{-1/2} D B^{-1/2}‖₂ = 1.
         const Matrix ra = symmetric_psd_root(spd_inverse(a, "A"));
         const Matrix rb = symmetric_psd_root(spd_inverse(b, "B"));
         const double rho = Eigen::JacobiSVD<Matrix>(ra * d * rb).singularValues()(0);
         static constexpr double kFactors[] = {0.0, 0.5, 0.95, 1.05, 2.0};
         const double factor = kFactors[rng() % 5];
         d *= rho > 0.0 ? factor / rho : 0.0;
         in.resize(n + m, n + m);
         in << a, d, d.transpose(), b;
         const auto r = check_schur_complement_equivalence(a, b, d);
         double closest = std::numeric_limits<double>::infinity();
         for (double mg : r.margins) closest = std::min(closest, std::abs(mg));
         return r.agree ? closest : -1.0;
       }},
      {"prop1_hadamard_inverse",
       [&](int n, std::uint64_t s, Matrix& in) {
         const Matrix a = random_psd(n, s);
         const Matrix b = random_psd(n, s ^ 0x5851f42d4c957f2dULL);
         in = hcat(a, b);
         return check_prop1(a, b).margin();
       }},
      {"cor1_diag_quadratic_form",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_psd(n, s);
         const auto r = check_cor1(in);
         return (r.n - r.value) / r.n;
       }},
      {"cor1_diagonal_equality",
       [](int n, std::uint64_t s, Matrix& in) {
         std::mt19937_64 rng(s);
         std::uniform_real_distribution<double> u(0.1, 10.0);
         Vector d(n);
         for (int i = 0; i < n; ++i) d(i) = u(rng);
         in = d.asDiagonal();
         const auto r = check_cor1(in);
         return r.equality ? 0.0 : -std::abs(r.value - r.n) / r.n;
       }},
      {"hadamard_inverse_sum_identity",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_psd(n, s);
         return -std::abs(hadamard_inverse_sum(in) - n) / n;
       }},
      {"prop2_hadamard_square",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_psd(n, s);
         return check_prop2(in).margin();
       }},
      {"prop2_rank_deficient",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_psd_of_rank(n, std::max(0, n - 2), s);
         return check_prop2(in).margin();
       }},
      {"styan_correlation",
       [](int n, std::uint64_t s, Matrix& in) {
         in = random_correlation(n, s);
         return check_styan(in).margin();
       }},
  };

  std::vector<ClaimSummary> out;
  for (std::size_t c = 0; c < claims.size(); ++c) {
    ClaimSummary summary;
    summary.claim = claims[c].name;
    summary.min_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < options.trials; ++t) {
      const int n = 1 + t % options.max_dim;
      const std::uint64_t s = seed_for(options.seed, c, static_cast<std::uint64_t>(t));
      Matrix input;
      const double margin = claims[c].run(n, s, input);
      summary.min_margin = std::min(summary.min_margin, margin);
      if (!(margin >= -kPsdRelativeTolerance)) {
        if (summary.pass) summary.witness = input;
        summary.pass = false;
      }
      ++summary.trials;
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace eplab
