#include "rnbpg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rnbpg/errors.hpp"
#include "rnbpg/kernels.hpp"
#include "rnbpg/rng.hpp"

namespace rnbpg {

double SmoothOracle::max_block_lipschitz() const {
  double m = 0.0;
  for (double l : block_lip_) m = std::max(m, l);
  return m;
}

void SmoothOracle::check_block_dim(std::size_t i, std::size_t len,
                                   const char* op) const {
  if (i >= partition_.block_count())
    throw Error(ErrorCode::dimension_mismatch,
                std::string(op) + ": block index out of range");
  if (len != partition_.size(i))
    throw Error(ErrorCode::dimension_mismatch,
                std::string(op) + ": vector does not match block " + std::to_string(i));
}

double power_iteration_max_eig(std::size_t n,
                               const std::function<void(const double*, double*)>& apply) {
  if (n == 0) return 0.0;
  Rng rng(0x9d2c5680u);  // fixed stream: L_i must not depend on solver seeds
  std::vector<double> v(n), w(n);
  double vn = 0.0;
  while (vn == 0.0) {
    for (std::size_t j = 0; j < n; ++j) v[j] = rng.next_uniform(-1.0, 1.0);
    vn = std::sqrt(kernels::squared_norm(v.data(), n));
  }
  for (std::size_t j = 0; j < n; ++j) v[j] /= vn;
  double eig = 0.0;
  for (int it = 0; it < 1000; ++it) {
    apply(v.data(), w.data());
    double next = kernels::dot(v.data(), w.data(), n);  // Rayleigh quotient, |v| = 1
    double wn = std::sqrt(kernels::squared_norm(w.data(), n));
    if (wn == 0.0) return 0.0;  // v in the kernel of a PSD operator: eig 0 along it
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
    if (it > 0 && std::abs(next - eig) <= 1e-10 * std::max(std::abs(next), 1e-300)) {
      return next;
    }
    eig = next;
  }
  return eig;
}

// ---- least squares ----

LeastSquaresOracle::LeastSquaresOracle(DenseMatrix a, std::vector<double> b,
                                       BlockPartition p)
    : SmoothOracle(std::move(p)), a_(std::move(a)), b_(std::move(b)) {
  if (a_.cols() != partition_.total)
    throw Error(ErrorCode::dimension_mismatch,
                "least squares: partition does not cover the columns of A");
  if (a_.rows() != b_.size())
    throw Error(ErrorCode::dimension_mismatch, "least squares: rows(A) != len(b)");
  const std::size_t m = a_.rows();
  block_lip_.resize(partition_.block_count());
  for (std::size_t i = 0; i < partition_.block_count(); ++i) {
    const std::size_t ni = partition_.size(i);
    const std::size_t off = partition_.offset(i);
    double lip;
    if (ni == 1) {
      lip = kernels::squared_norm(a_.col(off), m);
    } else {
      std::vector<double> t(m);
      lip = power_iteration_max_eig(ni, [&](const double* v, double* out) {
        std::fill(t.begin(), t.end(), 0.0);
        for (std::size_t j = 0; j < ni; ++j)
          kernels::axpy(v[j], a_.col(off + j), t.data(), m);
        for (std::size_t j = 0; j < ni; ++j)
          out[j] = kernels::dot(a_.col(off + j), t.data(), m);
      });
    }
    block_lip_[i] = std::max(lip, 1e-12);
  }
}

OracleState LeastSquaresOracle::make_state(std::vector<double> x0) const {
  if (x0.empty()) x0.assign(dim(), 0.0);
  if (x0.size() != dim())
    throw Error(ErrorCode::dimension_mismatch, "make_state: x0 has wrong length");
  OracleState s;
  s.x = std::move(x0);
  s.cache.resize(a_.rows());
  s.scratch.resize(a_.rows());
  s.scratch2.resize(a_.rows());
  refresh(s);
  return s;
}

void LeastSquaresOracle::refresh(OracleState& s) const {
  const std::size_t m = a_.rows();
  for (std::size_t r = 0; r < m; ++r) s.cache[r] = -b_[r];
  for (std::size_t c = 0; c < a_.cols(); ++c)
    kernels::axpy(s.x[c], a_.col(c), s.cache.data(), m);
  s.commits_since_refresh = 0;
}

double LeastSquaresOracle::value(const OracleState& s) const {
  return 0.5 * kernels::squared_norm(s.cache.data(), s.cache.size());
}

double LeastSquaresOracle::trial_value(const OracleState& s, std::size_t i,
                                       std::span<const double> d) const {
  check_block_dim(i, d.size(), "trial_value");
  const std::size_t m = a_.rows();
  const std::size_t off = partition_.offset(i);
  // same axpy sequence as commit_step and the same squared_norm as value(),
  // so a stalled trial reproduces the stored objective bit for bit
  std::copy(s.cache.begin(), s.cache.end(), s.scratch.begin());
  for (std::size_t j = 0; j < d.size(); ++j)
    kernels::axpy(d[j], a_.col(off + j), s.scratch.data(), m);
  return 0.5 * kernels::squared_norm(s.scratch.data(), m);
}

void LeastSquaresOracle::partial_grad(const OracleState& s, std::size_t i,
                                      std::span<double> out) const {
  check_block_dim(i, out.size(), "partial_grad");
  const std::size_t off = partition_.offset(i);
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = kernels::dot(a_.col(off + j), s.cache.data(), a_.rows());
}

void LeastSquaresOracle::full_grad(const OracleState& s, std::span<double> out) const {
  if (out.size() != dim())
    throw Error(ErrorCode::dimension_mismatch, "full_grad: wrong output length");
  for (std::size_t c = 0; c < a_.cols(); ++c)
    out[c] = kernels::dot(a_.col(c), s.cache.data(), a_.rows());
}

bool LeastSquaresOracle::commit_step(OracleState& s, std::size_t i,
                                     std::span<const double> d) const {
  check_block_dim(i, d.size(), "commit_step");
  const std::size_t off = partition_.offset(i);
  // identical axpy sequence to trial_value, so the new residual matches the
  // accepted trial's buffer bit for bit
  for (std::size_t j = 0; j < d.size(); ++j)
    kernels::axpy(d[j], a_.col(off + j), s.cache.data(), a_.rows());
  for (std::size_t j = 0; j < d.size(); ++j) s.x[off + j] += d[j];
  ++s.total_commits;
  if (++s.commits_since_refresh >= kRefreshPeriod) {
    refresh(s);
    return true;
  }
  return false;
}

double LeastSquaresOracle::curvature_along(const OracleState& s, std::size_t i,
                                           std::span<const double> u) const {
  check_block_dim(i, u.size(), "curvature_along");
  const std::size_t m = a_.rows();
  const std::size_t off = partition_.offset(i);
  if (u.size() == 1) {
    double c0 = kernels::squared_norm(a_.col(off), m);
    return c0 * u[0] * u[0];
  }
  std::fill(s.scratch2.begin(), s.scratch2.end(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j)
    kernels::axpy(u[j], a_.col(off + j), s.scratch2.data(), m);
  return kernels::squared_norm(s.scratch2.data(), m);
}

// ---- quadratic ----

QuadraticOracle::QuadraticOracle(DenseMatrix q, std::vector<double> c,
                                 BlockPartition p)
    : SmoothOracle(std::move(p)), q_(std::move(q)), c_(std::move(c)) {
  const std::size_t n = partition_.total;
  if (q_.rows() != n || q_.cols() != n)
    throw Error(ErrorCode::dimension_mismatch, "quadratic: Q must be n by n");
  if (c_.size() != n)
    throw Error(ErrorCode::dimension_mismatch, "quadratic: len(c) != n");
  double maxabs = 0.0;
  for (double v : q_.data()) maxabs = std::max(maxabs, std::abs(v));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = r + 1; col < n; ++col)
      if (std::abs(q_.at(r, col) - q_.at(col, r)) > 1e-12 * (1.0 + maxabs))
        throw Error(ErrorCode::invalid_parameter, "quadratic: Q is not symmetric");
  block_lip_.resize(partition_.block_count());
  for (std::size_t i = 0; i < partition_.block_count(); ++i) {
    const std::size_t ni = partition_.size(i);
    const std::size_t off = partition_.offset(i);
    double lip;
    if (ni == 1) {
      lip = std::abs(q_.at(off, off));
    } else {
      lip = power_iteration_max_eig(ni, [&](const double* v, double* out) {
        for (std::size_t r = 0; r < ni; ++r) {
          double acc = 0.0;
          for (std::size_t j = 0; j < ni; ++j) acc += q_.at(off + r, off + j) * v[j];
          out[r] = acc;
        }
      });
    }
    block_lip_[i] = std::max(lip, 1e-12);
  }
}

OracleState QuadraticOracle::make_state(std::vector<double> x0) const {
  if (x0.empty()) x0.assign(dim(), 0.0);
  if (x0.size() != dim())
    throw Error(ErrorCode::dimension_mismatch, "make_state: x0 has wrong length");
  OracleState s;
  s.x = std::move(x0);
  s.cache.resize(dim());
  s.scratch.resize(partition_.max_block_size());
  s.scratch2.resize(partition_.max_block_size());
  refresh(s);
  return s;
}

void QuadraticOracle::refresh(OracleState& s) const {
  const std::size_t n = dim();
  std::fill(s.cache.begin(), s.cache.end(), 0.0);
  for (std::size_t c = 0; c < n; ++c)
    kernels::axpy(s.x[c], q_.col(c), s.cache.data(), n);
  s.f_cached = 0.5 * kernels::dot(s.x.data(), s.cache.data(), n) +
               kernels::dot(c_.data(), s.x.data(), n);
  s.commits_since_refresh = 0;
}

double QuadraticOracle::value(const OracleState& s) const { return s.f_cached; }

double QuadraticOracle::delta_value(const OracleState& s, std::size_t i,
                                    std::span<const double> d) const {
  const std::size_t off = partition_.offset(i);
  const std::size_t ni = d.size();
  // d'(q_i + c_i) + 0.5 d'Q_ii d, fixed evaluation order
  double lin = 0.0;
  for (std::size_t j = 0; j < ni; ++j)
    lin += d[j] * (s.cache[off + j] + c_[off + j]);
  double quad = 0.0;
  for (std::size_t r = 0; r < ni; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ni; ++j) acc += q_.at(off + r, off + j) * d[j];
    quad += d[r] * acc;
  }
  return lin + 0.5 * quad;
}

double QuadraticOracle::trial_value(const OracleState& s, std::size_t i,
                                    std::span<const double> d) const {
  check_block_dim(i, d.size(), "trial_value");
  return s.f_cached + delta_value(s, i, d);
}

void QuadraticOracle::partial_grad(const OracleState& s, std::size_t i,
                                   std::span<double> out) const {
  check_block_dim(i, out.size(), "partial_grad");
  const std::size_t off = partition_.offset(i);
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = s.cache[off + j] + c_[off + j];
}

void QuadraticOracle::full_grad(const OracleState& s, std::span<double> out) const {
  if (out.size() != dim())
    throw Error(ErrorCode::dimension_mismatch, "full_grad: wrong output length");
  for (std::size_t j = 0; j < dim(); ++j) out[j] = s.cache[j] + c_[j];
}

bool QuadraticOracle::commit_step(OracleState& s, std::size_t i,
                                  std::span<const double> d) const {
  check_block_dim(i, d.size(), "commit_step");
  const double delta = delta_value(s, i, d);
  const std::size_t off = partition_.offset(i);
  for (std::size_t j = 0; j < d.size(); ++j)
    kernels::axpy(d[j], q_.col(off + j), s.cache.data(), dim());
  for (std::size_t j = 0; j < d.size(); ++j) s.x[off + j] += d[j];
  s.f_cached += delta;
  ++s.total_commits;
  if (++s.commits_since_refresh >= kRefreshPeriod) {
    refresh(s);
    return true;
  }
  return false;
}

double QuadraticOracle::curvature_along(const OracleState&, std::size_t i,
                                        std::span<const double> u) const {
  check_block_dim(i, u.size(), "curvature_along");
  const std::size_t off = partition_.offset(i);
  double acc = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r) {
    double row = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) row += q_.at(off + r, off + j) * u[j];
    acc += u[r] * row;
  }
  return acc;
}

}  // namespace rnbpg
