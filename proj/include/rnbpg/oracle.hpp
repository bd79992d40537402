#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rnbpg/matrix.hpp"
#include "rnbpg/partition.hpp"

namespace rnbpg {

// Mutable side of a smooth oracle: the iterate plus an incrementally
// maintained cache (residual Ax-b for least squares, q = Qx for quadratics).
// The cache is recomputed exactly every kRefreshPeriod commits, which bounds
// drift; trial evaluations and commits share the same kernel call sequence so
// a committed step reproduces the accepted trial value bit for bit.
struct OracleState {
  std::vector<double> x;
  std::vector<double> cache;
  double f_cached = 0.0;  // quadratic value chain; unused by least squares
  std::uint64_t commits_since_refresh = 0;
  std::uint64_t total_commits = 0;
  mutable std::vector<double> scratch;   // trial buffer
  mutable std::vector<double> scratch2;  // curvature probe buffer
};

class SmoothOracle {
 public:
  static constexpr std::uint64_t kRefreshPeriod = 1000;

  virtual ~SmoothOracle() = default;

  const BlockPartition& partition() const { return partition_; }
  std::size_t dim() const { return partition_.total; }

  virtual OracleState make_state(std::vector<double> x0) const = 0;
  virtual double value(const OracleState& s) const = 0;
  // f(x + U_i d) without touching the state
  virtual double trial_value(const OracleState& s, std::size_t i,
                             std::span<const double> d) const = 0;
  virtual void partial_grad(const OracleState& s, std::size_t i,
                            std::span<double> out) const = 0;
  virtual void full_grad(const OracleState& s, std::span<double> out) const = 0;
  // applies d to block i; returns true when this commit triggered a refresh
  virtual bool commit_step(OracleState& s, std::size_t i,
                           std::span<const double> d) const = 0;
  virtual void refresh(OracleState& s) const = 0;
  // curvature of f along u supported on block i: u'(H_ii u)
  virtual double curvature_along(const OracleState& s, std::size_t i,
                                 std::span<const double> u) const = 0;

  double block_lipschitz(std::size_t i) const { return block_lip_[i]; }
  double max_block_lipschitz() const;

 protected:
  explicit SmoothOracle(BlockPartition p) : partition_(std::move(p)) {}
  void check_block_dim(std::size_t i, std::size_t len, const char* op) const;

  BlockPartition partition_;
  std::vector<double> block_lip_;  // filled eagerly by each constructor
};

// f(x) = 0.5 |Ax - b|^2 over column blocks of A
class LeastSquaresOracle final : public SmoothOracle {
 public:
  LeastSquaresOracle(DenseMatrix a, std::vector<double> b, BlockPartition p);

  const DenseMatrix& matrix() const { return a_; }
  const std::vector<double>& rhs() const { return b_; }
  std::size_t rows() const { return a_.rows(); }

  OracleState make_state(std::vector<double> x0) const override;
  double value(const OracleState& s) const override;
  double trial_value(const OracleState& s, std::size_t i,
                     std::span<const double> d) const override;
  void partial_grad(const OracleState& s, std::size_t i,
                    std::span<double> out) const override;
  void full_grad(const OracleState& s, std::span<double> out) const override;
  bool commit_step(OracleState& s, std::size_t i,
                   std::span<const double> d) const override;
  void refresh(OracleState& s) const override;
  double curvature_along(const OracleState& s, std::size_t i,
                         std::span<const double> u) const override;

 private:
  DenseMatrix a_;
  std::vector<double> b_;
};

// f(x) = 0.5 x'Qx + c'x with Q symmetric PSD
class QuadraticOracle final : public SmoothOracle {
 public:
  QuadraticOracle(DenseMatrix q, std::vector<double> c, BlockPartition p);

  const DenseMatrix& matrix() const { return q_; }
  const std::vector<double>& linear() const { return c_; }

  OracleState make_state(std::vector<double> x0) const override;
  double value(const OracleState& s) const override;
  double trial_value(const OracleState& s, std::size_t i,
                     std::span<const double> d) const override;
  void partial_grad(const OracleState& s, std::size_t i,
                    std::span<double> out) const override;
  void full_grad(const OracleState& s, std::span<double> out) const override;
  bool commit_step(OracleState& s, std::size_t i,
                   std::span<const double> d) const override;
  void refresh(OracleState& s) const override;
  double curvature_along(const OracleState& s, std::size_t i,
                         std::span<const double> u) const override;

 private:
  // f(x + U_i d) - f(x), shared by trial_value and commit_step
  double delta_value(const OracleState& s, std::size_t i,
                     std::span<const double> d) const;

  DenseMatrix q_;
  std::vector<double> c_;
};

// Largest eigenvalue of the PSD operator v -> apply(v) on R^n. Deterministic
// start vector; relative tolerance 1e-10, at most 1000 rounds.
double power_iteration_max_eig(std::size_t n,
                               const std::function<void(const double*, double*)>& apply);

}  // namespace rnbpg
