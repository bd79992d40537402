#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnbpg/matrix.hpp"
#include "rnbpg/solver.hpp"
#include "rnbpg/trace.hpp"

namespace rnbpg {

// l1 least-squares instance; x_star/f_star certify the optimum when present
// (x_star empty and f_star NaN otherwise).
struct LassoInstance {
  DenseMatrix a;
  std::vector<double> b;
  double lambda = 1.0;
  std::vector<double> x_star;
  double f_star = kNotComputed;
  std::size_t sparsity = 0;

  bool has_optimum() const { return !x_star.empty(); }
};

// Deterministic in (m, n, s, lambda, seed). Single RNG stream, fixed draw
// order: B column by column, then the m normals behind y*, then the n
// off-support scale draws u, then the s support magnitudes in ascending
// column order. Construction:
//   B ~ U[-1,1]^(m x n); y* uniform direction; v = B'y*;
//   support = s largest |v_j| (ties: smaller index);
//   A_:,j = B_:,j * lambda/|v_j| on support,
//           B_:,j * lambda*u_j/|v_j| off support when |v_j| > lambda,
//           B_:,j otherwise;
//   x*_j = sign(v_j) * U[0.1,1] on support, else 0;  b = A x* + y*.
// Then A'(Ax*-b) = -A'y* meets the l1 optimality conditions at x* exactly.
// The certificate is checked before returning.
LassoInstance generate_lasso(std::size_t m, std::size_t n, std::size_t s,
                             double lambda, std::uint64_t seed);

// Worst coordinate violation of the l1 optimality conditions at x_star:
// |g_j + lambda*sign(x*_j)| on the support, max(0, |g_j| - lambda) off it,
// with g = A'(Ax* - b).
double certificate_residual(const LassoInstance& inst);

// BPXI file: magic "BPXI", u32 version (1), u32 m, u32 n, A row-major f64,
// b f64, lambda f64, u8 optimum flag, then x* f64 and F* f64 when flagged.
// All fields little-endian.
void save_instance(const LassoInstance& inst, const std::string& path);
LassoInstance load_instance(const std::string& path);

// Plain text: one row of A per line, comma separated, b as the last column.
// No certified optimum.
LassoInstance load_dense_csv(const std::string& path, double lambda);

CompositeProblem make_lasso_problem(const LassoInstance& inst,
                                    std::size_t block_size);

}  // namespace rnbpg
