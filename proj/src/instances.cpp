#include "rnbpg/instances.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rnbpg/errors.hpp"
#include "rnbpg/kernels.hpp"
#include "rnbpg/rng.hpp"

namespace rnbpg {
namespace {

constexpr char kMagic[4] = {'B', 'P', 'X', 'I'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k)
    out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_f64(std::string& out, double d) {
  auto v = std::bit_cast<std::uint64_t>(d);
  for (int k = 0; k < 8; ++k)
    out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

struct Reader {
  const std::string& buf;
  std::size_t off = 0;

  void need(std::size_t n) {
    if (off + n > buf.size())
      throw Error(ErrorCode::bad_format,
                  "truncated instance file at offset " + std::to_string(off));
  }
  std::uint32_t get_u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off + k]))
           << (8 * k);
    off += 4;
    return v;
  }
  double get_f64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[off + k]))
           << (8 * k);
    off += 8;
    return std::bit_cast<double>(v);
  }
};

}  // namespace

LassoInstance generate_lasso(std::size_t m, std::size_t n, std::size_t s,
                             double lambda, std::uint64_t seed) {
  if (m == 0 || n == 0)
    throw Error(ErrorCode::invalid_parameter, "generate_lasso: m and n must be positive");
  if (s < 1 || s > std::min(m, n))
    throw Error(ErrorCode::invalid_parameter,
                "generate_lasso: sparsity must lie in [1, min(m, n)]");
  if (!(lambda > 0.0))
    throw Error(ErrorCode::invalid_parameter, "generate_lasso: lambda must be positive");

  Rng rng(seed);
  DenseMatrix base(m, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < m; ++r) base.at(r, c) = rng.next_uniform(-1.0, 1.0);

  std::vector<double> y(m);
  double yn = 0.0;
  while (yn == 0.0) {
    for (std::size_t r = 0; r < m; ++r) y[r] = rng.next_normal();
    yn = std::sqrt(kernels::squared_norm(y.data(), m));
  }
  for (std::size_t r = 0; r < m; ++r) y[r] /= yn;

  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = kernels::dot(base.col(j), y.data(), m);

  std::vector<double> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = rng.next_double();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double fa = std::abs(v[a]), fb = std::abs(v[b]);
    return fa != fb ? fa > fb : a < b;
  });
  std::vector<char> on_support(n, 0);
  for (std::size_t t = 0; t < s; ++t) on_support[order[t]] = 1;

  LassoInstance inst;
  inst.a = DenseMatrix(m, n);
  inst.lambda = lambda;
  for (std::size_t j = 0; j < n; ++j) {
    double av = std::abs(v[j]);
    double scale;
    if (on_support[j]) {
      if (av == 0.0)
        throw Error(ErrorCode::generator_internal,
                    "generate_lasso: zero correlation on a support column");
      scale = lambda / av;
    } else if (av > lambda) {
      scale = lambda * u[j] / av;
    } else {
      scale = 1.0;
    }
    for (std::size_t r = 0; r < m; ++r) inst.a.at(r, j) = base.at(r, j) * scale;
  }

  inst.x_star.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    if (on_support[j])
      inst.x_star[j] = rng.next_uniform(0.1, 1.0) * (v[j] > 0.0 ? 1.0 : -1.0);
  inst.sparsity = s;

  inst.b = y;
  for (std::size_t j = 0; j < n; ++j)
    kernels::axpy(inst.x_star[j], inst.a.col(j), inst.b.data(), m);

  std::vector<double> resid(m);
  for (std::size_t r = 0; r < m; ++r) resid[r] = -inst.b[r];
  for (std::size_t j = 0; j < n; ++j)
    kernels::axpy(inst.x_star[j], inst.a.col(j), resid.data(), m);
  double l1 = 0.0;
  for (double xj : inst.x_star) l1 += std::abs(xj);
  inst.f_star = 0.5 * kernels::squared_norm(resid.data(), m) + lambda * l1;

  if (!(certificate_residual(inst) <= 1e-8))
    throw Error(ErrorCode::generator_internal,
                "generate_lasso: optimality certificate failed");
  return inst;
}

double certificate_residual(const LassoInstance& inst) {
  if (!inst.has_optimum())
    throw Error(ErrorCode::invalid_parameter,
                "certificate_residual: instance carries no optimum");
  const std::size_t m = inst.a.rows();
  const std::size_t n = inst.a.cols();
  if (inst.b.size() != m || inst.x_star.size() != n)
    throw Error(ErrorCode::dimension_mismatch, "certificate_residual: bad instance");
  std::vector<double> resid(m);
  for (std::size_t r = 0; r < m; ++r) resid[r] = -inst.b[r];
  for (std::size_t j = 0; j < n; ++j)
    kernels::axpy(inst.x_star[j], inst.a.col(j), resid.data(), m);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double g = kernels::dot(inst.a.col(j), resid.data(), m);
    if (inst.x_star[j] != 0.0) {
      double sgn = inst.x_star[j] > 0.0 ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(g + inst.lambda * sgn));
    } else {
      worst = std::max(worst, std::max(0.0, std::abs(g) - inst.lambda));
    }
  }
  return worst;
}

void save_instance(const LassoInstance& inst, const std::string& path) {
  const std::size_t m = inst.a.rows();
  const std::size_t n = inst.a.cols();
  if (inst.b.size() != m)
    throw Error(ErrorCode::dimension_mismatch, "save_instance: len(b) != rows(A)");
  if (!inst.x_star.empty() && inst.x_star.size() != n)
    throw Error(ErrorCode::dimension_mismatch, "save_instance: len(x*) != cols(A)");

  std::string out;
  out.reserve(21 + 8 * (m * n + m + 1 + (inst.has_optimum() ? n + 1 : 0)));
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(m));
  put_u32(out, static_cast<std::uint32_t>(n));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) put_f64(out, inst.a.at(r, c));
  for (std::size_t r = 0; r < m; ++r) put_f64(out, inst.b[r]);
  put_f64(out, inst.lambda);
  out.push_back(inst.has_optimum() ? '\x01' : '\x00');
  if (inst.has_optimum()) {
    for (std::size_t j = 0; j < n; ++j) put_f64(out, inst.x_star[j]);
    put_f64(out, inst.f_star);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::io_failure, "short write to '" + path + "'");
}

LassoInstance load_instance(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_failure, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string buf = std::move(ss).str();

  Reader r{buf};
  r.need(4);
  if (std::memcmp(buf.data(), kMagic, 4) != 0)
    throw Error(ErrorCode::bad_format, "bad magic; not a BPXI file");
  r.off = 4;
  std::uint32_t version = r.get_u32();
  if (version != kVersion)
    throw Error(ErrorCode::unsupported,
                "unsupported BPXI version " + std::to_string(version));
  std::size_t m = r.get_u32();
  std::size_t n = r.get_u32();
  if (m == 0 || n == 0)
    throw Error(ErrorCode::bad_format, "BPXI header declares an empty matrix");

  LassoInstance inst;
  inst.a = DenseMatrix(m, n);
  for (std::size_t row = 0; row < m; ++row)
    for (std::size_t c = 0; c < n; ++c) inst.a.at(row, c) = r.get_f64();
  inst.b.resize(m);
  for (std::size_t row = 0; row < m; ++row) inst.b[row] = r.get_f64();
  inst.lambda = r.get_f64();
  r.need(1);
  unsigned char flag = static_cast<unsigned char>(buf[r.off++]);
  if (flag > 1)
    throw Error(ErrorCode::bad_format, "invalid optimum flag at offset " +
                                           std::to_string(r.off - 1));
  if (flag == 1) {
    inst.x_star.resize(n);
    for (std::size_t j = 0; j < n; ++j) inst.x_star[j] = r.get_f64();
    inst.f_star = r.get_f64();
    for (double xj : inst.x_star) inst.sparsity += xj != 0.0 ? 1 : 0;
  }
  if (r.off != buf.size())
    throw Error(ErrorCode::bad_format,
                "trailing bytes after offset " + std::to_string(r.off));
  return inst;
}

LassoInstance load_dense_csv(const std::string& path, double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::invalid_parameter, "load_dense_csv: lambda must be positive");
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io_failure, "cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double val = 0.0;
      auto [next, ec] = std::from_chars(p, end, val);
      if (ec != std::errc())
        throw Error(ErrorCode::bad_format,
                    "line " + std::to_string(lineno) + ": expected a number");
      row.push_back(val);
      p = next;
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      if (*p != ',')
        throw Error(ErrorCode::bad_format,
                    "line " + std::to_string(lineno) + ": expected ','");
      ++p;
    }
    if (row.size() < 2)
      throw Error(ErrorCode::bad_format,
                  "line " + std::to_string(lineno) + ": need at least one column of A and b");
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::bad_format,
                  "line " + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::bad_format, "empty instance file");

  const std::size_t m = rows.size();
  const std::size_t n = rows.front().size() - 1;
  LassoInstance inst;
  inst.a = DenseMatrix(m, n);
  inst.b.resize(m);
  inst.lambda = lambda;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) inst.a.at(r, c) = rows[r][c];
    inst.b[r] = rows[r][n];
  }
  return inst;
}

CompositeProblem make_lasso_problem(const LassoInstance& inst,
                                    std::size_t block_size) {
  auto part = uniform_blocks(inst.a.cols(), block_size);
  auto oracle =
      std::make_shared<LeastSquaresOracle>(inst.a, inst.b, std::move(part));
  return {std::move(oracle), SeparableRegularizer::l1(inst.lambda)};
}

}  // namespace rnbpg
