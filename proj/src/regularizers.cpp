#include "rnbpg/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>

#include "rnbpg/errors.hpp"
#include "rnbpg/kernels.hpp"

namespace rnbpg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(ErrorCode::bad_config,
                "bad " + std::string(what) + " in regularizer spec: '" + std::string(s) + "'");
  return v;
}

}  // namespace

SeparableRegularizer SeparableRegularizer::zero() {
  return {RegKind::zero, 0.0, 0.0, 0.0};
}

SeparableRegularizer SeparableRegularizer::l1(double lambda) {
  if (!(lambda >= 0.0))
    throw Error(ErrorCode::invalid_parameter, "l1 weight must be nonnegative");
  return {RegKind::l1, lambda, 0.0, 0.0};
}

SeparableRegularizer SeparableRegularizer::group_l2(double lambda) {
  if (!(lambda >= 0.0))
    throw Error(ErrorCode::invalid_parameter, "group_l2 weight must be nonnegative");
  return {RegKind::group_l2, lambda, 0.0, 0.0};
}

SeparableRegularizer SeparableRegularizer::box(double lo, double hi) {
  if (!(lo <= hi))
    throw Error(ErrorCode::invalid_parameter, "box bounds need lo <= hi");
  return {RegKind::box, 0.0, lo, hi};
}

SeparableRegularizer SeparableRegularizer::l0(double lambda) {
  if (!(lambda >= 0.0))
    throw Error(ErrorCode::invalid_parameter, "l0 weight must be nonnegative");
  return {RegKind::l0, lambda, 0.0, 0.0};
}

SeparableRegularizer SeparableRegularizer::parse(std::string_view spec) {
  if (spec == "zero") return zero();
  auto colon = spec.find(':');
  std::string_view head = spec.substr(0, colon);
  std::string_view rest = colon == std::string_view::npos ? std::string_view{}
                                                          : spec.substr(colon + 1);
  if (head == "l1") return l1(parse_number(rest, "lambda"));
  if (head == "group_l2") return group_l2(parse_number(rest, "lambda"));
  if (head == "l0") return l0(parse_number(rest, "lambda"));
  if (head == "box") {
    auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw Error(ErrorCode::bad_config, "box spec needs lo,hi");
    return box(parse_number(rest.substr(0, comma), "box lo"),
               parse_number(rest.substr(comma + 1), "box hi"));
  }
  throw Error(ErrorCode::bad_config, "unknown regularizer '" + std::string(spec) + "'");
}

std::string SeparableRegularizer::spec_string() const {
  auto num = [](double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
  };
  switch (kind_) {
    case RegKind::zero: return "zero";
    case RegKind::l1: return "l1:" + num(lambda_);
    case RegKind::group_l2: return "group_l2:" + num(lambda_);
    case RegKind::box: return "box:" + num(lo_) + "," + num(hi_);
    case RegKind::l0: return "l0:" + num(lambda_);
  }
  return "";
}

double SeparableRegularizer::value_block(std::span<const double> x) const {
  switch (kind_) {
    case RegKind::zero:
      return 0.0;
    case RegKind::l1: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return lambda_ * s;
    }
    case RegKind::group_l2:
      return lambda_ * std::sqrt(kernels::squared_norm(x.data(), x.size()));
    case RegKind::box:
      for (double v : x)
        if (v < lo_ || v > hi_) return kInf;
      return 0.0;
    case RegKind::l0: {
      std::size_t nz = 0;
      for (double v : x) nz += (v != 0.0);
      return lambda_ * static_cast<double>(nz);
    }
  }
  return 0.0;
}

double SeparableRegularizer::value(const BlockPartition& p,
                                   std::span<const double> x) const {
  if (x.size() != p.total)
    throw Error(ErrorCode::dimension_mismatch, "value: x does not match partition");
  double s = 0.0;
  for (std::size_t i = 0; i < p.block_count(); ++i) s += value_block(p.block(x, i));
  return s;
}

void SeparableRegularizer::prox_block(std::span<const double> x,
                                      std::span<const double> g, double theta,
                                      std::span<double> d) const {
  if (x.size() != g.size() || x.size() != d.size())
    throw Error(ErrorCode::dimension_mismatch, "prox_block: span sizes disagree");
  if (!(theta > 0.0))
    throw Error(ErrorCode::invalid_parameter, "prox_block: theta must be positive");
  const std::size_t n = x.size();
  // minimizing over z = x + s: (theta/2)|z - u|^2 + Psi_i(z), u = x - g/theta
  switch (kind_) {
    case RegKind::zero:
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j] / theta;
      return;
    case RegKind::l1: {
      for (std::size_t j = 0; j < n; ++j) d[j] = x[j] - g[j] / theta;
      kernels::soft_threshold(d.data(), lambda_ / theta, d.data(), n);
      for (std::size_t j = 0; j < n; ++j) d[j] -= x[j];
      return;
    }
    case RegKind::group_l2: {
      double nu_sq = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double u = x[j] - g[j] / theta;
        d[j] = u;  // stash u
        nu_sq += u * u;
      }
      double nu = std::sqrt(nu_sq);
      double scale = nu > 0.0 ? std::max(0.0, 1.0 - lambda_ / (theta * nu)) : 0.0;
      for (std::size_t j = 0; j < n; ++j) d[j] = scale * d[j] - x[j];
      return;
    }
    case RegKind::box:
      for (std::size_t j = 0; j < n; ++j) {
        double u = x[j] - g[j] / theta;
        double dj = std::clamp(u, lo_, hi_) - x[j];
        // the subtraction can round x + dj one ulp past a face, which would
        // hand the caller an infeasible landing point
        while (x[j] + dj < lo_) dj = std::nextafter(dj, kInf);
        while (x[j] + dj > hi_) dj = std::nextafter(dj, -kInf);
        d[j] = dj;
      }
      return;
    case RegKind::l0: {
      // keep u only when (theta/2) u^2 strictly beats the lambda payment;
      // the tie |u| = sqrt(2 lambda / theta) goes to zero
      const double cut = 2.0 * lambda_ / theta;
      for (std::size_t j = 0; j < n; ++j) {
        double u = x[j] - g[j] / theta;
        d[j] = (u * u > cut ? u : 0.0) - x[j];
      }
      return;
    }
  }
}

double SeparableRegularizer::subgradient_residual(const BlockPartition& p,
                                                  std::span<const double> x,
                                                  std::span<const double> grad) const {
  if (x.size() != p.total || grad.size() != p.total)
    throw Error(ErrorCode::dimension_mismatch,
                "subgradient_residual: vector does not match partition");
  if (kind_ == RegKind::l0)
    throw Error(ErrorCode::unsupported, "subgradient residual undefined for l0");
  double acc = 0.0;
  switch (kind_) {
    case RegKind::zero:
      return std::sqrt(kernels::squared_norm(grad.data(), grad.size()));
    case RegKind::l1:
      for (std::size_t j = 0; j < x.size(); ++j) {
        double r;
        if (x[j] > 0.0)
          r = -grad[j] - lambda_;
        else if (x[j] < 0.0)
          r = -grad[j] + lambda_;
        else
          r = std::max(0.0, std::abs(grad[j]) - lambda_);
        acc += r * r;
      }
      return std::sqrt(acc);
    case RegKind::group_l2:
      for (std::size_t i = 0; i < p.block_count(); ++i) {
        auto xi = p.block(x, i);
        auto gi = p.block(grad, i);
        double xn = std::sqrt(kernels::squared_norm(xi.data(), xi.size()));
        if (xn > 0.0) {
          double r2 = 0.0;
          for (std::size_t j = 0; j < xi.size(); ++j) {
            double r = -gi[j] - lambda_ * xi[j] / xn;
            r2 += r * r;
          }
          acc += r2;
        } else {
          double gn = std::sqrt(kernels::squared_norm(gi.data(), gi.size()));
          double r = std::max(0.0, gn - lambda_);
          acc += r * r;
        }
      }
      return std::sqrt(acc);
    case RegKind::box:
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < lo_ || x[j] > hi_)
          throw Error(ErrorCode::invalid_parameter,
                      "subgradient_residual: x outside the box");
        double r;
        if (lo_ == hi_)
          r = 0.0;  // normal cone is all of R
        else if (x[j] == lo_)
          r = std::max(0.0, -grad[j]);  // cone (-inf, 0]
        else if (x[j] == hi_)
          r = std::max(0.0, grad[j]);  // cone [0, inf)
        else
          r = grad[j];
        acc += r * r;
      }
      return std::sqrt(acc);
    default:
      break;
  }
  return 0.0;
}

}  // namespace rnbpg
