#pragma once

#include <span>
#include <string>
#include <string_view>

#include "rnbpg/partition.hpp"

namespace rnbpg {

enum class RegKind { zero, l1, group_l2, box, l0 };

// Block-separable regularizer Psi(x) = sum_i Psi_i(x_i). group_l2 treats each
// partition block as one group; box applies the same [lo, hi] to every
// coordinate; l0 is nonconvex (no subgradient residual).
class SeparableRegularizer {
 public:
  static SeparableRegularizer zero();
  static SeparableRegularizer l1(double lambda);
  static SeparableRegularizer group_l2(double lambda);
  static SeparableRegularizer box(double lo, double hi);
  static SeparableRegularizer l0(double lambda);

  // grammar: zero | l1:<lambda> | group_l2:<lambda> | box:<lo>,<hi> | l0:<lambda>
  static SeparableRegularizer parse(std::string_view spec);
  std::string spec_string() const;

  RegKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool convex() const { return kind_ != RegKind::l0; }

  double value_block(std::span<const double> x) const;
  double value(const BlockPartition& p, std::span<const double> x) const;

  // d = argmin_s g's + (theta/2)|s|^2 + Psi_i(x + s); closed form per kind
  void prox_block(std::span<const double> x, std::span<const double> g,
                  double theta, std::span<double> d) const;

  // dist(-grad, dPsi(x)); convex kinds only
  double subgradient_residual(const BlockPartition& p, std::span<const double> x,
                              std::span<const double> grad) const;

 private:
  SeparableRegularizer(RegKind k, double lambda, double lo, double hi)
      : kind_(k), lambda_(lambda), lo_(lo), hi_(hi) {}

  RegKind kind_;
  double lambda_;
  double lo_, hi_;
};

}  // namespace rnbpg
