#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lamewave/kernels.hpp"
#include "support.hpp"

using namespace lamewave;
using lamewave::testing::KernelBlock;

namespace {

constexpr double kPiD = std::numbers::pi;

double mfor(BranchKind kind) { return kind == BranchKind::Elliptic ? 0.8 : 0.75; }

std::string block_name(const KernelBlock& b) {
  return std::to_string(b.dim) + "d_" + to_string(b.kind) + "_k" + std::to_string(b.k);
}

}  // namespace

TEST(Kernels, ClosedFormValues) {
  // 3D elliptic, r = 0 is excluded; a = m r = 0.8, V = 1
  const auto p3 = EvalPoint::make3(0.6, 0.8, 0.6);  // r = 1, z = 0.6
  const double a = 0.8, z = 0.6, V = std::hypot(z, a);
  EXPECT_NEAR(kernel_f(3, BranchKind::Elliptic, 0, 0.8, p3).value, 1.0 / (4 * kPiD * V), 1e-15);
  EXPECT_NEAR(kernel_f(3, BranchKind::Elliptic, 1, 0.8, p3).value, std::asinh(z / a) / (4 * kPiD),
              1e-15);
  // 2D hyperbolic: 2m f_0 = 1 inside the cone, 0 outside
  EXPECT_DOUBLE_EQ(kernel_f(2, BranchKind::Hyperbolic, 0, 0.75, EvalPoint::make2(1.0, 2.0)).value,
                   1.0 / 1.5);
  EXPECT_DOUBLE_EQ(kernel_f(2, BranchKind::Hyperbolic, 0, 0.75, EvalPoint::make2(1.0, 0.5)).value, 0.0);
  EXPECT_DOUBLE_EQ(kernel_f(2, BranchKind::Hyperbolic, 2, 0.75, EvalPoint::make2(1.0, 2.0)).value,
                   (2.0 - 0.75) * (2.0 - 0.75) / 3.0);
}

TEST(Kernels, OutsideConeIsExactZero) {
  for (int k : {0, 1, 2, 3}) {
    const auto v = kernel_f(3, BranchKind::Hyperbolic, k, 2.0, EvalPoint::make3(1.0, 1.0, 2.0), 3);
    EXPECT_FALSE(v.in_support);
    EXPECT_EQ(v.value, 0.0);
    EXPECT_EQ(v.grad[2], 0.0);
    EXPECT_EQ(v.hess[0][0], 0.0);
  }
}

TEST(Kernels, Errors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code([] { kernel_f(3, BranchKind::Elliptic, 0, 0.8, EvalPoint::make3(0, 0, 0)); }),
            ErrorCode::OnSingularity);
  EXPECT_EQ(code([] { kernel_f(3, BranchKind::Hyperbolic, 0, 1.0, EvalPoint::make3(1, 0, 1)); }),
            ErrorCode::OnSingularity);
  EXPECT_EQ(code([] { kernel_f(3, BranchKind::Elliptic, 1, 0.8, EvalPoint::make3(0, 0, 1)); }),
            ErrorCode::OnSingularity);
  EXPECT_EQ(code([] { kernel_f(2, BranchKind::Elliptic, 0, 0.8, EvalPoint::make2(1, 1), 4); }),
            ErrorCode::UnsupportedOrder);
  EXPECT_EQ(code([] { kernel_f(2, BranchKind::Parabolic, 0, 1.0, EvalPoint::make2(1, 1)); }),
            ErrorCode::SonicDegenerate);
  EXPECT_EQ(code([] { kernel_f(2, BranchKind::Elliptic, 3, 0.8, EvalPoint::make2(1, 1)); }),
            ErrorCode::InvalidArgument);
}

TEST(Kernels, SingularDistance) {
  EXPECT_DOUBLE_EQ(singular_distance(BranchKind::Elliptic, 0.8, EvalPoint::make3(3, 0, 4)), 5.0);
  // cone z = r: distance from (r, z) = (2, 0) is |0 - 2|/sqrt2 only where the projection is positive
  EXPECT_NEAR(singular_distance(BranchKind::Hyperbolic, 1.0, EvalPoint::make2(2, 0)), std::sqrt(2.0),
              1e-15);
  EXPECT_DOUBLE_EQ(singular_distance(BranchKind::Hyperbolic, 1.0, EvalPoint::make2(0.1, -5)),
                   std::hypot(0.1, 5.0));
  EXPECT_DOUBLE_EQ(singular_distance(BranchKind::Elliptic, 0.8, EvalPoint::make2(0.5, 4), 1), 0.5);
}

TEST(Kernels, RecurrenceAllBlocks) {
  for (const auto& b : lamewave::testing::all_kernel_blocks()) {
    if (b.k == 0) continue;
    const double m = mfor(b.kind);
    double worst = 0.0;
    for (const auto& p : lamewave::testing::kernel_points(b, m, 50, 11 + b.k))
      worst = std::max(worst, verify_recurrence(b.dim, b.kind, b.k, m, p));
    EXPECT_LE(worst, 1e-10) << block_name(b);
  }
  // f_3 exists on hyperbolic branches only
  for (int dim : {2, 3}) {
    const KernelBlock b{dim, BranchKind::Hyperbolic, 3};
    for (const auto& p : lamewave::testing::kernel_points(b, 0.75, 30, 5))
      EXPECT_LE(verify_recurrence(dim, b.kind, 3, 0.75, p), 1e-10);
  }
}

TEST(Kernels, PdeResidual) {
  for (int dim : {2, 3})
    for (BranchKind kind : {BranchKind::Elliptic, BranchKind::Hyperbolic}) {
      const KernelBlock b{dim, kind, 0};
      double worst = 0.0;
      for (const auto& p : lamewave::testing::kernel_points(b, mfor(kind), 40, 3))
        worst = std::max(worst, lamewave::testing::kernel_pde_residual(dim, kind, mfor(kind), p));
      EXPECT_LE(worst, 1e-4) << block_name(b);
    }
}

TEST(Kernels, DerivativesMatchFiniteDifferences) {
  for (const auto& b : lamewave::testing::all_kernel_blocks()) {
    const double m = mfor(b.kind);
    double worst = 0.0;
    for (const auto& p : lamewave::testing::kernel_points(b, m, 20, 7))
      worst = std::max(worst, lamewave::testing::kernel_derivative_gap(b, m, p));
    EXPECT_LE(worst, 1e-6) << block_name(b);
  }
}

TEST(Kernels, RadialDependenceOnly) {
  // rotating x in 3D leaves every kernel unchanged
  for (BranchKind kind : {BranchKind::Elliptic, BranchKind::Hyperbolic})
    for (int k : {0, 1, 2}) {
      const double a = kernel_f(3, kind, k, 0.75, EvalPoint::make3(1.0, 0.0, 3.0)).value;
      const double b = kernel_f(3, kind, k, 0.75, EvalPoint::make3(0.6, -0.8, 3.0)).value;
      EXPECT_NEAR(a, b, 1e-15 * std::max(1.0, std::abs(a)));
    }
}
