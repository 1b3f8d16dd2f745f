#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "swb/reconstruct.hpp"

using namespace swb;

TEST(Minmod, Cases) {
  EXPECT_EQ(minmod(1.0, 2.0), 1.0);
  EXPECT_EQ(minmod(-1.0, 2.0), 0.0);
  EXPECT_EQ(minmod(-1.0, -3.0), -1.0);
  EXPECT_EQ(minmod(0.0, 5.0), 0.0);
}

TEST(Minmod, NeverSteepens) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 100000; ++i) {
    const double a = d(rng), b = d(rng);
    const double m = minmod(a, b);
    EXPECT_LE(std::abs(m), std::min(std::abs(a), std::abs(b)));
    if (m != 0.0) {
      EXPECT_EQ(std::signbit(m), std::signbit(a));
      EXPECT_EQ(std::signbit(m), std::signbit(b));
    }
  }
}

TEST(Muscl, ConstantArray) {
  const std::vector<double> s(6, 2.5);
  const auto r = muscl_scalar(s, 0.1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(r.left_face[i], 2.5);
    EXPECT_EQ(r.right_face[i], 2.5);
  }
}

TEST(Muscl, LinearRampMiddleCell) {
  const std::vector<double> s{0.0, 1.0, 2.0};
  const auto r = muscl_scalar(s, 1.0);
  EXPECT_EQ(r.slope[1], 1.0);
  EXPECT_EQ(r.left_face[1], 0.5);
  EXPECT_EQ(r.right_face[1], 1.5);
  // Extreme cells fall back to first order.
  EXPECT_EQ(r.slope[0], 0.0);
  EXPECT_EQ(r.slope[2], 0.0);
}

TEST(Muscl, LocalExtremumClipped) {
  const auto r = muscl_scalar(std::vector<double>{0.0, 1.0, 0.0}, 1.0);
  EXPECT_EQ(r.slope[1], 0.0);
  EXPECT_EQ(r.left_face[1], 1.0);
  EXPECT_EQ(r.right_face[1], 1.0);
}

TEST(Muscl, RejectsShortArrays) {
  EXPECT_THROW(muscl_scalar(std::vector<double>{1.0, 2.0}, 1.0), ContractError);
}

TEST(Muscl, PreservesCellMeansAndStaysWithinNeighbours) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(50);
    for (auto& v : s) v = d(rng);
    const double dx = 0.1;
    const auto r = muscl_scalar(s, dx);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(0.5 * (r.left_face[i] + r.right_face[i]), s[i],
                  1e-15 * std::max(1.0, std::abs(s[i])));
      if (i > 0 && i + 1 < s.size()) {
        const double lo = std::min({s[i - 1], s[i], s[i + 1]});
        const double hi = std::max({s[i - 1], s[i], s[i + 1]});
        EXPECT_GE(r.left_face[i], lo - 1e-15);
        EXPECT_LE(r.right_face[i], hi + 1e-15);
        const double q1 = (s[i] - s[i - 1]) / dx, q2 = (s[i + 1] - s[i]) / dx;
        EXPECT_LE(std::abs(r.slope[i]), std::min(std::abs(q1), std::abs(q2)));
      }
    }
  }
}

TEST(VelocityReconstruct, ZeroSlope) {
  const auto [l, r] = velocity_reconstruct(0.7, 0.02, 0.015, 0.025, 0.0, 0.1);
  EXPECT_EQ(l, 0.7);
  EXPECT_EQ(r, 0.7);
}

TEST(VelocityReconstruct, UniformHeightIsPlainMuscl) {
  const auto [l, r] = velocity_reconstruct(0.5, 0.02, 0.02, 0.02, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(l, 0.45);
  EXPECT_DOUBLE_EQ(r, 0.55);
}

TEST(VelocityReconstruct, HeightWeightedCorrection) {
  const double h = 0.02, hl = 0.015, hr = 0.025, u = 0.5;
  const auto [ul, ur] = velocity_reconstruct(u, h, hl, hr, 1.0, 0.1);
  EXPECT_NEAR(ul, 0.4375, 1e-15);
  EXPECT_NEAR(ur, 0.5375, 1e-15);
  EXPECT_NEAR(0.5 * (hl * ul + hr * ur), h * u, 1e-17);
}

TEST(VelocityReconstruct, DryCellAndInvalidHeight) {
  const auto [l, r] = velocity_reconstruct(3.0, 1e-12, 0.0, 0.0, 2.0, 0.1);
  EXPECT_EQ(l, 0.0);
  EXPECT_EQ(r, 0.0);
  EXPECT_THROW(velocity_reconstruct(0.1, -1e-3, 0.0, 0.0, 0.0, 0.1), ContractError);
  EXPECT_THROW(velocity_reconstruct(0.1, NAN, 0.0, 0.0, 0.0, 0.1), ContractError);
}

TEST(VelocityReconstruct, DischargeMeanOnRandomWetCells) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> height(1e-4, 2.0), vel(-5.0, 5.0),
      frac(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double h = height(rng), u = vel(rng), dx = 0.1;
    // Admissible MUSCL face heights: h -+ dx/2 Dh with |dx/2 Dh| <= h.
    const double delta = (2.0 * frac(rng) - 1.0) * h;
    const double hl = h - delta, hr = h + delta;
    const double du = vel(rng);
    const auto [ul, ur] = velocity_reconstruct(u, h, hl, hr, du, dx);
    const double mean = 0.5 * (hl * ul + hr * ur);
    const double scale = std::max(std::abs(h * u), h * std::abs(du) * dx);
    EXPECT_LE(std::abs(mean - h * u), 1e-14 * std::max(scale, 1e-300));
  }
}

TEST(Hydrostatic, FlatInterfaceIsIdentity) {
  const auto r = hydrostatic_reconstruct(0.3, 0.7, 1.25, 1.25);
  EXPECT_EQ(r.hL, 0.3);
  EXPECT_EQ(r.hR, 0.7);
}

TEST(Hydrostatic, ThresholdActivated) {
  const auto r = hydrostatic_reconstruct(0.01, 0.02, 0.0, 0.018);
  EXPECT_EQ(r.hL, 0.0);
  EXPECT_EQ(r.hR, 0.02);
  const auto j = hydrostatic_reconstruct_jump(0.01, 0.02, 0.018);
  EXPECT_EQ(j.hL, 0.0);
  EXPECT_EQ(j.hR, 0.02);
}

TEST(Hydrostatic, LakeAtRestGivesEqualHeights) {
  // h + z = 1 on both sides.
  const auto r = hydrostatic_reconstruct(0.75, 0.5, 0.25, 0.5);
  EXPECT_EQ(r.hL, r.hR);
  EXPECT_EQ(r.hL, 0.5);
}

TEST(Hydrostatic, RejectsNegativeHeights) {
  EXPECT_THROW(hydrostatic_reconstruct(-0.1, 0.1, 0.0, 0.0), ContractError);
  EXPECT_THROW(hydrostatic_reconstruct_jump(0.1, -0.1, 0.0), ContractError);
}

TEST(Hydrostatic, ClippingProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> h(0.0, 1.0), z(-1.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double hm = h(rng), hp = h(rng), zm = z(rng), zp = z(rng);
    const auto r = hydrostatic_reconstruct(hm, hp, zm, zp);
    EXPECT_GE(r.hL, 0.0);
    EXPECT_GE(r.hR, 0.0);
    EXPECT_LE(r.hL, hm);
    EXPECT_LE(r.hR, hp);
  }
}

TEST(Hydrostatic, FormulationsAgreeBitwiseOnDyadicInputs) {
  // Multiples of 2^-20 in [-1, 1]: every sum and difference is exact.
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> k(-(1 << 20), 1 << 20);
  const double unit = std::ldexp(1.0, -20);
  for (int i = 0; i < 100000; ++i) {
    const double hm = std::abs(k(rng)) * unit, hp = std::abs(k(rng)) * unit;
    const double zm = k(rng) * unit, zp = k(rng) * unit;
    const auto a = hydrostatic_reconstruct(hm, hp, zm, zp);
    const auto b = hydrostatic_reconstruct_jump(hm, hp, zp - zm);
    ASSERT_EQ(a.hL, b.hL);
    ASSERT_EQ(a.hR, b.hR);
  }
}

namespace {

Order orders[] = {Order::First, Order::Second};

PaddedState lake_with_bump(std::size_t n, double dx, double surface) {
  PaddedState s;
  for (std::size_t c = 0; c < n + 2; ++c) {
    const double x = (static_cast<double>(c) - 0.5) * dx;
    const double z = std::max(0.0, 0.2 - (x - 5.0) * (x - 5.0) / 5.0);
    s.z.push_back(z);
    s.h.push_back(std::max(0.0, surface - z));
    s.q.push_back(0.0);
  }
  return s;
}

}  // namespace

TEST(ReconstructAll, FirstOrderUsesCellValues) {
  PaddedState s{{0.1, 0.2, 0.4, 0.3}, {0.01, 0.02, -0.04, 0.0}, {0.0, -0.1, 0.05, 0.2}};
  const auto f = reconstruct_all(s, Order::First, 0.5);
  ASSERT_EQ(f.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(f[k].h_minus, s.h[k]);
    EXPECT_EQ(f[k].h_plus, s.h[k + 1]);
    EXPECT_EQ(f[k].z_minus, s.z[k]);
    EXPECT_EQ(f[k].z_plus, s.z[k + 1]);
    EXPECT_DOUBLE_EQ(f[k].u_minus, s.q[k] / s.h[k]);
  }
}

TEST(ReconstructAll, LakeAtRestWithBump) {
  for (Order order : orders) {
    for (double surface : {0.5, 0.15}) {  // fully wet, emerged bump
      const auto s = lake_with_bump(100, 0.1, surface);
      const auto faces = reconstruct_all(s, order, 0.1);
      for (const auto& f : faces) {
        EXPECT_NEAR(f.hL, f.hR, 1e-15);
        EXPECT_EQ(f.u_minus, 0.0);
        EXPECT_EQ(f.u_plus, 0.0);
      }
    }
  }
}

TEST(ReconstructAll, UniformFlowOnFlatBed) {
  PaddedState s{std::vector<double>(8, 0.02), std::vector<double>(8, 0.01),
                std::vector<double>(8, 0.0)};
  for (Order order : orders) {
    for (const auto& f : reconstruct_all(s, order, 0.1)) {
      EXPECT_EQ(f.h_minus, 0.02);
      EXPECT_EQ(f.h_plus, 0.02);
      EXPECT_EQ(f.hL, 0.02);
      EXPECT_EQ(f.hR, 0.02);
      EXPECT_DOUBLE_EQ(f.u_minus, 0.5);
      EXPECT_DOUBLE_EQ(f.u_plus, 0.5);
      EXPECT_EQ(f.dz, 0.0);
    }
  }
}

TEST(ReconstructAll, SecondOrderDerivesBedFromSurface) {
  PaddedState s{{0.02, 0.018, 0.015, 0.013, 0.012},
                {0.01, 0.01, 0.01, 0.01, 0.01},
                {0.0, -0.01, -0.02, -0.03, -0.04}};
  const double dx = 0.1;
  const auto f = reconstruct_all(s, Order::Second, dx);
  std::vector<double> eta(5);
  for (int c = 0; c < 5; ++c) eta[c] = s.h[c] + s.z[c];
  const auto hm = muscl_scalar(s.h, dx);
  const auto em = muscl_scalar(eta, dx);
  for (std::size_t k = 0; k + 1 < 5; ++k) {
    EXPECT_EQ(f[k].h_minus, hm.right_face[k]);
    EXPECT_EQ(f[k].h_plus, hm.left_face[k + 1]);
    EXPECT_EQ(f[k].z_minus, em.right_face[k] - hm.right_face[k]);
    EXPECT_EQ(f[k].z_plus, em.left_face[k + 1] - hm.left_face[k + 1]);
    EXPECT_EQ(f[k].dz, f[k].z_plus - f[k].z_minus);
    EXPECT_LE(f[k].hL, f[k].h_minus);
    EXPECT_LE(f[k].hR, f[k].h_plus);
  }
}

TEST(ReconstructAll, DryCellsGetNoSlope) {
  PaddedState s{{1.0, 0.5, 0.0, 0.0, 0.0}, {0.2, 0.1, 0.0, 0.0, 0.0},
                {0.0, 0.0, 0.0, 0.0, 0.0}};
  const auto f = reconstruct_all(s, Order::Second, 0.1);
  EXPECT_EQ(f[1].h_plus, 0.0);
  EXPECT_EQ(f[2].h_minus, 0.0);
  EXPECT_EQ(f[1].u_plus, 0.0);
  for (const auto& face : f) {
    EXPECT_GE(face.hL, 0.0);
    EXPECT_GE(face.hR, 0.0);
  }
}
