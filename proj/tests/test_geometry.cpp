// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/geometry.hpp"
#include "cubegen/planner.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace cubegen {
namespace {

constexpr double kPi = std::numbers::pi;

Direction random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Direction d(n(rng), n(rng), n(rng));
    return d.normalized();
}

std::array<double, kFaceCount> coverages(const CubemapFrame& c) {
    std::array<double, kFaceCount> out{};
    for (Face f : kAllFaces) out[index(f)] = mask_coverage(c.mask(f));
    return out;
}

CameraPose pose(const Rotation& r, double h, double v) {
    CameraPose p;
    p.rotation = r;
    p.hfov_deg = h;
    p.vfov_deg = v;
    return p;
}

TEST(EquirectPixel, CenterLooksForward) {
    for (int W : {8, 64, 512}) {
        const Direction d = equirect_pixel_to_direction(W / 2, W / 4, W);
        // Half a pixel off in each axis.
        EXPECT_LT(std::acos(std::clamp(d.z(), -1.0, 1.0)), 2.0 * kPi / W) << W;
    }
}

TEST(EquirectPixel, RoundTripsEveryPixel) {
    const int W = 64;
    for (int v = 0; v < W / 2; ++v)
        for (int u = 0; u < W; ++u)
            ASSERT_EQ(direction_to_equirect_pixel(equirect_pixel_to_direction(u, v, W), W), (EquirectPixel{u, v}));
}

TEST(EquirectPixel, LeftColumnLongitude) {
    const Direction d = equirect_pixel_to_direction(0, 128, 512);
    EXPECT_NEAR(std::atan2(d.x(), d.z()), -kPi + kPi / 512, 1e-12);
    EXPECT_NEAR(d.norm(), 1.0, 1e-12);
}

TEST(EquirectPixel, RejectsOutOfRange) {
    EXPECT_THROW(equirect_pixel_to_direction(64, 0, 64), std::invalid_argument);
    EXPECT_THROW(equirect_pixel_to_direction(0, 32, 64), std::invalid_argument);
    EXPECT_THROW(equirect_pixel_to_direction(-1, 0, 64), std::invalid_argument);
}

TEST(FaceCoords, AxisCenters) {
    const FaceCoords f = direction_to_face_coords({0, 0, 1});
    EXPECT_EQ(f.face, Face::F);
    EXPECT_DOUBLE_EQ(f.x, 0.5);
    EXPECT_DOUBLE_EQ(f.y, 0.5);
    const FaceCoords r = direction_to_face_coords({1, 0, 0});
    EXPECT_EQ(r.face, Face::R);
    EXPECT_DOUBLE_EQ(r.x, 0.5);
    EXPECT_DOUBLE_EQ(r.y, 0.5);
    const std::array<std::pair<Direction, Face>, 4> rest{{{{0, 0, -1}, Face::B}, {{-1, 0, 0}, Face::L},
                                                          {{0, 1, 0}, Face::U}, {{0, -1, 0}, Face::D}}};
    for (const auto& [d, face] : rest) EXPECT_EQ(direction_to_face_coords(d).face, face);
}

TEST(FaceCoords, OffAxisFrontMatchesHandValue) {
    // Plane hit (0.5, 0.5) at unit depth; column follows +x, row follows -y.
    const FaceCoords c = direction_to_face_coords(Direction(0.5, 0.5, 1.0).normalized());
    EXPECT_EQ(c.face, Face::F);
    EXPECT_NEAR(c.x, 0.75, 1e-12);
    EXPECT_NEAR(c.y, 0.25, 1e-12);
    EXPECT_NEAR((face_coords_to_direction(c.face, c.x, c.y) - Direction(0.5, 0.5, 1.0).normalized()).norm(), 0.0, 1e-12);
}

TEST(FaceCoords, TiesFollowCanonicalOrder) {
    EXPECT_EQ(direction_to_face_coords(Direction(1, 0, 1).normalized()).face, Face::F);
    EXPECT_EQ(direction_to_face_coords(Direction(1, 1, 0).normalized()).face, Face::R);
    EXPECT_EQ(direction_to_face_coords(Direction(-1, 0, -1).normalized()).face, Face::B);
    EXPECT_EQ(direction_to_face_coords(Direction(-1, -1, 0).normalized()).face, Face::L);
}

TEST(FaceCoords, RandomRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        const Direction d = random_direction(rng);
        const FaceCoords c = direction_to_face_coords(d);
        ASSERT_GE(c.x, 0.0);
        ASSERT_LE(c.x, 1.0);
        ASSERT_GE(c.y, 0.0);
        ASSERT_LE(c.y, 1.0);
        ASSERT_LT((face_coords_to_direction(c.face, c.x, c.y) - d).norm(), 1e-9);
    }
}

TEST(FaceBasis, RightHandedAndOrthonormal) {
    for (Face f : kAllFaces) {
        const FaceBasis& b = face_basis(f);
        EXPECT_NEAR(b.normal.dot(b.right), 0.0, 1e-15);
        EXPECT_NEAR(b.normal.dot(b.down), 0.0, 1e-15);
        EXPECT_NEAR(b.right.dot(b.down), 0.0, 1e-15);
        // Seen from the centre, image axes wind opposite to the outward normal.
        EXPECT_NEAR((b.right.cross(b.down) + b.normal).norm(), 0.0, 1e-15) << face_name(f);
    }
}

TEST(SolidAngle, PixelsTileTheSphere) {
    for (int R : {1, 2, 7, 32}) {
        double sum = 0.0;
        for (int row = 0; row < R; ++row)
            for (int col = 0; col < R; ++col) sum += face_pixel_solid_angle(R, row, col);
        EXPECT_NEAR(6.0 * sum, 4.0 * kPi, 1e-12) << R;
    }
}

TEST(SolidAngle, FrustumClosedForm) {
    EXPECT_NEAR(frustum_solid_angle(kPi / 2, kPi / 2), 4.0 * kPi / 6.0, 1e-12);
    // Small frusta approach h * v.
    EXPECT_NEAR(frustum_solid_angle(1e-3, 2e-3) / 2e-6, 1.0, 1e-6);
}

TEST(Projection, FrontNinetyCoversExactlyF) {
    Image frame(32, 32, 3, 0.7f);
    const CubemapFrame c = project_perspective_to_cubemap(frame, pose(Rotation::Identity(), 90, 90), 32);
    const auto cov = coverages(c);
    EXPECT_DOUBLE_EQ(cov[index(Face::F)], 1.0);
    for (Face f : {Face::R, Face::B, Face::L, Face::U, Face::D}) EXPECT_DOUBLE_EQ(cov[index(f)], 0.0) << face_name(f);
    EXPECT_FLOAT_EQ(c.face(Face::F).at(5, 9, 1), 0.7f);
    EXPECT_FLOAT_EQ(c.face(Face::R).at(5, 9, 1), 0.0f);
}

TEST(Projection, YawNinetyCoversExactlyR) {
    Image frame(16, 16, 1, 1.0f);
    const CubemapFrame c =
        project_perspective_to_cubemap(frame, pose(rotation_about(Direction::UnitY(), kPi / 2), 90, 90), 16);
    const auto cov = coverages(c);
    EXPECT_DOUBLE_EQ(cov[index(Face::R)], 1.0);
    for (Face f : {Face::F, Face::B, Face::L, Face::U, Face::D}) EXPECT_DOUBLE_EQ(cov[index(f)], 0.0) << face_name(f);
}

TEST(Projection, HalfHeightFrustumCoverage) {
    // Ray-cast oracle: a face row is inside iff |y| <= tan(22.5 deg) at unit depth.
    const int R = 256;
    int rows = 0;
    for (int row = 0; row < R; ++row) {
        const double y = 1.0 - 2.0 * (row + 0.5) / R;
        if (std::abs(y) <= std::tan(kPi / 8)) ++rows;
    }
    Image frame(8, 8, 1, 1.0f);
    const CubemapFrame c = project_perspective_to_cubemap(frame, pose(Rotation::Identity(), 90, 45), R);
    EXPECT_DOUBLE_EQ(mask_coverage(c.mask(Face::F)), static_cast<double>(rows) / R);
    EXPECT_NEAR(mask_coverage(c.mask(Face::F)), std::tan(kPi / 8), 2.0 / R);
}

TEST(Projection, MaskedSolidAngleMatchesFrustum) {
    const int R = 256;
    const std::array<std::array<double, 2>, 3> fovs{{{90, 45}, {70, 50}, {120, 60}}};
    for (const auto& [h, v] : fovs) {
        const CameraPose p = pose(rotation_about(Direction(0.3, 1.0, 0.2).normalized(), 0.7), h, v);
        const CubemapFrame c = project_perspective_to_cubemap(Image(4, 4, 1, 1.0f), p, R);
        double omega = 0.0;
        for (Face f : kAllFaces)
            for (int row = 0; row < R; ++row)
                for (int col = 0; col < R; ++col)
                    if (c.mask(f).at(row, col)) omega += face_pixel_solid_angle(R, row, col);
        const double expect = frustum_solid_angle(h * kPi / 180, v * kPi / 180);
        EXPECT_LT(std::abs(omega / expect - 1.0), 0.01) << h << "x" << v;
    }
}

TEST(Projection, CubeSymmetryPermutesCoverage) {
    const Rotation base = rotation_about(Direction::UnitY(), 0.31) * rotation_about(Direction::UnitX(), -0.17);
    const Rotation yaw90 = rotation_about(Direction::UnitY(), kPi / 2);
    const Image frame(8, 8, 1, 1.0f);
    const auto a = coverages(project_perspective_to_cubemap(frame, pose(base, 70, 50), 32));
    const auto b = coverages(project_perspective_to_cubemap(frame, pose(yaw90 * base, 70, 50), 32));
    // A +90 deg yaw carries F -> R -> B -> L -> F and spins U, D in place.
    EXPECT_DOUBLE_EQ(b[index(Face::R)], a[index(Face::F)]);
    EXPECT_DOUBLE_EQ(b[index(Face::B)], a[index(Face::R)]);
    EXPECT_DOUBLE_EQ(b[index(Face::L)], a[index(Face::B)]);
    EXPECT_DOUBLE_EQ(b[index(Face::F)], a[index(Face::L)]);
    EXPECT_DOUBLE_EQ(b[index(Face::U)], a[index(Face::U)]);
    EXPECT_DOUBLE_EQ(b[index(Face::D)], a[index(Face::D)]);
}

TEST(Projection, RejectsBadInput) {
    const Image frame(4, 4, 1);
    EXPECT_THROW(project_perspective_to_cubemap(frame, pose(Rotation::Identity(), 0, 45), 16), std::invalid_argument);
    EXPECT_THROW(project_perspective_to_cubemap(frame, pose(Rotation::Identity(), 90, 180), 16), std::invalid_argument);
    EXPECT_THROW(project_perspective_to_cubemap(frame, pose(Rotation::Identity(), 90, 90), 3), std::invalid_argument);
    Rotation skew = Rotation::Identity();
    skew(0, 1) = 0.1;
    EXPECT_THROW(project_perspective_to_cubemap(frame, pose(skew, 90, 90), 16), std::invalid_argument);
    EXPECT_THROW(project_perspective_to_cubemap(frame, pose(-Rotation::Identity(), 90, 90), 16), std::invalid_argument);
}

TEST(Equirect, ConstantCubemapGivesConstantGrid) {
    const CubemapFrame c(8, 2, 0.25f, 1);
    const EquirectGrid e = cubemap_to_equirect(c, 32);
    ASSERT_EQ(e.height(), 16);
    for (float x : e.image.data()) ASSERT_FLOAT_EQ(x, 0.25f);
    const CubemapFrame back = equirect_to_cubemap(e, 8);
    for (Face f : kAllFaces) {
        for (float x : back.face(f).data()) ASSERT_FLOAT_EQ(x, 0.25f);
        EXPECT_DOUBLE_EQ(mask_coverage(back.mask(f)), 1.0);
    }
}

TEST(Equirect, BandLimitedRoundTrip) {
    const int R = 64;
    const CubemapFrame c = testing::smooth_cubemap(R);
    const CubemapFrame back = equirect_to_cubemap(cubemap_to_equirect(c, 4 * R), R);
    for (Face f : kAllFaces) EXPECT_LE(testing::max_abs_diff(back.face(f), c.face(f)), 0.02) << face_name(f);
    const EquirectGrid e = testing::smooth_equirect(4 * R);
    EXPECT_LE(testing::max_abs_diff(cubemap_to_equirect(equirect_to_cubemap(e, R), 4 * R).image, e.image), 0.02);
}

TEST(Equirect, SingleFaceAreaWeightedMean) {
    CubemapFrame c(32, 1, 0.0f, 1);
    for (float& x : c.face(Face::F).data()) x = 1.0f;
    const int W = 512;
    const EquirectGrid e = cubemap_to_equirect(c, W);
    double num = 0.0;
    double den = 0.0;
    for (int v = 0; v < W / 2; ++v) {
        const double lat = kPi / 2 - (v + 0.5) / (W / 2) * kPi;
        for (int u = 0; u < W; ++u) {
            num += std::cos(lat) * e.image.at(v, u, 0);
            den += std::cos(lat);
        }
    }
    EXPECT_NEAR(num / den, 1.0 / 6.0, 2e-3);
}

TEST(Equirect, AreaElementIntegratesToSphere) {
    const int W = 512;
    const int H = W / 2;
    double sum = 0.0;
    for (int v = 0; v < H; ++v) {
        const double lat = kPi / 2 - (v + 0.5) / H * kPi;
        for (int u = 0; u < W; ++u) {
            const FaceCoords c = direction_to_face_coords(equirect_pixel_to_direction(u, v, W));
            const bool on_face = c.x >= 0.0 && c.x <= 1.0 && c.y >= 0.0 && c.y <= 1.0;
            sum += on_face ? std::cos(lat) * (2 * kPi / W) * (kPi / H) : 0.0;
        }
    }
    EXPECT_LT(std::abs(sum / (4 * kPi) - 1.0), 1e-3);
}

TEST(Equirect, MinimumSizes) {
    const EquirectGrid e(8, 1, 0.5f);
    const CubemapFrame c = equirect_to_cubemap(e, 2);
    EXPECT_EQ(c.resolution, 2);
    EXPECT_EQ(cubemap_to_equirect(c, 8).width(), 8);
    EXPECT_THROW(cubemap_to_equirect(c, 6), std::invalid_argument);
}

TEST(Sampling, CubemapSeamTapsReachNeighbour) {
    // Directions just across the F/R edge sample the same smooth value from
    // both sides.
    const CubemapFrame c = testing::direction_cubemap(32);
    std::array<float, 3> a{}, b{};
    const Direction left = Direction(1.0 - 1e-6, 0.1, 1.0).normalized();
    const Direction right = Direction(1.0, 0.1, 1.0 - 1e-6).normalized();
    sample_cubemap(c, left, a);
    sample_cubemap(c, right, b);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 2e-3);
}

TEST(Sampling, EquirectWrapsLongitude) {
    const EquirectGrid e = testing::smooth_equirect(64);
    std::array<float, 3> a{}, b{};
    sample_equirect(e, Direction(-1e-9, 0.2, -1.0).normalized(), a);
    sample_equirect(e, Direction(1e-9, 0.2, -1.0).normalized(), b);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-6);
}

TEST(Perspective, RenderThenProjectMatchesOnMask) {
    const int R = 64;
    const CubemapFrame gt = testing::smooth_cubemap(R);
    const CameraPose p = pose(rotation_about(Direction::UnitY(), 0.4), 90, 60);
    const Image frame = render_perspective(gt, p, 160, 96);
    const CubemapFrame c = project_perspective_to_cubemap(frame, p, R);
    double worst = 0.0;
    for (Face f : kAllFaces)
        for (int row = 0; row < R; ++row)
            for (int col = 0; col < R; ++col)
                if (c.mask(f).at(row, col))
                    for (int k = 0; k < 3; ++k)
                        worst = std::max(worst, static_cast<double>(std::abs(c.face(f).at(row, col, k) -
                                                                             gt.face(f).at(row, col, k))));
    EXPECT_LE(worst, 0.02);
}

TEST(Trajectory, IdenticalAnchorsRepeat) {
    const CameraPose a = pose(rotation_about(Direction::UnitX(), 0.3), 80, 50);
    const std::vector<CameraPose> anchors{a, a};
    const auto out = sample_trajectory(anchors, 5);
    ASSERT_EQ(out.size(), 5u);
    for (const CameraPose& p : out) {
        EXPECT_LT((p.rotation - a.rotation).norm(), 1e-12);
        EXPECT_DOUBLE_EQ(p.hfov_deg, 80);
    }
}

TEST(Trajectory, YawMidpoint) {
    const std::vector<CameraPose> anchors{pose(Rotation::Identity(), 90, 90),
                                          pose(rotation_about(Direction::UnitY(), kPi / 2), 90, 90)};
    const auto out = sample_trajectory(anchors, 3);
    EXPECT_LT((out[1].rotation - rotation_about(Direction::UnitY(), kPi / 4)).norm(), 1e-9);
    EXPECT_EQ(out.front().rotation, anchors.front().rotation);
    EXPECT_EQ(out.back().rotation, anchors.back().rotation);
}

TEST(Trajectory, UniformStepWithinSegments) {
    const std::vector<CameraPose> anchors{
        pose(Rotation::Identity(), 60, 40), pose(rotation_about(Direction::UnitY(), 1.2), 90, 60),
        pose(rotation_about(Direction::UnitY(), 1.2) * rotation_about(Direction::UnitX(), 0.5), 120, 80)};
    const auto out = sample_trajectory(anchors, 27);
    ASSERT_EQ(out.size(), 27u);
    EXPECT_EQ(out.front().rotation, anchors.front().rotation);
    EXPECT_EQ(out.back().rotation, anchors.back().rotation);
    EXPECT_DOUBLE_EQ(out.back().hfov_deg, 120);
    // Uniform global spacing: every step that does not straddle an anchor has
    // the same geodesic length.
    const double total = rotation_distance(anchors[0].rotation, anchors[1].rotation) +
                         rotation_distance(anchors[1].rotation, anchors[2].rotation);
    const double step = total / 26;
    const double knee = rotation_distance(anchors[0].rotation, anchors[1].rotation);
    for (int i = 1; i < 27; ++i) {
        const double a0 = step * (i - 1), a1 = step * i;
        if (a0 < knee && a1 > knee) continue;
        EXPECT_NEAR(rotation_distance(out[i - 1].rotation, out[i].rotation), step, 1e-9) << i;
    }
}

TEST(Trajectory, RejectsAntipodalAnchors) {
    const std::vector<CameraPose> anchors{pose(Rotation::Identity(), 90, 90),
                                          pose(rotation_about(Direction::UnitY(), kPi), 90, 90)};
    EXPECT_THROW(sample_trajectory(anchors, 4), std::invalid_argument);
    EXPECT_THROW(sample_trajectory(std::span(anchors).first(1), 4), std::invalid_argument);
}

} // namespace
} // namespace cubegen
