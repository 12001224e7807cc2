// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Sphere / cubemap / equirect / perspective mappings.
//
// World frame is right-handed: +x right, +y up, +z front. Each face is
// described by an outward normal plus the 3D directions of increasing column
// ("right") and increasing row ("down") in its image:
//
//   face  normal  right  down
//   F     +z      +x     -y
//   R     +x      -z     -y
//   B     -z      -x     -y
//   L     -x      +z     -y
//   U     +y      +x     +z
//   D     -y      +x     -z
//
// With this table L, F, R, B unfold into a horizontal strip and U / D sit
// above / below F with matching columns. All pixel lookups use pixel centers.

#include "cubegen/face.hpp"
#include "cubegen/image.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cubegen {

using Direction = Eigen::Vector3d;
using Rotation = Eigen::Matrix3d;

/// Camera-to-world rotation plus field of view. The camera looks down its
/// local +z with +x right and +y up.
struct CameraPose {
    Rotation rotation = Rotation::Identity();
    double hfov_deg = 90.0;
    double vfov_deg = 90.0;

    /// Throws std::invalid_argument unless rotation is in SO(3) (1e-7) and
    /// both FoVs lie strictly inside (0, 180).
    void validate() const;
};

struct FaceBasis {
    Direction normal;
    Direction right;
    Direction down;
};

const FaceBasis& face_basis(Face f);

struct FaceCoords {
    Face face;
    double x; // column direction, [0, 1]
    double y; // row direction, [0, 1]
};

struct EquirectPixel {
    int u;
    int v;
    friend bool operator==(const EquirectPixel&, const EquirectPixel&) = default;
};

Direction equirect_pixel_to_direction(int u, int v, int W);
EquirectPixel direction_to_equirect_pixel(const Direction& d, int W);

/// Largest-magnitude axis selects the face; ties go to the earlier face in
/// canonical order.
FaceCoords direction_to_face_coords(const Direction& d);

/// Inverse of direction_to_face_coords. Coordinates outside [0, 1] are
/// accepted and extend the face plane, which is how cross-face taps are
/// resolved.
Direction face_coords_to_direction(Face f, double x, double y);

Direction face_pixel_direction(Face f, int R, int row, int col);

/// Exact solid angle subtended by one face pixel.
double face_pixel_solid_angle(int R, int row, int col);

/// Analytic solid angle of a rectangular frustum with full angles h, v (radians).
double frustum_solid_angle(double hfov_rad, double vfov_rad);

bool in_frustum(const CameraPose& pose, const Direction& world_dir);

/// Bilinear cubemap lookup. Taps that fall off the selected face are fetched
/// from the neighbouring face that owns them, so there is no seam clamping.
void sample_cubemap(const CubemapFrame& c, const Direction& d, std::span<float> out);

/// Bilinear equirect lookup with longitude wrap and latitude clamp.
void sample_equirect(const EquirectGrid& e, const Direction& d, std::span<float> out);

/// Masked conditional cubemap of one perspective frame. Pixels inside the
/// frustum (boundary inclusive) are sampled bilinearly with mask 1, the rest
/// are 0 with mask 0.
CubemapFrame project_perspective_to_cubemap(const PerspectiveFrame& frame, const CameraPose& pose, int R);

EquirectGrid cubemap_to_equirect(const CubemapFrame& c, int W);
CubemapFrame equirect_to_cubemap(const EquirectGrid& e, int R);

/// Renders what a camera with the given pose would see of the cubemap.
PerspectiveFrame render_perspective(const CubemapFrame& c, const CameraPose& pose, int width, int height);

Rotation rotation_about(const Direction& axis, double angle_rad);

/// Geodesic angle on SO(3) between two rotations, radians.
double rotation_distance(const Rotation& a, const Rotation& b);

/// Piecewise slerp through the anchors at uniform arc-length spacing; FoV
/// follows linearly. Throws on antipodal consecutive anchors.
std::vector<CameraPose> sample_trajectory(std::span<const CameraPose> anchors, int N);

} // namespace cubegen
