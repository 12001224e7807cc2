// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cubegen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Frustum tests accept points within this relative slack so that samples
// sitting exactly on the FoV boundary count as observed.
constexpr double kFrustumSlack = 1e-12;

const std::array<FaceBasis, kFaceCount> kBases = {{
    {{0, 0, 1}, {1, 0, 0}, {0, -1, 0}},   // F
    {{1, 0, 0}, {0, 0, -1}, {0, -1, 0}},  // R
    {{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}}, // B
    {{-1, 0, 0}, {0, 0, 1}, {0, -1, 0}},  // L
    {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},    // U
    {{0, -1, 0}, {1, 0, 0}, {0, 0, -1}},  // D
}};

double corner_solid_angle(double a, double b) {
    return std::atan2(a * b, std::sqrt(a * a + b * b + 1.0));
}

int wrap(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

void bilinear_clamped(const Image& img, double px, double py, std::span<float> out) {
    const int w = img.width();
    const int h = img.height();
    px = std::clamp(px, 0.0, static_cast<double>(w - 1));
    py = std::clamp(py, 0.0, static_cast<double>(h - 1));
    const int x0 = std::min(static_cast<int>(px), w - 1);
    const int y0 = std::min(static_cast<int>(py), h - 1);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = px - x0;
    const double fy = py - y0;
    for (int c = 0; c < img.channels(); ++c) {
        const double top = (1 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c);
        const double bot = (1 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c);
        out[c] = static_cast<float>((1 - fy) * top + fy * bot);
    }
}

// Camera-frame direction for a world direction.
Direction to_camera(const CameraPose& pose, const Direction& world_dir) {
    return pose.rotation.transpose() * world_dir;
}

} // namespace

void CameraPose::validate() const {
    const Rotation should_be_identity = rotation.transpose() * rotation;
    if ((should_be_identity - Rotation::Identity()).cwiseAbs().maxCoeff() > 1e-7)
        throw std::invalid_argument("CameraPose: rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-7)
        throw std::invalid_argument("CameraPose: rotation determinant is not +1");
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0) || !(vfov_deg > 0.0 && vfov_deg < 180.0))
        throw std::invalid_argument("CameraPose: field of view must lie in (0, 180) degrees");
}

const FaceBasis& face_basis(Face f) { return kBases[index(f)]; }

Direction equirect_pixel_to_direction(int u, int v, int W) {
    if (W < 2 || W % 2 != 0) throw std::invalid_argument("equirect width must be even and >= 2");
    const int H = W / 2;
    if (u < 0 || u >= W || v < 0 || v >= H)
        throw std::invalid_argument("equirect pixel index out of range");
    const double lon = (u + 0.5) / W * 2.0 * kPi - kPi;
    const double lat = kPi / 2.0 - (v + 0.5) / H * kPi;
    return {std::cos(lat) * std::sin(lon), std::sin(lat), std::cos(lat) * std::cos(lon)};
}

EquirectPixel direction_to_equirect_pixel(const Direction& d, int W) {
    const int H = W / 2;
    const double lon = std::atan2(d.x(), d.z());
    const double lat = std::asin(std::clamp(d.y() / d.norm(), -1.0, 1.0));
    const int u = wrap(static_cast<int>(std::floor((lon + kPi) / (2.0 * kPi) * W)), W);
    const int v = std::clamp(static_cast<int>(std::floor((kPi / 2.0 - lat) / kPi * H)), 0, H - 1);
    return {u, v};
}

FaceCoords direction_to_face_coords(const Direction& d) {
    Face best = Face::F;
    double best_dot = -std::numeric_limits<double>::infinity();
    for (Face f : kAllFaces) {
        const double dp = d.dot(kBases[index(f)].normal);
        if (dp > best_dot) {
            best_dot = dp;
            best = f;
        }
    }
    const FaceBasis& b = kBases[index(best)];
    const double x = (d.dot(b.right) / best_dot + 1.0) * 0.5;
    const double y = (d.dot(b.down) / best_dot + 1.0) * 0.5;
    return {best, x, y};
}

Direction face_coords_to_direction(Face f, double x, double y) {
    const FaceBasis& b = kBases[index(f)];
    return (b.normal + (2.0 * x - 1.0) * b.right + (2.0 * y - 1.0) * b.down).normalized();
}

Direction face_pixel_direction(Face f, int R, int row, int col) {
    return face_coords_to_direction(f, (col + 0.5) / R, (row + 0.5) / R);
}

double face_pixel_solid_angle(int R, int row, int col) {
    const double a0 = -1.0 + 2.0 * col / R;
    const double a1 = -1.0 + 2.0 * (col + 1) / R;
    const double b0 = -1.0 + 2.0 * row / R;
    const double b1 = -1.0 + 2.0 * (row + 1) / R;
    return corner_solid_angle(a1, b1) - corner_solid_angle(a0, b1) - corner_solid_angle(a1, b0) +
           corner_solid_angle(a0, b0);
}

double frustum_solid_angle(double hfov_rad, double vfov_rad) {
    return 4.0 * std::asin(std::sin(hfov_rad / 2.0) * std::sin(vfov_rad / 2.0));
}

bool in_frustum(const CameraPose& pose, const Direction& world_dir) {
    const Direction c = to_camera(pose, world_dir);
    if (c.z() <= 0.0) return false;
    const double th = std::tan(pose.hfov_deg * kDeg / 2.0) * (1.0 + kFrustumSlack);
    const double tv = std::tan(pose.vfov_deg * kDeg / 2.0) * (1.0 + kFrustumSlack);
    return std::abs(c.x()) <= th * c.z() && std::abs(c.y()) <= tv * c.z();
}

void sample_cubemap(const CubemapFrame& c, const Direction& d, std::span<float> out) {
    const int R = c.resolution;
    const FaceCoords fc = direction_to_face_coords(d);
    const double px = fc.x * R - 0.5;
    const double py = fc.y * R - 0.5;
    const int j0 = static_cast<int>(std::floor(px));
    const int i0 = static_cast<int>(std::floor(py));
    const double fx = px - j0;
    const double fy = py - i0;

    const int C = c.channels;
    std::fill(out.begin(), out.begin() + C, 0.0f);
    const double weights[2][2] = {{(1 - fy) * (1 - fx), (1 - fy) * fx}, {fy * (1 - fx), fy * fx}};
    for (int di = 0; di < 2; ++di) {
        for (int dj = 0; dj < 2; ++dj) {
            const double w = weights[di][dj];
            if (w == 0.0) continue;
            const int i = i0 + di;
            const int j = j0 + dj;
            const float* px_ptr;
            if (i >= 0 && i < R && j >= 0 && j < R) {
                px_ptr = c.face(fc.face).pixel(i, j);
            } else {
                // Off-face tap: resolve through the extended face plane.
                const Direction td = face_coords_to_direction(fc.face, (j + 0.5) / R, (i + 0.5) / R);
                const FaceCoords tc = direction_to_face_coords(td);
                const int ti = std::clamp(static_cast<int>(std::floor(tc.y * R)), 0, R - 1);
                const int tj = std::clamp(static_cast<int>(std::floor(tc.x * R)), 0, R - 1);
                px_ptr = c.face(tc.face).pixel(ti, tj);
            }
            for (int ch = 0; ch < C; ++ch) out[ch] += static_cast<float>(w * px_ptr[ch]);
        }
    }
}

void sample_equirect(const EquirectGrid& e, const Direction& d, std::span<float> out) {
    const int W = e.width();
    const int H = e.height();
    const double lon = std::atan2(d.x(), d.z());
    const double lat = std::asin(std::clamp(d.y() / d.norm(), -1.0, 1.0));
    const double pu = (lon + kPi) / (2.0 * kPi) * W - 0.5;
    const double pv = std::clamp((kPi / 2.0 - lat) / kPi * H - 0.5, 0.0, static_cast<double>(H - 1));
    const int u0 = static_cast<int>(std::floor(pu));
    const int v0 = std::min(static_cast<int>(pv), H - 1);
    const int v1 = std::min(v0 + 1, H - 1);
    const double fu = pu - u0;
    const double fv = pv - v0;
    const int ua = wrap(u0, W);
    const int ub = wrap(u0 + 1, W);
    const Image& img = e.image;
    for (int c = 0; c < img.channels(); ++c) {
        const double top = (1 - fu) * img.at(v0, ua, c) + fu * img.at(v0, ub, c);
        const double bot = (1 - fu) * img.at(v1, ua, c) + fu * img.at(v1, ub, c);
        out[c] = static_cast<float>((1 - fv) * top + fv * bot);
    }
}

CubemapFrame project_perspective_to_cubemap(const PerspectiveFrame& frame, const CameraPose& pose, int R) {
    pose.validate();
    if (R < 4) throw std::invalid_argument("project_perspective_to_cubemap: face resolution must be >= 4");
    const int C = frame.channels();
    CubemapFrame out(R, C);
    const double tan_h = std::tan(pose.hfov_deg * kDeg / 2.0);
    const double tan_v = std::tan(pose.vfov_deg * kDeg / 2.0);
    const int w = frame.width();
    const int h = frame.height();
    for (Face f : kAllFaces) {
        Image& img = out.face(f);
        Mask& mask = out.mask(f);
        for (int i = 0; i < R; ++i) {
            for (int j = 0; j < R; ++j) {
                const Direction d = face_pixel_direction(f, R, i, j);
                if (!in_frustum(pose, d)) continue;
                const Direction cam = to_camera(pose, d);
                const double px = (cam.x() / cam.z() / tan_h + 1.0) * 0.5 * w - 0.5;
                const double py = (1.0 - cam.y() / cam.z() / tan_v) * 0.5 * h - 0.5;
                bilinear_clamped(frame, px, py, std::span<float>(img.pixel(i, j), C));
                mask.at(i, j) = 1;
            }
        }
    }
    return out;
}

EquirectGrid cubemap_to_equirect(const CubemapFrame& c, int W) {
    if (W < 4 || W % 4 != 0) throw std::invalid_argument("cubemap_to_equirect: width must be a positive multiple of 4");
    EquirectGrid e(W, c.channels);
    for (int v = 0; v < e.height(); ++v)
        for (int u = 0; u < W; ++u)
            sample_cubemap(c, equirect_pixel_to_direction(u, v, W),
                           std::span<float>(e.image.pixel(v, u), c.channels));
    return e;
}

CubemapFrame equirect_to_cubemap(const EquirectGrid& e, int R) {
    if (R < 1) throw std::invalid_argument("equirect_to_cubemap: face resolution must be >= 1");
    const int C = e.image.channels();
    CubemapFrame out(R, C, 0.0f, 1);
    for (Face f : kAllFaces)
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < R; ++j)
                sample_equirect(e, face_pixel_direction(f, R, i, j),
                                std::span<float>(out.face(f).pixel(i, j), C));
    return out;
}

PerspectiveFrame render_perspective(const CubemapFrame& c, const CameraPose& pose, int width, int height) {
    pose.validate();
    PerspectiveFrame out(width, height, c.channels);
    const double tan_h = std::tan(pose.hfov_deg * kDeg / 2.0);
    const double tan_v = std::tan(pose.vfov_deg * kDeg / 2.0);
    for (int r = 0; r < height; ++r) {
        for (int col = 0; col < width; ++col) {
            const Direction cam(((col + 0.5) / width * 2.0 - 1.0) * tan_h, (1.0 - (r + 0.5) / height * 2.0) * tan_v, 1.0);
            const Direction world = pose.rotation * cam.normalized();
            sample_cubemap(c, world, std::span<float>(out.pixel(r, col), c.channels));
        }
    }
    return out;
}

Rotation rotation_about(const Direction& axis, double angle_rad) {
    return Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
}

double rotation_distance(const Rotation& a, const Rotation& b) {
    return Eigen::Quaterniond(a).angularDistance(Eigen::Quaterniond(b));
}

std::vector<CameraPose> sample_trajectory(std::span<const CameraPose> anchors, int N) {
    if (anchors.size() < 2) throw std::invalid_argument("sample_trajectory: need at least 2 anchors");
    if (N < 2) throw std::invalid_argument("sample_trajectory: need at least 2 frames");
    for (const CameraPose& a : anchors) a.validate();

    const std::size_t segments = anchors.size() - 1;
    std::vector<Eigen::Quaterniond> quats;
    quats.reserve(anchors.size());
    for (const CameraPose& a : anchors) quats.emplace_back(a.rotation);

    std::vector<double> length(segments);
    double total = 0.0;
    for (std::size_t s = 0; s < segments; ++s) {
        length[s] = quats[s].angularDistance(quats[s + 1]);
        if (length[s] > kPi - 1e-9)
            throw std::invalid_argument("sample_trajectory: anchors " + std::to_string(s) + " and " +
                                        std::to_string(s + 1) + " are antipodal");
        total += length[s];
    }
    // Pure FoV changes with no rotation fall back to index-uniform segments.
    if (total < 1e-12) {
        std::fill(length.begin(), length.end(), 1.0);
        total = static_cast<double>(segments);
    }

    std::vector<CameraPose> out;
    out.reserve(N);
    std::size_t seg = 0;
    double seg_start = 0.0;
    for (int k = 0; k < N; ++k) {
        if (k == 0) {
            out.push_back(anchors.front());
            continue;
        }
        if (k == N - 1) {
            out.push_back(anchors.back());
            continue;
        }
        const double s = total * k / (N - 1);
        while (seg + 1 < segments && s > seg_start + length[seg]) {
            seg_start += length[seg];
            ++seg;
        }
        const double t = length[seg] > 0.0 ? std::clamp((s - seg_start) / length[seg], 0.0, 1.0) : 0.0;
        CameraPose p;
        p.rotation = quats[seg].slerp(t, quats[seg + 1]).toRotationMatrix();
        p.hfov_deg = (1 - t) * anchors[seg].hfov_deg + t * anchors[seg + 1].hfov_deg;
        p.vfov_deg = (1 - t) * anchors[seg].vfov_deg + t * anchors[seg + 1].vfov_deg;
        out.push_back(p);
    }
    return out;
}

} // namespace cubegen
