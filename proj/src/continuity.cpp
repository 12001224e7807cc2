// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/continuity.hpp"

#include "cubegen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cubegen {

namespace {

constexpr std::array<Transform, 8> kAllTransforms = {
    Transform::Identity,       Transform::Rotate90,     Transform::Rotate180, Transform::Rotate270,
    Transform::FlipHorizontal, Transform::FlipVertical, Transform::Transpose, Transform::AntiTranspose,
};

using Vec2 = std::array<int, 2>; // (col, row)

Vec2 apply(const TransformMatrix& m, Vec2 v) { return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]}; }

// Outward normal of an edge in image coordinates.
Vec2 outward(Edge e) {
    switch (e) {
    case Edge::Top: return {0, -1};
    case Edge::Bottom: return {0, 1};
    case Edge::Left: return {-1, 0};
    case Edge::Right: return {1, 0};
    }
    return {0, 0};
}

Vec2 along(Edge e) { return (e == Edge::Top || e == Edge::Bottom) ? Vec2{1, 0} : Vec2{0, 1}; }

// The unique dihedral element that turns the neighbour so its edge faces back
// across the shared seam with the stated along-edge orientation.
Transform placement_transform(Edge e, Edge neighbor_edge, bool reversed) {
    const Vec2 out_f = outward(e);
    const Vec2 want_out = {-out_f[0], -out_f[1]};
    const Vec2 al = along(e);
    const Vec2 want_along = reversed ? Vec2{-al[0], -al[1]} : al;
    for (Transform t : kAllTransforms) {
        const TransformMatrix m = transform_matrix(t);
        if (apply(m, outward(neighbor_edge)) == want_out && apply(m, along(neighbor_edge)) == want_along) return t;
    }
    throw std::logic_error("placement_transform: inconsistent edge pairing");
}

struct LinkSpec {
    Face neighbor;
    Edge edge;
    bool reversed;
};

// Edge pairings for the face bases in geometry.hpp; order Top, Bottom, Left, Right.
const std::array<std::array<LinkSpec, 4>, kFaceCount> kLinkTable = {{
    /* F */ {{{Face::U, Edge::Bottom, false}, {Face::D, Edge::Top, false}, {Face::L, Edge::Right, false}, {Face::R, Edge::Left, false}}},
    /* R */ {{{Face::U, Edge::Right, true}, {Face::D, Edge::Right, false}, {Face::F, Edge::Right, false}, {Face::B, Edge::Left, false}}},
    /* B */ {{{Face::U, Edge::Top, true}, {Face::D, Edge::Bottom, true}, {Face::R, Edge::Right, false}, {Face::L, Edge::Left, false}}},
    /* L */ {{{Face::U, Edge::Left, false}, {Face::D, Edge::Left, true}, {Face::B, Edge::Right, false}, {Face::F, Edge::Left, false}}},
    /* U */ {{{Face::B, Edge::Top, true}, {Face::F, Edge::Top, false}, {Face::L, Edge::Top, false}, {Face::R, Edge::Top, true}}},
    /* D */ {{{Face::F, Edge::Bottom, false}, {Face::B, Edge::Bottom, true}, {Face::L, Edge::Bottom, true}, {Face::R, Edge::Bottom, false}}},
}};

Direction outward_3d(Face f, Edge e) {
    const FaceBasis& b = face_basis(f);
    switch (e) {
    case Edge::Top: return -b.down;
    case Edge::Bottom: return b.down;
    case Edge::Left: return -b.right;
    case Edge::Right: return b.right;
    }
    return Direction::Zero();
}

Direction along_3d(Face f, Edge e) {
    const FaceBasis& b = face_basis(f);
    return (e == Edge::Top || e == Edge::Bottom) ? b.right : b.down;
}

int on_edge_along(int R, Edge e, int row, int col) {
    (void)R;
    return (e == Edge::Top || e == Edge::Bottom) ? col : row;
}

bool on_edge(int R, Edge e, int row, int col) {
    switch (e) {
    case Edge::Top: return row == 0;
    case Edge::Bottom: return row == R - 1;
    case Edge::Left: return col == 0;
    case Edge::Right: return col == R - 1;
    }
    return false;
}

// Padded-raster location of strip pixel (depth k, along a) for edge e.
GridPosition strip_slot(int R, int p, Edge e, int k, int a) {
    switch (e) {
    case Edge::Top: return {p - 1 - k, p + a};
    case Edge::Bottom: return {p + R + k, p + a};
    case Edge::Left: return {p + a, p - 1 - k};
    case Edge::Right: return {p + a, p + R + k};
    }
    return {0, 0};
}

} // namespace

std::string_view transform_name(Transform t) {
    switch (t) {
    case Transform::Identity: return "identity";
    case Transform::Rotate90: return "rotate90";
    case Transform::Rotate180: return "rotate180";
    case Transform::Rotate270: return "rotate270";
    case Transform::FlipHorizontal: return "flip-horizontal";
    case Transform::FlipVertical: return "flip-vertical";
    case Transform::Transpose: return "transpose";
    case Transform::AntiTranspose: return "anti-transpose";
    }
    return "?";
}

TransformMatrix transform_matrix(Transform t) {
    switch (t) {
    case Transform::Identity: return {1, 0, 0, 1};
    case Transform::Rotate90: return {0, -1, 1, 0};
    case Transform::Rotate180: return {-1, 0, 0, -1};
    case Transform::Rotate270: return {0, 1, -1, 0};
    case Transform::FlipHorizontal: return {-1, 0, 0, 1};
    case Transform::FlipVertical: return {1, 0, 0, -1};
    case Transform::Transpose: return {0, 1, 1, 0};
    case Transform::AntiTranspose: return {0, -1, -1, 0};
    }
    return {1, 0, 0, 1};
}

Transform transform_from_matrix(const TransformMatrix& m) {
    for (Transform t : kAllTransforms)
        if (transform_matrix(t) == m) return t;
    throw std::invalid_argument("transform_from_matrix: not a dihedral element");
}

Transform compose(Transform outer, Transform inner) {
    const TransformMatrix a = transform_matrix(outer);
    const TransformMatrix b = transform_matrix(inner);
    return transform_from_matrix({a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                                  a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]});
}

Transform inverse(Transform t) {
    for (Transform u : kAllTransforms)
        if (compose(t, u) == Transform::Identity) return u;
    throw std::logic_error("inverse: no inverse found");
}

Image apply_transform(const Image& img, Transform t) {
    if (img.width() != img.height()) throw std::invalid_argument("apply_transform: image must be square");
    const int n = img.width();
    const TransformMatrix inv = transform_matrix(inverse(t));
    Image out(n, n, img.channels());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // Work in doubled coordinates centred on the raster.
            const Vec2 q = {2 * c - (n - 1), 2 * r - (n - 1)};
            const Vec2 s = apply(inv, q);
            const int sc = (s[0] + (n - 1)) / 2;
            const int sr = (s[1] + (n - 1)) / 2;
            std::copy_n(img.pixel(sr, sc), img.channels(), out.pixel(r, c));
        }
    }
    return out;
}

CubeLayout::CubeLayout(int resolution) : resolution_(resolution) {
    if (resolution < 1) throw std::invalid_argument("CubeLayout: resolution must be >= 1");
    const int R = resolution;
    offsets_[index(Face::U)] = {0, R};
    offsets_[index(Face::F)] = {R, R};
    offsets_[index(Face::D)] = {2 * R, R};
    offsets_[index(Face::L)] = {R, 0};
    offsets_[index(Face::R)] = {R, 2 * R};
    offsets_[index(Face::B)] = {R, 3 * R};
    for (Face f : kAllFaces) {
        for (Edge e : kAllEdges) {
            const LinkSpec& s = kLinkTable[index(f)][static_cast<std::size_t>(e)];
            links_[index(f)][static_cast<std::size_t>(e)] = {s.neighbor, s.edge, s.reversed,
                                                             placement_transform(e, s.edge, s.reversed)};
        }
    }
}

std::vector<Face> CubeLayout::neighbors(Face f) const { return adjacent_faces(f); }

nlohmann::json CubeLayout::to_json() const {
    nlohmann::json faces = nlohmann::json::object();
    for (Face f : kAllFaces) {
        nlohmann::json edges = nlohmann::json::object();
        for (Edge e : kAllEdges) {
            const EdgeLink& l = link(f, e);
            edges[std::string(edge_name(e))] = {{"neighbor", std::string(face_name(l.neighbor))},
                                                {"neighbor_edge", std::string(edge_name(l.neighbor_edge))},
                                                {"reversed", l.reversed},
                                                {"transform", std::string(transform_name(l.transform))}};
        }
        faces[std::string(face_name(f))] = {{"row_offset", offset(f).row}, {"col_offset", offset(f).col}, {"edges", edges}};
    }
    return {{"resolution", resolution_}, {"faces", faces}};
}

std::vector<Face> adjacent_faces(Face f) {
    std::vector<Face> out;
    for (const LinkSpec& s : kLinkTable[index(f)]) out.push_back(s.neighbor);
    std::sort(out.begin(), out.end(), [](Face a, Face b) { return index(a) < index(b); });
    return out;
}

EdgeLink derive_link_from_geometry(Face f, Edge e) {
    const Direction out = outward_3d(f, e);
    const Direction n_f = face_basis(f).normal;
    Face g = f;
    for (Face c : kAllFaces)
        if ((face_basis(c).normal - out).norm() < 1e-12) g = c;
    Edge ge = Edge::Top;
    for (Edge c : kAllEdges)
        if ((outward_3d(g, c) - n_f).norm() < 1e-12) ge = c;
    const bool reversed = along_3d(f, e).dot(along_3d(g, ge)) < 0.0;

    // Unfold g about the shared edge into f's plane: -n_f -> out, out -> n_f.
    const Direction axis = along_3d(f, e);
    auto unfold = [&](const Direction& v) -> Direction {
        return v.dot(axis) * axis + v.dot(-n_f) * out + v.dot(out) * n_f;
    };
    const FaceBasis& bf = face_basis(f);
    const FaceBasis& bg = face_basis(g);
    const Direction gr = unfold(bg.right);
    const Direction gd = unfold(bg.down);
    const TransformMatrix m = {static_cast<int>(std::lround(gr.dot(bf.right))), static_cast<int>(std::lround(gd.dot(bf.right))),
                               static_cast<int>(std::lround(gr.dot(bf.down))), static_cast<int>(std::lround(gd.dot(bf.down)))};
    return {g, ge, reversed, transform_from_matrix(m)};
}

std::vector<GridPosition> face_position_grid(const CubeLayout& layout, Face f) {
    const int R = layout.resolution();
    const GridOffset o = layout.offset(f);
    std::vector<GridPosition> out;
    out.reserve(static_cast<std::size_t>(R) * R);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) out.push_back({o.row + i, o.col + j});
    return out;
}

std::vector<GridPosition> padded_position_grid(const CubeLayout& layout, Face f, int pad) {
    const int S = layout.resolution() + 2 * pad;
    const GridOffset o = layout.offset(f);
    std::vector<GridPosition> out;
    out.reserve(static_cast<std::size_t>(S) * S);
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j) out.push_back({o.row + i - pad, o.col + j - pad});
    return out;
}

EdgePixel edge_pixel(int R, Edge e, int depth, int along_index) {
    switch (e) {
    case Edge::Top: return {depth, along_index};
    case Edge::Bottom: return {R - 1 - depth, along_index};
    case Edge::Left: return {along_index, depth};
    case Edge::Right: return {along_index, R - 1 - depth};
    }
    return {0, 0};
}

Image extract_strip(const Image& neighbor_face, const EdgeLink& link, int pad) {
    const int R = neighbor_face.width();
    const int C = neighbor_face.channels();
    Image strip(R, pad, C);
    for (int k = 0; k < pad; ++k) {
        for (int a = 0; a < R; ++a) {
            const int a2 = link.reversed ? R - 1 - a : a;
            const EdgePixel px = edge_pixel(R, link.neighbor_edge, k, a2);
            std::copy_n(neighbor_face.pixel(px.row, px.col), C, strip.pixel(k, a));
        }
    }
    return strip;
}

Image PaddedFace::assemble() const {
    const int R = core.width();
    const int p = pad;
    const int S = R + 2 * p;
    const int C = core.channels();
    Image out(S, S, C);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) std::copy_n(core.pixel(i, j), C, out.pixel(p + i, p + j));
    for (Edge e : kAllEdges) {
        const Image& s = strips[static_cast<std::size_t>(e)];
        for (int k = 0; k < p; ++k)
            for (int a = 0; a < R; ++a) {
                const GridPosition slot = strip_slot(R, p, e, k, a);
                std::copy_n(s.pixel(k, a), C, out.pixel(slot.row, slot.col));
            }
    }
    // Corner blocks.
    for (Edge ev : {Edge::Top, Edge::Bottom}) {
        for (Edge eh : {Edge::Left, Edge::Right}) {
            for (int dv = 0; dv < p; ++dv) {
                for (int dh = 0; dh < p; ++dh) {
                    const int r = ev == Edge::Top ? p - 1 - dv : p + R + dv;
                    const int c = eh == Edge::Left ? p - 1 - dh : p + R + dh;
                    const float* src;
                    if (dh <= dv)
                        src = strips[static_cast<std::size_t>(ev)].pixel(dv, eh == Edge::Left ? 0 : R - 1);
                    else
                        src = strips[static_cast<std::size_t>(eh)].pixel(dh, ev == Edge::Top ? 0 : R - 1);
                    std::copy_n(src, C, out.pixel(r, c));
                }
            }
        }
    }
    return out;
}

PaddedFace PaddedFace::split(Face f, const Image& assembled, int pad, std::vector<GridPosition> positions) {
    const int S = assembled.width();
    const int R = S - 2 * pad;
    if (assembled.height() != S || R < 1) throw std::invalid_argument("PaddedFace::split: bad raster size");
    const int C = assembled.channels();
    PaddedFace out;
    out.face = f;
    out.pad = pad;
    out.core = Image(R, R, C);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) std::copy_n(assembled.pixel(pad + i, pad + j), C, out.core.pixel(i, j));
    if (pad > 0) {
        for (Edge e : kAllEdges) {
            Image s(R, pad, C);
            for (int k = 0; k < pad; ++k)
                for (int a = 0; a < R; ++a) {
                    const GridPosition slot = strip_slot(R, pad, e, k, a);
                    std::copy_n(assembled.pixel(slot.row, slot.col), C, s.pixel(k, a));
                }
            out.strips[static_cast<std::size_t>(e)] = std::move(s);
        }
    }
    out.positions = std::move(positions);
    return out;
}

PaddedFace pad_face(const CubemapFrame& cubemap, Face f, int pad, const CubeLayout& layout) {
    const int R = cubemap.resolution;
    if (layout.resolution() != R) throw std::invalid_argument("pad_face: layout resolution mismatch");
    if (pad < 1 || pad > R / 2) throw std::invalid_argument("pad_face: pad width must lie in [1, R/2]");
    PaddedFace out;
    out.face = f;
    out.pad = pad;
    out.core = cubemap.face(f);
    for (Edge e : kAllEdges) {
        const EdgeLink& l = layout.link(f, e);
        out.strips[static_cast<std::size_t>(e)] = extract_strip(cubemap.face(l.neighbor), l, pad);
    }
    out.positions = padded_position_grid(layout, f, pad);
    return out;
}

CubemapFrame blend_overlaps(const PaddedFace& generated, const CubemapFrame& cubemap, int pad,
                            const CubeLayout& layout, const std::array<bool, kFaceCount>& blend_into) {
    const int R = cubemap.resolution;
    const int C = cubemap.channels;
    if (!generated.core.same_shape(cubemap.face(generated.face)))
        throw std::invalid_argument("blend_overlaps: core shape does not match the cubemap face");
    if (pad != generated.pad) throw std::invalid_argument("blend_overlaps: pad width mismatch");
    CubemapFrame out = cubemap;
    out.face(generated.face) = generated.core;
    for (Edge e : kAllEdges) {
        const EdgeLink& l = layout.link(generated.face, e);
        if (!blend_into[index(l.neighbor)]) continue;
        const Image& strip = generated.strips[static_cast<std::size_t>(e)];
        Image& target = out.face(l.neighbor);
        for (int k = 0; k < pad; ++k) {
            const float w = 1.0f - static_cast<float>(k) / static_cast<float>(pad);
            for (int a = 0; a < R; ++a) {
                const int a2 = l.reversed ? R - 1 - a : a;
                const EdgePixel px = edge_pixel(R, l.neighbor_edge, k, a2);
                float* dst = target.pixel(px.row, px.col);
                const float* src = strip.pixel(k, a);
                // dst + w (src - dst): exact when src == dst, and k = 0 copies.
                if (k == 0) std::copy_n(src, C, dst);
                else
                    for (int c = 0; c < C; ++c) dst[c] += w * (src[c] - dst[c]);
            }
        }
    }
    return out;
}

CubemapFrame blend_overlaps(const PaddedFace& generated, const CubemapFrame& cubemap, int pad,
                            const CubeLayout& layout) {
    std::array<bool, kFaceCount> all;
    all.fill(true);
    return blend_overlaps(generated, cubemap, pad, layout, all);
}

double seam_metric(const CubemapFrame& cubemap, const CubeLayout& layout) {
    const int R = cubemap.resolution;
    const int C = cubemap.channels;
    double sum = 0.0;
    std::size_t count = 0;
    for (Face f : kAllFaces) {
        for (Edge e : kAllEdges) {
            const EdgeLink& l = layout.link(f, e);
            // Visit each of the 12 edges once.
            if (std::pair(index(f), static_cast<int>(e)) > std::pair(index(l.neighbor), static_cast<int>(l.neighbor_edge)))
                continue;
            for (int a = 0; a < R; ++a) {
                const EdgePixel p0 = edge_pixel(R, e, 0, a);
                const EdgePixel p1 = edge_pixel(R, l.neighbor_edge, 0, l.reversed ? R - 1 - a : a);
                const float* x = cubemap.face(f).pixel(p0.row, p0.col);
                const float* y = cubemap.face(l.neighbor).pixel(p1.row, p1.col);
                for (int c = 0; c < C; ++c) sum += std::abs(static_cast<double>(x[c]) - y[c]);
                count += static_cast<std::size_t>(C);
            }
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

std::vector<CubeCorner> cube_corners() {
    std::vector<CubeCorner> out;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) {
                const Direction v(sx, sy, sz);
                CubeCorner c{};
                c.world_sign = {sx, sy, sz};
                std::size_t n = 0;
                for (Face f : kAllFaces)
                    if (face_basis(f).normal.dot(v) > 0.0) c.faces[n++] = f;
                out.push_back(c);
            }
    return out;
}

bool corner_walk_closes(const CubeLayout& layout, const CubeCorner& corner) {
    const int R = layout.resolution();
    const Direction v(corner.world_sign[0], corner.world_sign[1], corner.world_sign[2]);
    const FaceBasis& b0 = face_basis(corner.faces[0]);
    const int start_row = v.dot(b0.down) > 0 ? R - 1 : 0;
    const int start_col = v.dot(b0.right) > 0 ? R - 1 : 0;

    Face cur = corner.faces[0];
    int row = start_row;
    int col = start_col;
    for (int step = 0; step < 3; ++step) {
        const Face next = corner.faces[static_cast<std::size_t>((step + 1) % 3)];
        bool moved = false;
        for (Edge e : kAllEdges) {
            const EdgeLink& l = layout.link(cur, e);
            if (l.neighbor != next) continue;
            if (!on_edge(R, e, row, col)) return false;
            const int a = on_edge_along(R, e, row, col);
            const EdgePixel np = edge_pixel(R, l.neighbor_edge, 0, l.reversed ? R - 1 - a : a);
            row = np.row;
            col = np.col;
            cur = next;
            moved = true;
            break;
        }
        if (!moved) return false;
    }
    return cur == corner.faces[0] && row == start_row && col == start_col;
}

Transform corner_holonomy(const CubeLayout& layout, const CubeCorner& corner) {
    Transform acc = Transform::Identity;
    for (std::size_t step = 0; step < 3; ++step) {
        const Face a = corner.faces[step];
        const Face b = corner.faces[(step + 1) % 3];
        for (Edge e : kAllEdges)
            if (layout.link(a, e).neighbor == b) acc = compose(acc, layout.link(a, e).transform);
    }
    return acc;
}

} // namespace cubegen
