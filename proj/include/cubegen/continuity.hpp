// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cube topology for position remapping, edge padding and overlap blending.
//
// Flattened layout (horizontal cross, R = face size):
//
//            [ U ]                 U at (0,  R)
//      [ L ][ F ][ R ][ B ]        L (R, 0)  F (R, R)  R (R, 2R)  B (R, 3R)
//            [ D ]                 D at (2R, R)
//
// Only U/F, F/D, L/F, F/R and R/B are coordinate-continuous in this plane.
// The remaining seven edges still get padded and blended through the
// adjacency table, but their flattened coordinates jump.

#include "cubegen/face.hpp"
#include "cubegen/image.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace cubegen {

/// Dihedral transforms of a square raster. Rotations are clockwise as seen
/// in image coordinates (x right, y down).
enum class Transform : int {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    FlipHorizontal,
    FlipVertical,
    Transpose,
    AntiTranspose,
};

std::string_view transform_name(Transform t);

/// 2x2 integer matrix acting on (col, row) steps, row-major.
using TransformMatrix = std::array<int, 4>;
TransformMatrix transform_matrix(Transform t);
Transform transform_from_matrix(const TransformMatrix& m);
Transform compose(Transform outer, Transform inner);
Transform inverse(Transform t);

/// Applies t to a square image (content of a p x p or R x R block).
Image apply_transform(const Image& img, Transform t);

struct EdgeLink {
    Face neighbor;
    Edge neighbor_edge;
    /// True when the along-edge pixel order runs opposite on the neighbour.
    bool reversed;
    /// Transform that places the neighbour's image next to this face's edge.
    Transform transform;
};

struct GridOffset {
    int row;
    int col;
    friend bool operator==(const GridOffset&, const GridOffset&) = default;
};

struct GridPosition {
    int row;
    int col;
    friend bool operator==(const GridPosition&, const GridPosition&) = default;
};

class CubeLayout {
public:
    explicit CubeLayout(int resolution);

    int resolution() const { return resolution_; }
    GridOffset offset(Face f) const { return offsets_[index(f)]; }
    const EdgeLink& link(Face f, Edge e) const { return links_[index(f)][static_cast<std::size_t>(e)]; }

    /// Edge-adjacent faces in canonical order.
    std::vector<Face> neighbors(Face f) const;

    nlohmann::json to_json() const;

private:
    int resolution_;
    std::array<GridOffset, kFaceCount> offsets_;
    std::array<std::array<EdgeLink, 4>, kFaceCount> links_;
};

/// Edge-adjacent faces of f in canonical order (resolution independent).
std::vector<Face> adjacent_faces(Face f);

/// Adjacency derived from the face bases alone, by unfolding each neighbour
/// across the shared edge. Used to cross-check the static table.
EdgeLink derive_link_from_geometry(Face f, Edge e);

/// R x R grid of flattened-plane coordinates, row-major.
std::vector<GridPosition> face_position_grid(const CubeLayout& layout, Face f);

/// Pixel of face at given depth from an edge and along-edge index.
struct EdgePixel {
    int row;
    int col;
};
EdgePixel edge_pixel(int R, Edge e, int depth, int along);

/// p x R band of `neighbor_face` nearest the shared edge, re-oriented into
/// the padded face's frame: row = depth from the edge, column = index along
/// the padded face's edge.
Image extract_strip(const Image& neighbor_face, const EdgeLink& link, int pad);

struct PaddedFace {
    Face face;
    int pad = 0;
    Image core;
    std::array<Image, 4> strips; // indexed by Edge
    std::vector<GridPosition> positions; // (R + 2p)^2, row-major

    int padded_size() const { return core.width() + 2 * pad; }

    /// (R + 2p) square raster with strips around the core. Corner p x p
    /// blocks extend whichever strip is nearer.
    Image assemble() const;

    /// Splits an assembled raster back into core and strips.
    static PaddedFace split(Face f, const Image& assembled, int pad, std::vector<GridPosition> positions);
};

std::vector<GridPosition> padded_position_grid(const CubeLayout& layout, Face f, int pad);

PaddedFace pad_face(const CubemapFrame& cubemap, Face f, int pad, const CubeLayout& layout);

/// Writes the generated core into face f and ramps each strip into the
/// matching band of the neighbour: weight 1 - k/p at depth k. Neighbours whose
/// flag in `blend_into` is false keep their content.
CubemapFrame blend_overlaps(const PaddedFace& generated, const CubemapFrame& cubemap, int pad,
                            const CubeLayout& layout, const std::array<bool, kFaceCount>& blend_into);
CubemapFrame blend_overlaps(const PaddedFace& generated, const CubemapFrame& cubemap, int pad,
                            const CubeLayout& layout);

/// Mean absolute difference over edge-adjacent pixel pairs on all 12 edges.
double seam_metric(const CubemapFrame& cubemap, const CubeLayout& layout);

struct CubeCorner {
    std::array<Face, 3> faces; // cyclic order a -> b -> c -> a
    std::array<int, 3> world_sign; // vertex (+-1, +-1, +-1)
};

std::vector<CubeCorner> cube_corners();

/// Follows the edge correspondences a -> b -> c -> a starting from the
/// corner pixel of face a and reports whether the walk lands on the same
/// corner pixel it started from.
bool corner_walk_closes(const CubeLayout& layout, const CubeCorner& corner);

/// Product of the three edge transforms around the corner.
Transform corner_holonomy(const CubeLayout& layout, const CubeCorner& corner);

} // namespace cubegen
