// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cubegen {

/// Cube faces in canonical order. The enumerator value doubles as the
/// tie-break rank wherever faces must be ordered deterministically.
enum class Face : int { F = 0, R = 1, B = 2, L = 3, U = 4, D = 5 };

inline constexpr std::size_t kFaceCount = 6;

inline constexpr std::array<Face, kFaceCount> kAllFaces = {Face::F, Face::R, Face::B,
                                                           Face::L, Face::U, Face::D};

constexpr std::size_t index(Face f) { return static_cast<std::size_t>(f); }

constexpr std::string_view face_name(Face f) {
    constexpr std::array<std::string_view, kFaceCount> names = {"F", "R", "B", "L", "U", "D"};
    return names[index(f)];
}

inline std::optional<Face> parse_face(std::string_view s) {
    for (Face f : kAllFaces)
        if (face_name(f) == s) return f;
    return std::nullopt;
}

/// Face edges, named in the face's own image orientation.
enum class Edge : int { Top = 0, Bottom = 1, Left = 2, Right = 3 };

inline constexpr std::array<Edge, 4> kAllEdges = {Edge::Top, Edge::Bottom, Edge::Left, Edge::Right};

constexpr std::string_view edge_name(Edge e) {
    constexpr std::array<std::string_view, 4> names = {"top", "bottom", "left", "right"};
    return names[static_cast<std::size_t>(e)];
}

} // namespace cubegen
