// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cubegen/face.hpp"
#include "cubegen/image.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <span>
#include <vector>

namespace cubegen {

struct Window {
    int start; // inclusive frame index
    int end;   // exclusive frame index
    friend bool operator==(const Window&, const Window&) = default;
};

struct WindowPartition {
    int frames = 0;
    int window_length = 0;
    std::vector<Window> windows;

    int count() const { return static_cast<int>(windows.size()); }
};

/// Equal windows [(w-1)T, wT). N must be a multiple of T.
WindowPartition partition_windows(int frames, int window_length);

/// Per-face, per-frame fraction of observed mask pixels.
class FrameCoverage {
public:
    FrameCoverage() = default;
    explicit FrameCoverage(int frames) : frames_(frames) {
        for (auto& v : values_) v.assign(static_cast<std::size_t>(frames), 0.0);
    }

    int frames() const { return frames_; }
    double at(Face f, int t) const { return values_[index(f)].at(static_cast<std::size_t>(t)); }
    void set(Face f, int t, double v) { values_[index(f)].at(static_cast<std::size_t>(t)) = v; }
    std::span<const double> series(Face f) const { return values_[index(f)]; }

private:
    int frames_ = 0;
    std::array<std::vector<double>, kFaceCount> values_;
};

double mask_coverage(const Mask& mask);

FrameCoverage frame_coverage(std::span<const CubemapFrame> video);

/// Per-face, per-window temporal mean of frame coverage.
class CoverageTable {
public:
    CoverageTable() = default;
    explicit CoverageTable(int windows) : windows_(windows) {
        for (auto& v : values_) v.assign(static_cast<std::size_t>(windows), 0.0);
    }

    int windows() const { return windows_; }
    double at(Face f, int w) const { return values_[index(f)].at(static_cast<std::size_t>(w)); }
    void set(Face f, int w, double v) { values_[index(f)].at(static_cast<std::size_t>(w)) = v; }

private:
    int windows_ = 0;
    std::array<std::vector<double>, kFaceCount> values_;
};

CoverageTable window_coverage(const FrameCoverage& fc, const WindowPartition& wp);

struct PlanStep {
    Face face;
    int window; // zero-based
    int start;
    int end;
    friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct GenerationPlan {
    std::vector<PlanStep> steps;
    friend bool operator==(const GenerationPlan&, const GenerationPlan&) = default;
};

/// Window-major; inside a window faces go by non-increasing coverage with
/// canonical order breaking ties.
GenerationPlan plan_order(const CoverageTable& ct, const WindowPartition& wp);

nlohmann::json plan_to_json(const GenerationPlan& plan);
GenerationPlan plan_from_json(const nlohmann::json& j);
nlohmann::json coverage_table_to_json(const CoverageTable& ct, const WindowPartition& wp);
nlohmann::json frame_coverage_to_json(const FrameCoverage& fc);

} // namespace cubegen
