// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/planner.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cubegen {

WindowPartition partition_windows(int frames, int window_length) {
    if (window_length < 1) throw std::invalid_argument("partition_windows: window length must be >= 1");
    if (frames < 1) throw std::invalid_argument("partition_windows: frame count must be >= 1");
    if (frames % window_length != 0)
        throw std::invalid_argument("partition_windows: frame count " + std::to_string(frames) +
                                    " is not divisible by window length " + std::to_string(window_length));
    WindowPartition wp;
    wp.frames = frames;
    wp.window_length = window_length;
    const int L = frames / window_length;
    wp.windows.reserve(static_cast<std::size_t>(L));
    for (int w = 0; w < L; ++w) wp.windows.push_back({w * window_length, (w + 1) * window_length});
    return wp;
}

double mask_coverage(const Mask& mask) {
    const auto data = mask.data();
    if (data.empty()) return 0.0;
    std::size_t observed = 0;
    for (std::uint8_t m : data) observed += m != 0;
    return static_cast<double>(observed) / static_cast<double>(data.size());
}

FrameCoverage frame_coverage(std::span<const CubemapFrame> video) {
    FrameCoverage fc(static_cast<int>(video.size()));
    for (std::size_t t = 0; t < video.size(); ++t)
        for (Face f : kAllFaces) fc.set(f, static_cast<int>(t), mask_coverage(video[t].mask(f)));
    return fc;
}

CoverageTable window_coverage(const FrameCoverage& fc, const WindowPartition& wp) {
    if (fc.frames() < wp.frames) throw std::invalid_argument("window_coverage: coverage shorter than partition");
    CoverageTable ct(wp.count());
    for (int w = 0; w < wp.count(); ++w) {
        const Window win = wp.windows[static_cast<std::size_t>(w)];
        for (Face f : kAllFaces) {
            double sum = 0.0;
            for (int t = win.start; t < win.end; ++t) sum += fc.at(f, t);
            ct.set(f, w, sum / (win.end - win.start));
        }
    }
    return ct;
}

GenerationPlan plan_order(const CoverageTable& ct, const WindowPartition& wp) {
    if (ct.windows() != wp.count()) throw std::invalid_argument("plan_order: coverage table does not match partition");
    GenerationPlan plan;
    plan.steps.reserve(kFaceCount * static_cast<std::size_t>(wp.count()));
    for (int w = 0; w < wp.count(); ++w) {
        std::array<Face, kFaceCount> order = kAllFaces;
        // Stable sort over canonical order gives the canonical tie-break.
        std::stable_sort(order.begin(), order.end(),
                         [&](Face a, Face b) { return ct.at(a, w) > ct.at(b, w); });
        const Window win = wp.windows[static_cast<std::size_t>(w)];
        for (Face f : order) plan.steps.push_back({f, w, win.start, win.end});
    }
    return plan;
}

nlohmann::json plan_to_json(const GenerationPlan& plan) {
    nlohmann::json steps = nlohmann::json::array();
    for (const PlanStep& s : plan.steps)
        steps.push_back({{"face", std::string(face_name(s.face))}, {"s", s.start}, {"e", s.end}});
    return {{"steps", steps}};
}

GenerationPlan plan_from_json(const nlohmann::json& j) {
    GenerationPlan plan;
    for (const auto& item : j.at("steps")) {
        const auto face = parse_face(item.at("face").get<std::string>());
        if (!face) throw std::invalid_argument("plan: unknown face " + item.at("face").dump());
        const int s = item.at("s").get<int>();
        const int e = item.at("e").get<int>();
        if (e <= s || s < 0) throw std::invalid_argument("plan: step range must satisfy 0 <= s < e");
        plan.steps.push_back({*face, s / (e - s), s, e});
    }
    return plan;
}

nlohmann::json coverage_table_to_json(const CoverageTable& ct, const WindowPartition& wp) {
    nlohmann::json windows = nlohmann::json::array();
    for (int w = 0; w < ct.windows(); ++w) {
        nlohmann::json cov = nlohmann::json::object();
        for (Face f : kAllFaces) cov[std::string(face_name(f))] = ct.at(f, w);
        const Window win = wp.windows.at(static_cast<std::size_t>(w));
        windows.push_back({{"window", w}, {"s", win.start}, {"e", win.end}, {"coverage", cov}});
    }
    return {{"window_length", wp.window_length}, {"windows", windows}};
}

nlohmann::json frame_coverage_to_json(const FrameCoverage& fc) {
    nlohmann::json faces = nlohmann::json::object();
    for (Face f : kAllFaces) {
        const auto s = fc.series(f);
        faces[std::string(face_name(f))] = std::vector<double>(s.begin(), s.end());
    }
    return {{"frames", fc.frames()}, {"coverage", faces}};
}

} // namespace cubegen
