// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/context.hpp"

#include "cubegen/continuity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cubegen {

FaceClip clip_from_video(const CubemapVideo& video, Face f, int start, int end, ResidencyMeter* meter) {
    if (start < 0 || end > static_cast<int>(video.size()) || start >= end)
        throw std::logic_error("clip_from_video: frames [" + std::to_string(start) + ", " + std::to_string(end) +
                               ") not available in a video of " + std::to_string(video.size()) + " frames");
    FaceClip clip;
    clip.face = f;
    clip.start = start;
    clip.frames.reserve(static_cast<std::size_t>(end - start));
    clip.masks.reserve(static_cast<std::size_t>(end - start));
    for (int t = start; t < end; ++t) {
        clip.frames.push_back(video[static_cast<std::size_t>(t)].face(f));
        clip.masks.push_back(video[static_cast<std::size_t>(t)].mask(f));
    }
    clip.token = ResidencyToken(meter);
    return clip;
}

ContextPool::ContextPool(int capacity) : capacity_(capacity), last_window_(0) {
    if (capacity < 0) throw std::invalid_argument("ContextPool: capacity must be >= 0");
}

void ContextPool::push(int window, WindowClips faces) {
    if (any_pushed_ && window <= last_window_)
        throw std::invalid_argument("ContextPool::push: window " + std::to_string(window) +
                                    " does not follow window " + std::to_string(last_window_));
    any_pushed_ = true;
    last_window_ = window;
    if (capacity_ == 0) return;
    while (static_cast<int>(entries_.size()) >= capacity_) entries_.pop_front();
    entries_.push_back({window, std::move(faces)});
}

std::vector<int> ContextPool::windows() const {
    std::vector<int> out;
    for (const PoolEntry& e : entries_) out.push_back(e.window);
    return out;
}

double short_horizon_coverage(const FrameCoverage& fc, Face g, int tau, int length) {
    if (length < 1) throw std::invalid_argument("short_horizon_coverage: length must be >= 1");
    if (tau < 0 || tau + length > fc.frames())
        throw std::invalid_argument("short_horizon_coverage: horizon [" + std::to_string(tau) + ", " +
                                    std::to_string(tau + length) + ") exceeds " + std::to_string(fc.frames()) +
                                    " frames");
    double sum = 0.0;
    for (int t = tau; t < tau + length; ++t) sum += fc.at(g, t);
    return sum / length;
}

std::vector<FragmentSpec> select_future_fragments(const FrameCoverage& fc, Face current, int window_end,
                                                  int fragment_length, double threshold, int frames) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("select_future_fragments: threshold must lie in (0, 1]");
    if (fragment_length < 1) throw std::invalid_argument("select_future_fragments: fragment length must be >= 1");
    if (frames > fc.frames()) throw std::invalid_argument("select_future_fragments: coverage shorter than frame count");

    std::vector<Face> faces{current};
    for (Face g : adjacent_faces(current)) faces.push_back(g);

    std::vector<FragmentSpec> out;
    for (Face g : faces) {
        for (int tau = std::max(window_end, 0); tau + fragment_length <= frames; ++tau) {
            if (short_horizon_coverage(fc, g, tau, fragment_length) >= threshold) {
                out.push_back({g, tau, fragment_length});
                break;
            }
        }
    }
    return out;
}

std::string_view source_kind_name(SourceKind k) {
    switch (k) {
    case SourceKind::History: return "hist";
    case SourceKind::CurrentGenerated: return "curr-gen";
    case SourceKind::CurrentConditional: return "curr-cond";
    case SourceKind::Future: return "fut";
    }
    return "?";
}

std::vector<Provenance> ContextBundle::provenance() const {
    std::vector<Provenance> out;
    for (const auto* group : {&hist, &curr, &fut})
        for (const ContextSource& s : *group) out.push_back(s.provenance);
    return out;
}

nlohmann::json ContextBundle::provenance_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const Provenance& p : provenance())
        out.push_back({{"kind", std::string(source_kind_name(p.kind))},
                       {"face", std::string(face_name(p.face))},
                       {"s", p.start},
                       {"e", p.end}});
    return out;
}

ContextBundle assemble_context(const ContextPool& pool, const WindowProgress& progress,
                               std::span<const FragmentSpec> fragments, const CubemapVideo& cond,
                               ResidencyMeter* meter) {
    ContextBundle b;
    for (const PoolEntry& entry : pool.entries()) {
        for (Face f : kAllFaces) {
            const ClipRef& clip = entry.faces[index(f)];
            if (!clip) throw std::logic_error("assemble_context: pool entry is missing a face");
            b.hist.push_back({{SourceKind::History, f, clip->start, clip->end()}, clip});
        }
    }

    std::array<bool, kFaceCount> done{};
    for (Face f : progress.generated) {
        const ClipRef& clip = progress.canvas[index(f)];
        if (!clip) throw std::logic_error("assemble_context: generated face has no content");
        done[index(f)] = true;
        b.curr.push_back({{SourceKind::CurrentGenerated, f, clip->start, clip->end()}, clip});
    }
    if (done[index(progress.current)]) throw std::logic_error("assemble_context: current face was already generated");
    std::vector<Face> pending{progress.current};
    for (Face f : kAllFaces)
        if (!done[index(f)] && f != progress.current) pending.push_back(f);
    for (Face f : pending) {
        const ClipRef& clip = progress.canvas[index(f)];
        if (!clip) throw std::logic_error("assemble_context: missing conditional content for face " + std::string(face_name(f)));
        b.curr.push_back({{SourceKind::CurrentConditional, f, clip->start, clip->end()}, clip});
    }

    for (const FragmentSpec& frag : fragments) {
        auto clip = std::make_shared<const FaceClip>(clip_from_video(cond, frag.face, frag.start, frag.start + frag.length, meter));
        b.fut.push_back({{SourceKind::Future, frag.face, frag.start, frag.start + frag.length}, std::move(clip)});
    }
    return b;
}

} // namespace cubegen
