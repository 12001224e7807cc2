// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cubegen/face.hpp"
#include "cubegen/image.hpp"
#include "cubegen/planner.hpp"

#include <nlohmann/json.hpp>

#include <deque>
#include <memory>
#include <span>
#include <vector>

namespace cubegen {

/// Counts live face-window clips. Clips created with a meter report into it
/// for their whole lifetime, copies included.
class ResidencyMeter {
public:
    void acquire() {
        ++live_;
        if (live_ > peak_) peak_ = live_;
    }
    void release() { --live_; }
    int live() const { return live_; }
    int peak() const { return peak_; }
    void reset_peak() { peak_ = live_; }

private:
    int live_ = 0;
    int peak_ = 0;
};

class ResidencyToken {
public:
    ResidencyToken() = default;
    explicit ResidencyToken(ResidencyMeter* meter) : meter_(meter) {
        if (meter_) meter_->acquire();
    }
    ResidencyToken(const ResidencyToken& o) : ResidencyToken(o.meter_) {}
    ResidencyToken(ResidencyToken&& o) noexcept : meter_(o.meter_) { o.meter_ = nullptr; }
    ResidencyToken& operator=(ResidencyToken o) noexcept {
        std::swap(meter_, o.meter_);
        return *this;
    }
    ~ResidencyToken() {
        if (meter_) meter_->release();
    }

private:
    ResidencyMeter* meter_ = nullptr;
};

/// Consecutive frames [start, start + frames.size()) of one face.
struct FaceClip {
    Face face = Face::F;
    int start = 0;
    std::vector<Image> frames;
    std::vector<Mask> masks;
    ResidencyToken token;

    int end() const { return start + static_cast<int>(frames.size()); }
};

using ClipRef = std::shared_ptr<const FaceClip>;
using WindowClips = std::array<ClipRef, kFaceCount>;

/// Copies face f over frames [start, end) out of a cubemap video.
FaceClip clip_from_video(const CubemapVideo& video, Face f, int start, int end, ResidencyMeter* meter = nullptr);

struct PoolEntry {
    int window;
    WindowClips faces;
};

/// Bounded FIFO of completed windows.
class ContextPool {
public:
    explicit ContextPool(int capacity);

    /// Appends a window; evicts the oldest entry first when full, so the
    /// pool never holds more than `capacity` entries even transiently.
    void push(int window, WindowClips faces);

    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(entries_.size()); }
    const std::deque<PoolEntry>& entries() const { return entries_; }
    std::vector<int> windows() const;

private:
    int capacity_;
    int last_window_;
    bool any_pushed_ = false;
    std::deque<PoolEntry> entries_;
};

/// Mean of m_{g,t} over [tau, tau + length).
double short_horizon_coverage(const FrameCoverage& fc, Face g, int tau, int length);

struct FragmentSpec {
    Face face;
    int start;
    int length;
    friend bool operator==(const FragmentSpec&, const FragmentSpec&) = default;
};

/// For the current face and then its neighbours in canonical order, the
/// earliest tau >= window_end whose short-horizon coverage reaches the
/// threshold with the whole horizon inside [0, frames). Faces without one
/// are left out.
std::vector<FragmentSpec> select_future_fragments(const FrameCoverage& fc, Face current, int window_end,
                                                  int fragment_length, double threshold, int frames);

enum class SourceKind { History, CurrentGenerated, CurrentConditional, Future };

std::string_view source_kind_name(SourceKind k);

struct Provenance {
    SourceKind kind;
    Face face;
    int start;
    int end;
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ContextSource {
    Provenance provenance;
    ClipRef clip;
};

/// State of the window being generated.
struct WindowProgress {
    int window = 0;
    Window range{0, 0};
    Face current = Face::F;
    std::vector<Face> generated; // generation order
    WindowClips canvas;          // generated content or conditional input, per face
};

struct ContextBundle {
    std::vector<ContextSource> hist;
    std::vector<ContextSource> curr;
    std::vector<ContextSource> fut;

    /// Provenance in concatenation order [hist; curr; fut].
    std::vector<Provenance> provenance() const;
    nlohmann::json provenance_json() const;
    std::size_t source_count() const { return hist.size() + curr.size() + fut.size(); }
};

/// hist: pool entries oldest first, six faces each in canonical order.
/// curr: generated faces in generation order, then the conditional input of
///       the current face, then the other ungenerated faces in canonical order.
/// fut:  conditional clips for each fragment, in fragment order.
ContextBundle assemble_context(const ContextPool& pool, const WindowProgress& progress,
                               std::span<const FragmentSpec> fragments, const CubemapVideo& cond,
                               ResidencyMeter* meter = nullptr);

} // namespace cubegen
