// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Flow-matching path, loss, Euler sampler and the face-by-face generation loop.
//
// Path and velocity follow z_t = (1 - t) z0 + t eps and v = z0 - z_t. The
// sampler walks t_s = 1 - s/S down to 0 with z <- z + (dt / t_s) v_hat, which
// keeps an exact velocity oracle on the path at every step and lands on z0.

#include "cubegen/context.hpp"
#include "cubegen/continuity.hpp"
#include "cubegen/image.hpp"
#include "cubegen/planner.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cubegen {

struct LatentShape {
    int frames = 1;
    int height = 1;
    int width = 1;
    int channels = 1;

    std::size_t size() const {
        return static_cast<std::size_t>(frames) * height * width * channels;
    }
    friend bool operator==(const LatentShape&, const LatentShape&) = default;
};

/// frames x height x width x channels, contiguous.
struct Latent {
    LatentShape shape;
    std::vector<float> data;

    Latent() = default;
    explicit Latent(LatentShape s, float fill = 0.0f) : shape(s), data(s.size(), fill) {}

    std::size_t frame_size() const { return static_cast<std::size_t>(shape.height) * shape.width * shape.channels; }
    Image frame(int t) const;
    void set_frame(int t, const Image& img);

    static Latent from_frames(const std::vector<Image>& frames);
};

/// Stand-in for a global or per-face prompt.
struct ConditioningTag {
    std::string id;
    friend bool operator==(const ConditioningTag&, const ConditioningTag&) = default;
};

struct SamplerConfig {
    int steps = 4;
    std::uint64_t seed = 0;
    bool teacher_forcing = false;
    void validate() const;
};

Latent sample_path(const Latent& z0, const Latent& eps, double t);

/// Mean squared error between the prediction and z0 - z_t.
double flow_matching_loss(const Latent& v_pred, const Latent& z0, const Latent& z_t);

/// What a denoiser sees besides the noisy latent.
struct StepContext {
    const ContextBundle* bundle = nullptr;
    PlanStep step{};
    int pad = 0;
    /// Conditional input of the current face, padded like the latent.
    Latent padded_condition;
    /// Flattened-cube positions of the padded latent on the patch grid.
    std::vector<GridPosition> token_positions;
};

using Denoiser = std::function<Latent(const Latent& z_t, double t, const StepContext& ctx, const ConditioningTag& tag)>;

/// Returns z0 - z_t for a fixed z0.
Denoiser oracle_denoiser(Latent z0);

/// Oracle against a full ground-truth video: targets the padded ground truth
/// of whatever face and window the step names.
Denoiser ground_truth_denoiser(const CubemapVideo& ground_truth, int pad);

/// Predicts the padded conditional input as the clean latent.
Denoiser copy_denoiser();

/// Predicts an all-zero clean latent.
Denoiser zero_denoiser();

/// Seeded standard normal draw.
Latent gaussian_noise(const LatentShape& shape, std::uint64_t seed);

Latent euler_sample(const Denoiser& denoiser, const LatentShape& shape, const StepContext& ctx,
                    const ConditioningTag& tag, const SamplerConfig& cfg);

struct PipelineConfig {
    int resolution = 64;      // R
    int equirect_width = 256; // W
    int pad = 4;              // p
    int patch = 8;            // p_s
    int history = 2;          // H
    int fragment_length = 4;  // T_frag
    double threshold = 0.5;   // r
    SamplerConfig sampler;
    ConditioningTag tag;
    bool keep_cubemaps = false;

    void validate() const;
};

struct StepRecord {
    PlanStep step;
    std::vector<FragmentSpec> fragments;
    std::vector<Provenance> provenance;
    int pool_size = 0;
    int resident = 0;
    double elapsed_ms = 0.0;
};

struct RunResult {
    std::vector<EquirectGrid> frames;
    std::vector<CubemapFrame> cubemaps; // only with keep_cubemaps
    std::vector<double> seam_metric;    // per frame
    std::vector<StepRecord> steps;
    std::vector<int> pool_occupancy;    // pool size after each step
    int peak_resident = 0;
    int max_fragments = 0;
    int history = 0;

    int resident_bound() const { return 6 * (history + 1) + max_fragments; }

    /// Deterministic part of the run report (no timings).
    nlohmann::json report_json() const;
    nlohmann::json timings_json() const;
};

/// Sequential generator over a plan. Holds the pool, the window canvas and
/// the residency meter; every face-window clip it creates is metered.
class GenerationSession {
public:
    GenerationSession(PipelineConfig cfg, const CubemapVideo& cond, GenerationPlan plan, WindowPartition partition,
                      const CubemapVideo* ground_truth = nullptr);

    /// Generates the next planned step; `step` must equal it. Returns the
    /// generated padded face, one entry per frame of the window.
    std::vector<PaddedFace> generate_step(const PlanStep& step, const Denoiser& denoiser);

    bool finished() const { return next_ == plan_.steps.size(); }
    const PlanStep& next_step() const { return plan_.steps.at(next_); }

    const ContextPool& pool() const { return pool_; }
    const ResidencyMeter& meter() const { return meter_; }
    const WindowProgress& progress() const { return progress_; }
    const FrameCoverage& coverage() const { return coverage_; }

    /// Moves out everything produced so far.
    RunResult take_result();

private:
    void start_window(const PlanStep& step);
    void finish_window();
    void check_causality(const ContextBundle& b, const PlanStep& step) const;

    PipelineConfig cfg_;
    const CubemapVideo& cond_;
    const CubemapVideo* ground_truth_;
    GenerationPlan plan_;
    WindowPartition partition_;
    FrameCoverage coverage_;
    CubeLayout layout_;
    CubeLayout token_layout_;
    ContextPool pool_;
    ResidencyMeter meter_;
    WindowProgress progress_;
    std::array<std::shared_ptr<FaceClip>, kFaceCount> canvas_;
    bool window_open_ = false;
    std::size_t next_ = 0;
    RunResult result_;
};

/// Runs every step of the plan in order and assembles equirect frames.
RunResult generate_all(const CubemapVideo& cond, const GenerationPlan& plan, const WindowPartition& partition,
                       const Denoiser& denoiser, const PipelineConfig& cfg,
                       const CubemapVideo* ground_truth = nullptr);

} // namespace cubegen
