// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/pipeline.hpp"

#include "cubegen/geometry.hpp"
#include "cubegen/simd/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cubegen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_same_shape(const Latent& a, const Latent& b, const char* what) {
    if (!(a.shape == b.shape) || a.data.size() != b.data.size())
        throw std::invalid_argument(std::string(what) + ": latent shapes differ");
}

// Velocity toward a known clean latent.
Latent velocity_to(const Latent& z0, const Latent& z_t) {
    if (!(z0.shape == z_t.shape)) throw std::logic_error("denoiser: target and input shapes differ");
    Latent v = z0;
    simd::axpy(-1.0f, z_t.data.data(), v.data.data(), v.data.size());
    return v;
}

CubemapFrame frame_from_clips(const std::array<std::shared_ptr<FaceClip>, kFaceCount>& clips, int t, int R, int C) {
    CubemapFrame frame(R, C);
    for (Face f : kAllFaces) {
        frame.face(f) = clips[index(f)]->frames[static_cast<std::size_t>(t)];
        frame.mask(f) = clips[index(f)]->masks[static_cast<std::size_t>(t)];
    }
    return frame;
}

Latent padded_face_latent(const CubemapVideo& video, Face f, int start, int end, int pad, const CubeLayout& layout) {
    std::vector<Image> frames;
    for (int t = start; t < end; ++t)
        frames.push_back(pad_face(video.at(static_cast<std::size_t>(t)), f, pad, layout).assemble());
    return Latent::from_frames(frames);
}

} // namespace

Image Latent::frame(int t) const {
    Image img(shape.width, shape.height, shape.channels);
    const std::size_t n = frame_size();
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(n * t), n, img.data().begin());
    return img;
}

void Latent::set_frame(int t, const Image& img) {
    if (img.width() != shape.width || img.height() != shape.height || img.channels() != shape.channels)
        throw std::invalid_argument("Latent::set_frame: frame shape mismatch");
    std::copy(img.data().begin(), img.data().end(), data.begin() + static_cast<std::ptrdiff_t>(frame_size() * t));
}

Latent Latent::from_frames(const std::vector<Image>& frames) {
    if (frames.empty()) throw std::invalid_argument("Latent::from_frames: no frames");
    Latent z({static_cast<int>(frames.size()), frames[0].height(), frames[0].width(), frames[0].channels()});
    for (std::size_t t = 0; t < frames.size(); ++t) z.set_frame(static_cast<int>(t), frames[t]);
    return z;
}

void SamplerConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("SamplerConfig: step count must be >= 1");
}

Latent sample_path(const Latent& z0, const Latent& eps, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("sample_path: t must lie in [0, 1]");
    require_same_shape(z0, eps, "sample_path");
    if (t == 0.0) return z0;
    if (t == 1.0) return eps;
    Latent z(z0.shape);
    const float a = static_cast<float>(1.0 - t);
    const float b = static_cast<float>(t);
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] = a * z0.data[i] + b * eps.data[i];
    return z;
}

double flow_matching_loss(const Latent& v_pred, const Latent& z0, const Latent& z_t) {
    require_same_shape(v_pred, z0, "flow_matching_loss");
    require_same_shape(z0, z_t, "flow_matching_loss");
    if (v_pred.data.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < v_pred.data.size(); ++i) {
        const double r = static_cast<double>(v_pred.data[i]) - (static_cast<double>(z0.data[i]) - z_t.data[i]);
        sum += r * r;
    }
    return sum / static_cast<double>(v_pred.data.size());
}

Denoiser oracle_denoiser(Latent z0) {
    return [z0 = std::move(z0)](const Latent& z_t, double, const StepContext&, const ConditioningTag&) {
        return velocity_to(z0, z_t);
    };
}

Denoiser ground_truth_denoiser(const CubemapVideo& ground_truth, int pad) {
    return [&ground_truth, pad](const Latent& z_t, double, const StepContext& ctx, const ConditioningTag&) {
        const CubeLayout layout(ground_truth.at(0).resolution);
        return velocity_to(padded_face_latent(ground_truth, ctx.step.face, ctx.step.start, ctx.step.end, pad, layout), z_t);
    };
}

Denoiser copy_denoiser() {
    return [](const Latent& z_t, double, const StepContext& ctx, const ConditioningTag&) {
        return velocity_to(ctx.padded_condition, z_t);
    };
}

Denoiser zero_denoiser() {
    return [](const Latent& z_t, double, const StepContext&, const ConditioningTag&) {
        return velocity_to(Latent(z_t.shape), z_t);
    };
}

Latent gaussian_noise(const LatentShape& shape, std::uint64_t seed) {
    Latent z(shape);
    std::mt19937_64 gen(seed);
    std::normal_distribution<float> normal(0.0f, 1.0f);
    for (float& x : z.data) x = normal(gen);
    return z;
}

Latent euler_sample(const Denoiser& denoiser, const LatentShape& shape, const StepContext& ctx,
                    const ConditioningTag& tag, const SamplerConfig& cfg) {
    cfg.validate();
    Latent z = gaussian_noise(shape, cfg.seed);
    const int S = cfg.steps;
    for (int s = 0; s < S; ++s) {
        const double t = 1.0 - static_cast<double>(s) / S;
        const Latent v = denoiser(z, t, ctx, tag);
        if (!(v.shape == z.shape) || v.data.size() != z.data.size())
            throw std::logic_error("euler_sample: denoiser returned a latent of the wrong shape");
        // dt / t_s with dt = 1/S and t_s = (S - s)/S.
        const float coeff = static_cast<float>(1.0 / (S - s));
        simd::axpy(coeff, v.data.data(), z.data.data(), z.data.size());
    }
    return z;
}

void PipelineConfig::validate() const {
    sampler.validate();
    if (resolution < 4) throw std::invalid_argument("PipelineConfig: resolution must be >= 4");
    if (pad < 1 || pad > resolution / 2) throw std::invalid_argument("PipelineConfig: pad must lie in [1, R/2]");
    if (patch < 1 || resolution % patch != 0) throw std::invalid_argument("PipelineConfig: patch size must divide R");
    if (history < 0) throw std::invalid_argument("PipelineConfig: history must be >= 0");
    if (fragment_length < 1) throw std::invalid_argument("PipelineConfig: fragment length must be >= 1");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("PipelineConfig: threshold must lie in (0, 1]");
    if (equirect_width < 4 || equirect_width % 4 != 0)
        throw std::invalid_argument("PipelineConfig: equirect width must be a positive multiple of 4");
}

GenerationSession::GenerationSession(PipelineConfig cfg, const CubemapVideo& cond, GenerationPlan plan,
                                     WindowPartition partition, const CubemapVideo* ground_truth)
    : cfg_(std::move(cfg)), cond_(cond), ground_truth_(ground_truth), plan_(std::move(plan)),
      partition_(std::move(partition)), coverage_(frame_coverage(cond)), layout_(cfg_.resolution),
      token_layout_(std::max(1, cfg_.resolution / std::max(1, cfg_.patch))), pool_(cfg_.history) {
    cfg_.validate();
    if (static_cast<int>(cond_.size()) != partition_.frames)
        throw std::invalid_argument("GenerationSession: conditional video length does not match the partition");
    if (!cond_.empty() && cond_.front().resolution != cfg_.resolution)
        throw std::invalid_argument("GenerationSession: conditional video resolution does not match R");
    if (plan_.steps.size() != kFaceCount * static_cast<std::size_t>(partition_.count()))
        throw std::invalid_argument("GenerationSession: plan must have 6 steps per window");
    for (const PlanStep& s : plan_.steps)
        if (s.window < 0 || s.window >= partition_.count() || partition_.windows[static_cast<std::size_t>(s.window)] != Window{s.start, s.end})
            throw std::invalid_argument("GenerationSession: plan step does not match the window partition");
    if (cfg_.sampler.teacher_forcing && ground_truth_ == nullptr)
        throw std::invalid_argument("GenerationSession: teacher forcing needs ground truth");
    if (ground_truth_ && ground_truth_->size() != cond_.size())
        throw std::invalid_argument("GenerationSession: ground truth length does not match");
    result_.history = cfg_.history;
}

void GenerationSession::start_window(const PlanStep& step) {
    for (Face f : kAllFaces)
        canvas_[index(f)] = std::make_shared<FaceClip>(clip_from_video(cond_, f, step.start, step.end, &meter_));
    progress_ = WindowProgress{};
    progress_.window = step.window;
    progress_.range = {step.start, step.end};
    window_open_ = true;
}

void GenerationSession::check_causality(const ContextBundle& b, const PlanStep& step) const {
    for (const ContextSource& s : b.hist)
        if (s.provenance.end > step.start) throw std::logic_error("causality: history source reaches into the current window");
    for (const ContextSource& s : b.curr)
        if (s.provenance.start != step.start || s.provenance.end != step.end)
            throw std::logic_error("causality: current-window source outside the window");
    for (const ContextSource& s : b.fut)
        if (s.provenance.start < step.end) throw std::logic_error("causality: future fragment starts inside the window");
}

std::vector<PaddedFace> GenerationSession::generate_step(const PlanStep& step, const Denoiser& denoiser) {
    if (finished()) throw std::invalid_argument("generate_step: plan already complete");
    if (!(step == plan_.steps[next_]))
        throw std::invalid_argument("generate_step: plan-order violation, expected face " +
                                    std::string(face_name(plan_.steps[next_].face)) + " at frames [" +
                                    std::to_string(plan_.steps[next_].start) + ", " + std::to_string(plan_.steps[next_].end) + ")");
    const auto t0 = std::chrono::steady_clock::now();
    if (!window_open_) start_window(step);

    const int R = cfg_.resolution;
    const int C = cond_.front().channels;
    const int p = cfg_.pad;
    const int T = step.end - step.start;

    StepRecord record;
    record.step = step;
    record.fragments = select_future_fragments(coverage_, step.face, step.end, cfg_.fragment_length, cfg_.threshold,
                                               partition_.frames);
    result_.max_fragments = std::max(result_.max_fragments, static_cast<int>(record.fragments.size()));

    Latent generated;
    {
        progress_.current = step.face;
        for (Face f : kAllFaces) progress_.canvas[index(f)] = canvas_[index(f)];
        const ContextBundle bundle = assemble_context(pool_, progress_, record.fragments, cond_, &meter_);
        check_causality(bundle, step);
        record.provenance = bundle.provenance();

        StepContext ctx;
        ctx.bundle = &bundle;
        ctx.step = step;
        ctx.pad = p;
        std::vector<Image> cond_frames;
        for (int t = 0; t < T; ++t)
            cond_frames.push_back(pad_face(frame_from_clips(canvas_, t, R, C), step.face, p, layout_).assemble());
        ctx.padded_condition = Latent::from_frames(cond_frames);
        const int token_pad = (p + cfg_.patch - 1) / cfg_.patch;
        ctx.token_positions = padded_position_grid(token_layout_, step.face, token_pad);

        SamplerConfig sc = cfg_.sampler;
        sc.seed = splitmix64(cfg_.sampler.seed ^ splitmix64(static_cast<std::uint64_t>(next_)));
        const LatentShape shape{T, R + 2 * p, R + 2 * p, C};
        generated = euler_sample(denoiser, shape, ctx, cfg_.tag, sc);
        record.resident = meter_.live();
        for (auto& c : progress_.canvas) c.reset();
    }

    std::array<bool, kFaceCount> blend_into{};
    for (Face g : progress_.generated) blend_into[index(g)] = true;

    std::vector<PaddedFace> out;
    out.reserve(static_cast<std::size_t>(T));
    const auto positions = padded_position_grid(layout_, step.face, p);
    for (int t = 0; t < T; ++t) {
        PaddedFace pf = PaddedFace::split(step.face, generated.frame(t), p, positions);
        const CubemapFrame blended = blend_overlaps(pf, frame_from_clips(canvas_, t, R, C), p, layout_, blend_into);
        for (Face g : kAllFaces) {
            if (g != step.face && !blend_into[index(g)]) continue;
            if (canvas_[index(g)].use_count() != 1) throw std::logic_error("generate_step: canvas clip still shared");
            canvas_[index(g)]->frames[static_cast<std::size_t>(t)] = blended.face(g);
        }
        out.push_back(std::move(pf));
    }
    progress_.generated.push_back(step.face);
    ++next_;

    if (progress_.generated.size() == kFaceCount) finish_window();

    record.pool_size = pool_.size();
    record.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result_.pool_occupancy.push_back(pool_.size());
    result_.steps.push_back(std::move(record));
    result_.peak_resident = meter_.peak();
    return out;
}

void GenerationSession::finish_window() {
    const int R = cfg_.resolution;
    const int C = cond_.front().channels;
    const int T = progress_.range.end - progress_.range.start;
    for (int t = 0; t < T; ++t) {
        const CubemapFrame frame = frame_from_clips(canvas_, t, R, C);
        result_.seam_metric.push_back(seam_metric(frame, layout_));
        result_.frames.push_back(cubemap_to_equirect(frame, cfg_.equirect_width));
        if (cfg_.keep_cubemaps) result_.cubemaps.push_back(frame);
    }
    WindowClips done;
    if (cfg_.sampler.teacher_forcing) {
        for (auto& c : canvas_) c.reset();
        for (Face f : kAllFaces)
            done[index(f)] = std::make_shared<const FaceClip>(
                clip_from_video(*ground_truth_, f, progress_.range.start, progress_.range.end, &meter_));
    } else {
        for (Face f : kAllFaces) done[index(f)] = std::move(canvas_[index(f)]);
    }
    pool_.push(progress_.window, std::move(done));
    window_open_ = false;
}

RunResult GenerationSession::take_result() {
    result_.peak_resident = meter_.peak();
    return std::move(result_);
}

nlohmann::json RunResult::report_json() const {
    nlohmann::json steps_json = nlohmann::json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const StepRecord& r = steps[i];
        nlohmann::json frags = nlohmann::json::array();
        for (const FragmentSpec& f : r.fragments)
            frags.push_back({{"face", std::string(face_name(f.face))}, {"s", f.start}, {"e", f.start + f.length}});
        nlohmann::json ctx = nlohmann::json::array();
        for (const Provenance& p : r.provenance)
            ctx.push_back({{"kind", std::string(source_kind_name(p.kind))},
                           {"face", std::string(face_name(p.face))},
                           {"s", p.start},
                           {"e", p.end}});
        steps_json.push_back({{"index", i},
                              {"face", std::string(face_name(r.step.face))},
                              {"window", r.step.window},
                              {"s", r.step.start},
                              {"e", r.step.end},
                              {"fragments", frags},
                              {"context", ctx},
                              {"pool_size", r.pool_size},
                              {"resident_face_windows", r.resident}});
    }
    return {{"frames", frames.size()},
            {"history", history},
            {"steps", steps_json},
            {"pool_occupancy", pool_occupancy},
            {"peak_resident_face_windows", peak_resident},
            {"resident_bound", resident_bound()},
            {"seam_metric", seam_metric}};
}

nlohmann::json RunResult::timings_json() const {
    nlohmann::json arr = nlohmann::json::array();
    double total = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        arr.push_back({{"index", i}, {"elapsed_ms", steps[i].elapsed_ms}});
        total += steps[i].elapsed_ms;
    }
    return {{"steps", arr}, {"total_ms", total}};
}

RunResult generate_all(const CubemapVideo& cond, const GenerationPlan& plan, const WindowPartition& partition,
                       const Denoiser& denoiser, const PipelineConfig& cfg, const CubemapVideo* ground_truth) {
    GenerationSession session(cfg, cond, plan, partition, ground_truth);
    for (const PlanStep& step : plan.steps) session.generate_step(step, denoiser);
    return session.take_result();
}

} // namespace cubegen
