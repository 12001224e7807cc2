// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/cli.hpp"

#include "cubegen/attention.hpp"
#include "cubegen/continuity.hpp"
#include "cubegen/imageio.hpp"
#include "cubegen/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace cubegen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void read_int(const json& j, const char* key, int& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError(key, "out of range");
    dst = static_cast<int>(x);
}

void read_u64(const json& j, const char* key, std::uint64_t& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(key, "must be a non-negative integer");
    dst = v.get<std::uint64_t>();
}

void read_double(const json& j, const char* key, double& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, "must be a number");
    dst = v.get<double>();
}

void read_bool(const json& j, const char* key, bool& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) throw ConfigError(key, "must be a boolean");
    dst = j.at(key).get<bool>();
}

void read_string(const json& j, const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) throw ConfigError(key, "must be a string");
    dst = j.at(key).get<std::string>();
}

void read_int_list(const json& j, const char* key, std::vector<int>& dst) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array()) throw ConfigError(key, "must be an array of integers");
    dst.clear();
    for (const json& e : v) {
        if (!e.is_number_integer()) throw ConfigError(key, "must be an array of integers");
        dst.push_back(e.get<int>());
    }
}

void require(bool ok, const char* field, const std::string& constraint) {
    if (!ok) throw ConfigError(field, constraint);
}

const std::set<std::string> kKnownKeys = {
    "R", "W", "N", "T_win", "H", "T_frag", "r", "K", "p", "p_s", "S", "seed", "channels",
    "input_frames", "pose_file", "output_dir", "teacher_forcing", "denoiser", "preset", "allocate",
    "trajectory", "anchors", "hfov_deg", "vfov_deg", "perspective_width", "perspective_height",
    "bench_G", "bench_d", "bench_contexts"};

std::string frame_name(const char* prefix, int t, const char* suffix) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%03d%s", prefix, t, suffix);
    return buf;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

Denoiser make_denoiser(const RunConfig& cfg, const RunInputs& in) {
    if (cfg.denoiser == "copy") return copy_denoiser();
    if (cfg.denoiser == "zero") return zero_denoiser();
    if (!in.scene) throw ConfigError("denoiser", "oracle needs the synthetic scene");
    return ground_truth_denoiser(in.scene->ground_truth, cfg.p);
}

struct Planned {
    WindowPartition partition;
    FrameCoverage coverage;
    CoverageTable table;
    GenerationPlan plan;
};

Planned make_plan(const RunConfig& cfg, const CubemapVideo& cond) {
    Planned p;
    p.partition = partition_windows(cfg.N, cfg.T_win);
    p.coverage = frame_coverage(cond);
    p.table = window_coverage(p.coverage, p.partition);
    p.plan = plan_order(p.table, p.partition);
    return p;
}

RunResult run_generation(const RunConfig& cfg, const RunInputs& in, bool keep_cubemaps) {
    const Planned pl = make_plan(cfg, in.conditional);
    PipelineConfig pc = cfg.pipeline();
    pc.keep_cubemaps = keep_cubemaps;
    const CubemapVideo* gt = in.scene ? &in.scene->ground_truth : nullptr;
    return generate_all(in.conditional, pl.plan, pl.partition, make_denoiser(cfg, in), pc, gt);
}

int cmd_project(const RunConfig& cfg, const fs::path& out) {
    const RunInputs in = load_inputs(cfg);
    const fs::path dir = out / "cond";
    fs::create_directories(dir);
    for (int t = 0; t < cfg.N; ++t) {
        const CubemapFrame& c = in.conditional[static_cast<std::size_t>(t)];
        for (Face f : kAllFaces) {
            const std::string stem = frame_name("t", t, "_") + std::string(face_name(f));
            write_pfm(dir / (stem + ".pfm"), c.face(f));
            write_mask_pgm(dir / (stem + ".pgm"), c.mask(f));
        }
    }
    write_json(out / "coverage.json", frame_coverage_to_json(frame_coverage(in.conditional)));
    return 0;
}

int cmd_plan(const RunConfig& cfg, const fs::path& out) {
    const RunInputs in = load_inputs(cfg);
    const Planned pl = make_plan(cfg, in.conditional);
    write_json(out / "plan.json", plan_to_json(pl.plan));
    write_json(out / "coverage_table.json", coverage_table_to_json(pl.table, pl.partition));
    return 0;
}

int cmd_context(const RunConfig& cfg, const fs::path& out) {
    const RunInputs in = load_inputs(cfg);
    const RunResult res = run_generation(cfg, in, false);
    json steps = json::array();
    const json report = res.report_json();
    for (const json& s : report.at("steps"))
        steps.push_back({{"index", s.at("index")},
                         {"face", s.at("face")},
                         {"window", s.at("window")},
                         {"s", s.at("s")},
                         {"e", s.at("e")},
                         {"context", s.at("context")}});
    write_json(out / "context.json", {{"steps", steps}});
    return 0;
}

template <typename F>
double best_ms(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

int cmd_attend_bench(const RunConfig& cfg, const fs::path& out) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<float> normal(0.0f, 1.0f);
    std::string csv = "G,C,K,d,flops_sparse,flops_dense,wall_ms_sparse,wall_ms_dense\n";
    const int G = cfg.bench_G;
    const int d = cfg.bench_d;
    const BandedMaskSpec spec{cfg.K};
    for (int C : cfg.bench_contexts) {
        const TokenLayout layout = TokenLayout::simple(G, C);
        AttentionInputs<float> inp(1, G + C, d);
        for (auto* buf : {&inp.queries, &inp.keys, &inp.values})
            for (float& x : *buf) x = normal(rng);
        const ContextMask mask = build_context_mask(layout, spec);
        const MaskPredicate pred = [&mask](int q, int k) { return mask(q, k); };
        const double ms_sparse = best_ms(3, [&] { (void)sparse_context_attention(inp, layout, spec); });
        const double ms_dense = best_ms(3, [&] { (void)dense_masked_attention(inp, pred); });
        char line[256];
        std::snprintf(line, sizeof line, "%d,%d,%d,%d,%.0f,%.0f,%.3f,%.3f\n", G, C, cfg.K, d,
                      attention_flops(layout, spec, d), dense_attention_flops(layout, d), ms_sparse, ms_dense);
        csv += line;
    }
    write_text(out / "bench.csv", csv);
    return 0;
}

json dry_run_json(const RunConfig& cfg) {
    const int L = cfg.N / cfg.T_win;
    const int padded = cfg.R + 2 * cfg.p;
    const int tok_side = (padded + cfg.p_s - 1) / cfg.p_s;
    const int ctx_side = cfg.R / cfg.p_s;
    const std::int64_t gen_tokens = static_cast<std::int64_t>(cfg.T_win) * tok_side * tok_side;
    // Largest bundle: H full windows, six current-window faces, six fragments.
    const std::int64_t ctx_sources = 6LL * cfg.H + 6 + 6;
    const std::int64_t ctx_tokens = ctx_sources * cfg.T_win * ctx_side * ctx_side;
    return {{"dry_run", true},
            {"preset", cfg.preset},
            {"equirect", {cfg.W, cfg.W / 2}},
            {"face", {cfg.R, cfg.R}},
            {"padded_face", {padded, padded}},
            {"frames", cfg.N},
            {"windows", L},
            {"steps", 6 * L},
            {"generation_tokens_per_step", gen_tokens},
            {"max_context_tokens_per_step", ctx_tokens},
            {"resident_bound_face_windows", 6 * (cfg.H + 1) + 6},
            {"floats_per_face_window", static_cast<std::int64_t>(cfg.T_win) * cfg.R * cfg.R * cfg.channels},
            {"floats_per_equirect_frame", static_cast<std::int64_t>(cfg.W) * (cfg.W / 2) * cfg.channels}};
}

int cmd_generate(const RunConfig& cfg, const fs::path& out) {
    if (cfg.dry_run()) {
        write_json(out / "dry_run.json", dry_run_json(cfg));
        return 0;
    }
    const RunInputs in = load_inputs(cfg);
    const RunResult res = run_generation(cfg, in, false);
    fs::create_directories(out / "frames");
    for (std::size_t t = 0; t < res.frames.size(); ++t)
        write_pfm(out / "frames" / frame_name("frame_", static_cast<int>(t), ".pfm"), res.frames[t].image);
    write_json(out / "report.json", res.report_json());
    write_json(out / "timings.json", res.timings_json());
    return 0;
}

double max_abs_diff(const Image& a, const Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, static_cast<double>(std::abs(a.data()[i] - b.data()[i])));
    return m;
}

int cmd_metrics(const RunConfig& cfg, const fs::path& out) {
    const RunInputs in = load_inputs(cfg);
    const FrameCoverage fc = frame_coverage(in.conditional);
    json per_face = json::object();
    double total = 0.0;
    for (Face f : kAllFaces) {
        double s = 0.0;
        for (int t = 0; t < fc.frames(); ++t) s += fc.at(f, t);
        per_face[std::string(face_name(f))] = s / fc.frames();
        total += s;
    }
    const RunResult res = run_generation(cfg, in, false);
    json j = {{"coverage", {{"per_face_mean", per_face}, {"overall_mean", total / (6.0 * fc.frames())}}},
              {"seam_metric", {{"generated", res.seam_metric}}}};
    if (in.scene) {
        const CubeLayout layout(cfg.R);
        std::vector<double> gt_seam;
        double err = 0.0;
        for (int t = 0; t < cfg.N; ++t) {
            gt_seam.push_back(seam_metric(in.scene->ground_truth[static_cast<std::size_t>(t)], layout));
            err = std::max(err, max_abs_diff(res.frames[static_cast<std::size_t>(t)].image,
                                             in.scene->scene.render_equirect(cfg.W, t).image));
        }
        j["seam_metric"]["ground_truth"] = gt_seam;
        j["equirect_max_abs_error"] = err;
    }
    write_json(out / "metrics.json", j);
    return 0;
}

} // namespace

void RunConfig::validate() const {
    require(preset == "desk" || preset == "paper-geometry", "preset", "must be desk or paper-geometry");
    require(R >= 4, "R", "must be >= 4");
    require(W == 4 * R, "W", "must equal 4 * R");
    require(N >= 1, "N", "must be >= 1");
    require(T_win >= 1, "T_win", "must be >= 1");
    require(N % T_win == 0, "N", "must be divisible by T_win");
    require(H >= 1, "H", "must be >= 1");
    require(T_frag >= 1, "T_frag", "must be >= 1");
    require(r > 0.0 && r <= 1.0, "r", "must lie in (0, 1]");
    require(K >= 1, "K", "must be >= 1");
    require(p >= 1, "p", "must be >= 1");
    require(p <= R / 2, "p", "must be <= R / 2");
    require(p_s >= 1, "p_s", "must be >= 1");
    require(R % p_s == 0, "p_s", "must divide R");
    require(S >= 1, "S", "must be >= 1");
    require(channels >= 1, "channels", "must be >= 1");
    require(denoiser == "oracle" || denoiser == "copy" || denoiser == "zero", "denoiser",
            "must be oracle, copy or zero");
    require(trajectory == "static-front" || trajectory == "yaw-sweep" || trajectory == "protocol", "trajectory",
            "must be static-front, yaw-sweep or protocol");
    require(hfov_deg > 0.0 && hfov_deg < 180.0, "hfov_deg", "must lie in (0, 180)");
    require(vfov_deg > 0.0 && vfov_deg < 180.0, "vfov_deg", "must lie in (0, 180)");
    if (trajectory == "protocol") {
        require(anchors >= 3 && anchors <= 5, "anchors", "must lie in [3, 5] for the protocol trajectory");
        require(hfov_deg >= 60.0 && hfov_deg <= 120.0, "hfov_deg", "must lie in [60, 120] for the protocol trajectory");
    }
    require(N >= 2 || trajectory == "static-front", "N", "must be >= 2 for a moving trajectory");
    require(perspective_width >= 1, "perspective_width", "must be >= 1");
    require(perspective_height >= 1, "perspective_height", "must be >= 1");
    require(bench_G >= 1, "bench_G", "must be >= 1");
    require(bench_d >= 1, "bench_d", "must be >= 1");
    require(!bench_contexts.empty(), "bench_contexts", "must not be empty");
    for (int c : bench_contexts) require(c >= 0, "bench_contexts", "entries must be >= 0");
    if (!input_frames.empty()) {
        require(!pose_file.empty(), "pose_file", "required with input_frames");
        require(denoiser != "oracle", "denoiser", "oracle needs the synthetic scene");
        require(!teacher_forcing, "teacher_forcing", "needs the synthetic scene");
    }
    require(!allocate || preset == "paper-geometry", "allocate", "only applies to the paper-geometry preset");
}

json RunConfig::to_json() const {
    return {{"R", R},
            {"W", W},
            {"N", N},
            {"T_win", T_win},
            {"H", H},
            {"T_frag", T_frag},
            {"r", r},
            {"K", K},
            {"p", p},
            {"p_s", p_s},
            {"S", S},
            {"seed", seed},
            {"channels", channels},
            {"input_frames", input_frames},
            {"pose_file", pose_file},
            {"output_dir", output_dir},
            {"teacher_forcing", teacher_forcing},
            {"denoiser", denoiser},
            {"preset", preset},
            {"allocate", allocate},
            {"trajectory", trajectory},
            {"anchors", anchors},
            {"hfov_deg", hfov_deg},
            {"vfov_deg", vfov_deg},
            {"perspective_width", perspective_width},
            {"perspective_height", perspective_height},
            {"bench_G", bench_G},
            {"bench_d", bench_d},
            {"bench_contexts", bench_contexts}};
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown field");
    RunConfig c;
    read_string(j, "preset", c.preset);
    if (c.preset == "paper-geometry") {
        c.R = 960;
        c.W = 3840;
    }
    read_int(j, "R", c.R);
    if (!j.contains("W")) c.W = 4 * c.R;
    read_int(j, "W", c.W);
    read_int(j, "N", c.N);
    read_int(j, "T_win", c.T_win);
    read_int(j, "H", c.H);
    read_int(j, "T_frag", c.T_frag);
    read_double(j, "r", c.r);
    read_int(j, "K", c.K);
    read_int(j, "p", c.p);
    read_int(j, "p_s", c.p_s);
    read_int(j, "S", c.S);
    read_u64(j, "seed", c.seed);
    read_int(j, "channels", c.channels);
    read_string(j, "input_frames", c.input_frames);
    read_string(j, "pose_file", c.pose_file);
    read_string(j, "output_dir", c.output_dir);
    read_bool(j, "teacher_forcing", c.teacher_forcing);
    read_string(j, "denoiser", c.denoiser);
    read_bool(j, "allocate", c.allocate);
    read_string(j, "trajectory", c.trajectory);
    read_int(j, "anchors", c.anchors);
    read_double(j, "hfov_deg", c.hfov_deg);
    read_double(j, "vfov_deg", c.vfov_deg);
    read_int(j, "perspective_width", c.perspective_width);
    read_int(j, "perspective_height", c.perspective_height);
    read_int(j, "bench_G", c.bench_G);
    read_int(j, "bench_d", c.bench_d);
    read_int_list(j, "bench_contexts", c.bench_contexts);
    c.validate();
    return c;
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig pc;
    pc.resolution = R;
    pc.equirect_width = W;
    pc.pad = p;
    pc.patch = p_s;
    pc.history = H;
    pc.fragment_length = T_frag;
    pc.threshold = r;
    pc.sampler.steps = S;
    pc.sampler.seed = seed;
    pc.sampler.teacher_forcing = teacher_forcing;
    return pc;
}

RunConfig parse_config(const fs::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const IoError& e) {
        throw ConfigError("--config", e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return RunConfig::from_json(j);
}

SyntheticScene::SyntheticScene(std::mt19937_64& rng, int channels, double yaw_per_frame_rad)
    : channels_(channels), yaw_rate_(yaw_per_frame_rad) {
    std::uniform_real_distribution<double> lin(-0.15, 0.15);
    std::uniform_real_distribution<double> quad(-0.08, 0.08);
    for (int c = 0; c < channels; ++c) {
        Channel ch{};
        ch.c0 = 0.5;
        for (double& a : ch.lin) a = lin(rng);
        for (double& b : ch.quad) b = quad(rng);
        coeffs_.push_back(ch);
    }
}

void SyntheticScene::evaluate(const Direction& d, double t, std::span<float> out) const {
    const Direction q = rotation_about(Direction::UnitY(), -yaw_rate_ * t) * d;
    const double x = q.x(), y = q.y(), z = q.z();
    const std::array<double, 6> m{x * x, y * y, z * z, x * y, y * z, z * x};
    for (int c = 0; c < channels_; ++c) {
        const Channel& ch = coeffs_[static_cast<std::size_t>(c)];
        double v = ch.c0 + ch.lin[0] * x + ch.lin[1] * y + ch.lin[2] * z;
        for (int i = 0; i < 6; ++i) v += ch.quad[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(c)] = static_cast<float>(v);
    }
}

CubemapFrame SyntheticScene::render_cubemap(int R, double t) const {
    CubemapFrame c(R, channels_, 0.0f, 1);
    for (Face f : kAllFaces)
        for (int row = 0; row < R; ++row)
            for (int col = 0; col < R; ++col)
                evaluate(face_pixel_direction(f, R, row, col), t,
                         std::span<float>(c.face(f).pixel(row, col), static_cast<std::size_t>(channels_)));
    return c;
}

EquirectGrid SyntheticScene::render_equirect(int W, double t) const {
    EquirectGrid e(W, channels_);
    for (int v = 0; v < W / 2; ++v)
        for (int u = 0; u < W; ++u)
            evaluate(equirect_pixel_to_direction(u, v, W), t,
                     std::span<float>(e.image.pixel(v, u), static_cast<std::size_t>(channels_)));
    return e;
}

std::vector<CameraPose> make_trajectory(const RunConfig& cfg, std::mt19937_64& rng) {
    CameraPose base;
    base.hfov_deg = cfg.hfov_deg;
    base.vfov_deg = cfg.vfov_deg;
    if (cfg.trajectory == "static-front") return std::vector<CameraPose>(static_cast<std::size_t>(cfg.N), base);
    std::vector<CameraPose> anchors;
    if (cfg.trajectory == "yaw-sweep") {
        anchors.push_back(base);
        CameraPose end = base;
        end.rotation = rotation_about(Direction::UnitY(), std::numbers::pi / 2);
        anchors.push_back(end);
    } else {
        std::uniform_real_distribution<double> yaw0(-std::numbers::pi, std::numbers::pi);
        std::uniform_real_distribution<double> dyaw(-std::numbers::pi / 2, std::numbers::pi / 2);
        std::uniform_real_distribution<double> pitch(-std::numbers::pi / 6, std::numbers::pi / 6);
        std::uniform_real_distribution<double> fov(60.0, 120.0);
        const double aspect = cfg.vfov_deg / cfg.hfov_deg;
        double yaw = yaw0(rng);
        for (int i = 0; i < cfg.anchors; ++i) {
            if (i > 0) yaw += dyaw(rng);
            CameraPose a;
            a.rotation = rotation_about(Direction::UnitY(), yaw) * rotation_about(Direction::UnitX(), -pitch(rng));
            a.hfov_deg = fov(rng);
            a.vfov_deg = std::min(179.0, a.hfov_deg * aspect);
            anchors.push_back(a);
        }
    }
    return sample_trajectory(anchors, cfg.N);
}

SceneData synth_scene(const RunConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SyntheticScene scene(rng, cfg.channels, 2.0 * kDeg);
    SceneData data{scene, {}, {}, make_trajectory(cfg, rng), {}};
    for (int t = 0; t < cfg.N; ++t) {
        data.ground_truth.push_back(scene.render_cubemap(cfg.R, t));
        const CameraPose& pose = data.poses[static_cast<std::size_t>(t)];
        data.perspective.push_back(
            render_perspective(data.ground_truth.back(), pose, cfg.perspective_width, cfg.perspective_height));
        data.conditional.push_back(project_perspective_to_cubemap(data.perspective.back(), pose, cfg.R));
    }
    return data;
}

RunInputs load_inputs(const RunConfig& cfg) {
    RunInputs in;
    if (cfg.input_frames.empty()) {
        SceneData s = synth_scene(cfg, cfg.seed);
        in.conditional = s.conditional;
        in.poses = s.poses;
        in.scene = std::move(s);
        return in;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.input_frames)) {
        const auto ext = e.path().extension();
        if (ext == ".ppm" || ext == ".pfm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    in.poses = read_poses(cfg.pose_file);
    if (static_cast<int>(files.size()) != cfg.N) throw ConfigError("input_frames", "must hold exactly N frames");
    if (static_cast<int>(in.poses.size()) != cfg.N) throw ConfigError("pose_file", "must hold exactly N poses");
    for (int t = 0; t < cfg.N; ++t) {
        const fs::path& f = files[static_cast<std::size_t>(t)];
        Image img = f.extension() == ".pfm" ? read_pfm(f) : read_ppm(f);
        if (img.channels() != cfg.channels) throw ConfigError("channels", "does not match the input frames");
        in.conditional.push_back(project_perspective_to_cubemap(img, in.poses[static_cast<std::size_t>(t)], cfg.R));
    }
    return in;
}

int run_subcommand(const std::string& name, const RunConfig& cfg, const fs::path& out) {
    cfg.validate();
    fs::create_directories(out);
    if (name == "project") return cmd_project(cfg, out);
    if (name == "plan") return cmd_plan(cfg, out);
    if (name == "context") return cmd_context(cfg, out);
    if (name == "attend-bench") return cmd_attend_bench(cfg, out);
    if (name == "generate") return cmd_generate(cfg, out);
    if (name == "metrics") return cmd_metrics(cfg, out);
    throw std::invalid_argument("unknown subcommand '" + name + "'");
}

json error_json(const std::exception& e) {
    json err = {{"message", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
        err["type"] = "config";
        err["field"] = ce->field();
    } else if (dynamic_cast<const IoError*>(&e)) {
        err["type"] = "io";
    } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
        err["type"] = "argument";
    } else {
        err["type"] = "runtime";
    }
    return {{"error", err}};
}

} // namespace cubegen
