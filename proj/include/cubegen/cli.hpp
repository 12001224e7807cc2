// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Run configuration, synthetic scenes and subcommand dispatch.

#include "cubegen/geometry.hpp"
#include "cubegen/image.hpp"
#include "cubegen/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubegen {

/// Invalid configuration field. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& constraint)
        : std::invalid_argument(field + ": " + constraint), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    int R = 64;
    int W = 256;
    int N = 8;
    int T_win = 4;
    int H = 2;
    int T_frag = 4;
    double r = 0.5;
    int K = 8;
    int p = 4;
    int p_s = 8;
    int S = 4;
    std::uint64_t seed = 0;
    int channels = 3;

    // Empty input_frames selects the synthetic scene.
    std::string input_frames;
    std::string pose_file;
    std::string output_dir = "out";

    bool teacher_forcing = false;
    std::string denoiser = "oracle"; // oracle | copy | zero

    std::string preset = "desk"; // desk | paper-geometry
    bool allocate = false;       // paper-geometry only: run for real instead of a dry run

    std::string trajectory = "static-front"; // static-front | yaw-sweep | protocol
    int anchors = 4;                         // protocol only
    double hfov_deg = 90.0;
    double vfov_deg = 45.0;
    int perspective_width = 128;
    int perspective_height = 64;

    int bench_G = 64;
    int bench_d = 32;
    std::vector<int> bench_contexts{64, 128, 256, 512, 1024, 2048, 4096};

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
    bool dry_run() const { return preset == "paper-geometry" && !allocate; }

    nlohmann::json to_json() const;
    /// Unknown keys are rejected. A preset key applies its values first;
    /// explicit keys override them.
    static RunConfig from_json(const nlohmann::json& j);

    PipelineConfig pipeline() const;
};

RunConfig parse_config(const std::filesystem::path& path);

/// Smooth spherical field: a quadratic polynomial in the components of the
/// direction, seen through a yaw that advances with time.
class SyntheticScene {
public:
    SyntheticScene(std::mt19937_64& rng, int channels, double yaw_per_frame_rad);

    int channels() const { return channels_; }
    void evaluate(const Direction& d, double t, std::span<float> out) const;

    CubemapFrame render_cubemap(int R, double t) const; // masks all 1
    EquirectGrid render_equirect(int W, double t) const;

private:
    struct Channel {
        double c0;
        std::array<double, 3> lin;
        std::array<double, 6> quad; // xx yy zz xy yz zx
    };

    int channels_;
    double yaw_rate_;
    std::vector<Channel> coeffs_;
};

struct SceneData {
    SyntheticScene scene;
    CubemapVideo ground_truth;
    std::vector<PerspectiveFrame> perspective;
    std::vector<CameraPose> poses;
    CubemapVideo conditional;
};

/// Camera path for the configured trajectory kind.
std::vector<CameraPose> make_trajectory(const RunConfig& cfg, std::mt19937_64& rng);

/// Deterministic scene, trajectory, perspective video and masked conditional
/// cubemaps. All randomness comes from one generator seeded with `seed`.
SceneData synth_scene(const RunConfig& cfg, std::uint64_t seed);

/// Frame-aligned input: either the synthetic scene or frames read from disk.
struct RunInputs {
    CubemapVideo conditional;
    std::vector<CameraPose> poses;
    std::optional<SceneData> scene; // synthetic only
};

RunInputs load_inputs(const RunConfig& cfg);

/// Dispatches one subcommand and writes its artifacts under `out`.
/// Returns the process exit status; errors propagate as exceptions.
int run_subcommand(const std::string& name, const RunConfig& cfg, const std::filesystem::path& out);

/// Machine-readable error object for stderr.
nlohmann::json error_json(const std::exception& e);

} // namespace cubegen
