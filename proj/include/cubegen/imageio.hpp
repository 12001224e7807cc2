// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Netpbm-family image files and pose JSON.
//
//   P6  8-bit RGB, values scaled from [0,1] with rounding and clamping
//   PF  little-endian float RGB ("Pf" for one channel), bottom row first
//   P5  8-bit grayscale, used for masks with values {0, 255}

#include "cubegen/geometry.hpp"
#include "cubegen/image.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace cubegen {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_ppm(const std::filesystem::path& path, const Image& img);
Image read_ppm(const std::filesystem::path& path);

void write_pfm(const std::filesystem::path& path, const Image& img);
Image read_pfm(const std::filesystem::path& path);

void write_mask_pgm(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_pgm(const std::filesystem::path& path);

nlohmann::json pose_to_json(const CameraPose& pose);
CameraPose pose_from_json(const nlohmann::json& j);

std::vector<CameraPose> read_poses(const std::filesystem::path& path);
void write_poses(const std::filesystem::path& path, const std::vector<CameraPose>& poses);

/// Writes text atomically enough for our purposes: truncate + write.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

} // namespace cubegen
