// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cubegen/face.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cubegen {

/// Row-major, channel-interleaved float raster.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, float fill = 0.0f)
        : width_(width), height_(height), channels_(channels),
          data_(static_cast<std::size_t>(width) * height * channels, fill) {
        if (width < 1 || height < 1 || channels < 1)
            throw std::invalid_argument("Image: width, height and channels must be >= 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }

    float& at(int row, int col, int ch) { return data_[offset(row, col, ch)]; }
    float at(int row, int col, int ch) const { return data_[offset(row, col, ch)]; }

    float* pixel(int row, int col) { return data_.data() + offset(row, col, 0); }
    const float* pixel(int row, int col) const { return data_.data() + offset(row, col, 0); }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

    bool same_shape(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t offset(int row, int col, int ch) const {
        return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Square binary grid; entries are 0 or 1.
class Mask {
public:
    Mask() = default;
    explicit Mask(int size, std::uint8_t fill = 0)
        : size_(size), data_(static_cast<std::size_t>(size) * size, fill) {}

    int size() const { return size_; }
    std::uint8_t& at(int row, int col) { return data_[static_cast<std::size_t>(row) * size_ + col]; }
    std::uint8_t at(int row, int col) const { return data_[static_cast<std::size_t>(row) * size_ + col]; }
    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int size_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Six R x R faces plus their observation masks.
struct CubemapFrame {
    int resolution = 0;
    int channels = 0;
    std::array<Image, kFaceCount> faces;
    std::array<Mask, kFaceCount> masks;

    CubemapFrame() = default;
    CubemapFrame(int R, int C, float fill = 0.0f, std::uint8_t mask_fill = 0) : resolution(R), channels(C) {
        for (Face f : kAllFaces) {
            faces[index(f)] = Image(R, R, C, fill);
            masks[index(f)] = Mask(R, mask_fill);
        }
    }

    Image& face(Face f) { return faces[index(f)]; }
    const Image& face(Face f) const { return faces[index(f)]; }
    Mask& mask(Face f) { return masks[index(f)]; }
    const Mask& mask(Face f) const { return masks[index(f)]; }

    friend bool operator==(const CubemapFrame&, const CubemapFrame&) = default;
};

using CubemapVideo = std::vector<CubemapFrame>;

/// Equirectangular raster; height is exactly width / 2.
struct EquirectGrid {
    Image image;

    EquirectGrid() = default;
    EquirectGrid(int W, int C, float fill = 0.0f) : image(W, W / 2, C, fill) {
        if (W < 2 || W % 2 != 0) throw std::invalid_argument("EquirectGrid: width must be even and >= 2");
    }
    int width() const { return image.width(); }
    int height() const { return image.height(); }
};

using PerspectiveFrame = Image;

} // namespace cubegen
