// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/imageio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace cubegen {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    return is;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& is) {
    std::string tok;
    char ch;
    while (is.get(ch)) {
        if (ch == '#') {
            std::string discard;
            std::getline(is, discard);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(ch);
    }
    if (tok.empty()) throw IoError("truncated netpbm header");
    return tok;
}

int header_int(std::istream& is) {
    const std::string tok = header_token(is);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw IoError("bad netpbm header field: " + tok);
    }
}

struct Header {
    std::string magic;
    int width;
    int height;
};

Header read_header(std::istream& is, bool has_maxval, int expected_maxval) {
    Header h;
    h.magic = header_token(is);
    h.width = header_int(is);
    h.height = header_int(is);
    if (h.width < 1 || h.height < 1) throw IoError("netpbm dimensions must be positive");
    if (has_maxval) {
        const int maxval = header_int(is);
        if (maxval != expected_maxval) throw IoError("only 8-bit netpbm files are supported");
    }
    return h;
}

std::uint8_t to_byte(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

} // namespace

void write_ppm(const std::filesystem::path& path, const Image& img) {
    if (img.channels() != 3) throw IoError("P6 output needs 3 channels");
    auto os = open_out(path);
    os << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::vector<std::uint8_t> bytes(img.data().size());
    std::transform(img.data().begin(), img.data().end(), bytes.begin(), to_byte);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Image read_ppm(const std::filesystem::path& path) {
    auto is = open_in(path);
    const Header h = read_header(is, true, 255);
    if (h.magic != "P6") throw IoError("not a P6 file: " + path.string());
    Image img(h.width, h.height, 3);
    std::vector<std::uint8_t> bytes(img.data().size());
    if (!is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw IoError("truncated P6 payload: " + path.string());
    std::transform(bytes.begin(), bytes.end(), img.data().begin(), [](std::uint8_t b) { return b / 255.0f; });
    return img;
}

void write_pfm(const std::filesystem::path& path, const Image& img) {
    if (img.channels() != 3 && img.channels() != 1) throw IoError("PFM needs 1 or 3 channels");
    auto os = open_out(path);
    os << (img.channels() == 3 ? "PF\n" : "Pf\n") << img.width() << ' ' << img.height() << "\n-1.0\n";
    const std::size_t row_len = static_cast<std::size_t>(img.width()) * img.channels();
    std::vector<std::uint32_t> row(row_len);
    for (int r = img.height() - 1; r >= 0; --r) {
        const float* src = img.pixel(r, 0);
        for (std::size_t k = 0; k < row_len; ++k) {
            std::uint32_t bits = std::bit_cast<std::uint32_t>(src[k]);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
            row[k] = bits;
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row_len * 4));
    }
}

Image read_pfm(const std::filesystem::path& path) {
    auto is = open_in(path);
    const Header h = read_header(is, false, 0);
    int channels;
    if (h.magic == "PF")
        channels = 3;
    else if (h.magic == "Pf")
        channels = 1;
    else
        throw IoError("not a PFM file: " + path.string());
    const std::string scale_tok = header_token(is);
    const double scale = std::stod(scale_tok);
    const bool little = scale < 0.0;
    Image img(h.width, h.height, channels);
    const std::size_t row_len = static_cast<std::size_t>(h.width) * channels;
    std::vector<std::uint32_t> row(row_len);
    for (int r = h.height - 1; r >= 0; --r) {
        if (!is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_len * 4)))
            throw IoError("truncated PFM payload: " + path.string());
        float* dst = img.pixel(r, 0);
        const bool swap = little != (std::endian::native == std::endian::little);
        for (std::size_t k = 0; k < row_len; ++k)
            dst[k] = std::bit_cast<float>(swap ? __builtin_bswap32(row[k]) : row[k]);
    }
    return img;
}

void write_mask_pgm(const std::filesystem::path& path, const Mask& mask) {
    auto os = open_out(path);
    os << "P5\n" << mask.size() << ' ' << mask.size() << "\n255\n";
    std::vector<std::uint8_t> bytes(mask.data().size());
    std::transform(mask.data().begin(), mask.data().end(), bytes.begin(),
                   [](std::uint8_t m) { return static_cast<std::uint8_t>(m ? 255 : 0); });
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Mask read_mask_pgm(const std::filesystem::path& path) {
    auto is = open_in(path);
    const Header h = read_header(is, true, 255);
    if (h.magic != "P5") throw IoError("not a P5 file: " + path.string());
    if (h.width != h.height) throw IoError("mask must be square: " + path.string());
    Mask m(h.width);
    std::vector<std::uint8_t> bytes(m.data().size());
    if (!is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw IoError("truncated P5 payload: " + path.string());
    // Binarize at half range.
    std::transform(bytes.begin(), bytes.end(), m.data().begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(b >= 128 ? 1 : 0); });
    return m;
}

nlohmann::json pose_to_json(const CameraPose& pose) {
    nlohmann::json rot = nlohmann::json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rot.push_back(pose.rotation(r, c));
    return {{"rotation", rot}, {"hfov_deg", pose.hfov_deg}, {"vfov_deg", pose.vfov_deg}};
}

CameraPose pose_from_json(const nlohmann::json& j) {
    CameraPose p;
    const auto& rot = j.at("rotation");
    if (!rot.is_array() || rot.size() != 9) throw std::invalid_argument("pose rotation must have 9 numbers");
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) p.rotation(r, c) = rot.at(r * 3 + c).get<double>();
    p.hfov_deg = j.at("hfov_deg").get<double>();
    p.vfov_deg = j.at("vfov_deg").get<double>();
    p.validate();
    return p;
}

std::vector<CameraPose> read_poses(const std::filesystem::path& path) {
    const nlohmann::json j = nlohmann::json::parse(read_text(path));
    std::vector<CameraPose> out;
    for (const auto& item : j) out.push_back(pose_from_json(item));
    return out;
}

void write_poses(const std::filesystem::path& path, const std::vector<CameraPose>& poses) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : poses) j.push_back(pose_to_json(p));
    write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto os = open_out(path);
    os << text;
}

std::string read_text(const std::filesystem::path& path) {
    auto is = open_in(path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace cubegen
