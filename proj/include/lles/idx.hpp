// Copyright 2026 The LLES Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file idx.hpp
 * Reader and writer for the MNIST IDX container.
 *
 * images: u32be magic 0x00000803, u32be count, rows, cols, then count*rows*cols
 *         bytes in row-major order.
 * labels: u32be magic 0x00000801, u32be count, then count bytes.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lles::idx {

inline constexpr std::uint32_t images_magic = 0x00000803;
inline constexpr std::uint32_t labels_magic = 0x00000801;

struct Images {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;

    [[nodiscard]] std::size_t image_size() const noexcept {
        return static_cast<std::size_t>(rows) * cols;
    }
    [[nodiscard]] std::span<const std::uint8_t> image(std::size_t i) const {
        return std::span<const std::uint8_t>(pixels).subspan(i * image_size(), image_size());
    }
};

struct Labels {
    std::vector<std::uint8_t> labels;
};

namespace detail {

inline std::uint32_t read_u32be(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (bytes.size() < offset + 4) {
        throw FormatError("truncated IDX header");
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

inline void write_u32be(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::vector<std::uint8_t> slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open IDX file '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void dump(const std::string &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot write IDX file '" + path + "'");
    }
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace detail

inline Images parse_images(std::span<const std::uint8_t> bytes) {
    const auto magic = detail::read_u32be(bytes, 0);
    if (magic != images_magic) {
        throw FormatError("bad IDX image magic number");
    }
    Images img;
    img.count = detail::read_u32be(bytes, 4);
    img.rows = detail::read_u32be(bytes, 8);
    img.cols = detail::read_u32be(bytes, 12);
    const std::size_t body = static_cast<std::size_t>(img.count) * img.image_size();
    if (bytes.size() != 16 + body) {
        throw FormatError("IDX image payload size does not match header");
    }
    img.pixels.assign(bytes.begin() + 16, bytes.end());
    return img;
}

inline Labels parse_labels(std::span<const std::uint8_t> bytes) {
    const auto magic = detail::read_u32be(bytes, 0);
    if (magic != labels_magic) {
        throw FormatError("bad IDX label magic number");
    }
    const auto count = detail::read_u32be(bytes, 4);
    if (bytes.size() != 8 + static_cast<std::size_t>(count)) {
        throw FormatError("IDX label payload size does not match header");
    }
    return Labels{{bytes.begin() + 8, bytes.end()}};
}

inline std::vector<std::uint8_t> serialize(const Images &img) {
    if (img.pixels.size() != static_cast<std::size_t>(img.count) * img.image_size()) {
        throw FormatError("image buffer size does not match dimensions");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + img.pixels.size());
    detail::write_u32be(out, images_magic);
    detail::write_u32be(out, img.count);
    detail::write_u32be(out, img.rows);
    detail::write_u32be(out, img.cols);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

inline std::vector<std::uint8_t> serialize(const Labels &lab) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + lab.labels.size());
    detail::write_u32be(out, labels_magic);
    detail::write_u32be(out, static_cast<std::uint32_t>(lab.labels.size()));
    out.insert(out.end(), lab.labels.begin(), lab.labels.end());
    return out;
}

inline Images read_images(const std::string &path) { return parse_images(detail::slurp(path)); }
inline Labels read_labels(const std::string &path) { return parse_labels(detail::slurp(path)); }
inline void write_images(const std::string &path, const Images &img) {
    detail::dump(path, serialize(img));
}
inline void write_labels(const std::string &path, const Labels &lab) {
    detail::dump(path, serialize(lab));
}

} // namespace lles::idx
