// Copyright 2026 The autolabel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "autolabel/error.hpp"

namespace autolabel {

/// Single-channel h x w grid of doubles, row-major.
class Plane {
public:
    Plane() = default;
    Plane(int height, int width, double fill = 0.0);
    Plane(int height, int width, std::vector<double> values);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double& operator()(int i, int j) { return values_[index(i, j)]; }
    double operator()(int i, int j) const { return values_[index(i, j)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool same_shape(const Plane& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(j);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> values_;
};

/// RGB image: three planes of equal size with values in [0,1].
class Image {
public:
    Image() = default;
    Image(int height, int width, double fill = 0.0);
    explicit Image(std::array<Plane, 3> channels);

    int height() const { return channels_[0].height(); }
    int width() const { return channels_[0].width(); }

    Plane& channel(int c) { return channels_.at(static_cast<std::size_t>(c)); }
    const Plane& channel(int c) const { return channels_.at(static_cast<std::size_t>(c)); }

    void set_pixel(int i, int j, double r, double g, double b);

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::array<Plane, 3> channels_;
};

/// Grid of class identifiers; 0 is background.
class Mask {
public:
    Mask() = default;
    Mask(int height, int width, std::uint8_t fill = 0);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return ids_.size(); }

    std::uint8_t& operator()(int i, int j) { return ids_[index(i, j)]; }
    std::uint8_t operator()(int i, int j) const { return ids_[index(i, j)]; }

    std::span<std::uint8_t> ids() { return ids_; }
    std::span<const std::uint8_t> ids() const { return ids_; }

    bool same_shape(const Mask& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(j);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> ids_;
};

/// Per-pixel class distribution: one plane per class.
struct ProbMap {
    std::vector<Plane> channels;

    int classes() const { return static_cast<int>(channels.size()); }
    int height() const { return channels.empty() ? 0 : channels.front().height(); }
    int width() const { return channels.empty() ? 0 : channels.front().width(); }
};

/// Summed-area table with a zero top row and left column.
class IntegralPlane {
public:
    explicit IntegralPlane(const Plane& source);

    int height() const { return height_; }
    int width() const { return width_; }

    /// Cumulative sum of source rows < i and columns < j.
    double at(int i, int j) const {
        return sums_[static_cast<std::size_t>(i) * static_cast<std::size_t>(width_ + 1) +
                     static_cast<std::size_t>(j)];
    }

    /// Sum over the half-open window [top, bottom) x [left, right).
    double window_sum(int top, int left, int bottom, int right) const {
        return at(bottom, right) - at(top, right) - at(bottom, left) + at(top, left);
    }

private:
    int height_;
    int width_;
    std::vector<double> sums_;
};

// ---------------------------------------------------------------------------
// Netpbm I/O

enum class PnmErrorKind { UnsupportedFormat, MalformedHeader, UnsupportedMaxval, TruncatedPayload };

class PnmError : public Error {
public:
    PnmError(PnmErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    PnmErrorKind kind() const { return kind_; }

private:
    PnmErrorKind kind_;
};

using PnmContent = std::variant<Plane, Image>;

/// Reads binary P5 (Plane) or P6 (Image) with maxval 255; values are byte/255.
PnmContent load_pnm(const std::filesystem::path& path);
Plane load_pgm(const std::filesystem::path& path);
Image load_ppm(const std::filesystem::path& path);

/// Values are quantized with round(v * 255) after clamping to [0,1].
void save_pnm(const Plane& plane, const std::filesystem::path& path);
void save_pnm(const Image& image, const std::filesystem::path& path);

/// Masks are stored as P5 with the class id written directly into each byte.
Mask load_mask(const std::filesystem::path& path);
void save_mask(const Mask& mask, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Pixel operations

std::uint8_t quantize_byte(double v);

Plane to_grayscale(const Image& img);
IntegralPlane integral(const Plane& p);

/// Mean over the (2r+1)^2 window clipped to the image; divisor is the
/// in-bounds count.
Plane box_mean(const Plane& p, int radius);

/// Number of in-bounds pixels in each clipped (2r+1)^2 window.
Plane window_counts(int height, int width, int radius);

// Elementwise helpers used throughout the pipeline.
Plane operator+(const Plane& a, const Plane& b);
Plane operator-(const Plane& a, const Plane& b);
Plane operator*(const Plane& a, const Plane& b);
Plane operator*(double s, const Plane& a);
Plane operator+(const Plane& a, double c);
Plane operator-(const Plane& a);

void require_same_shape(const Plane& a, const Plane& b, const char* what);

}  // namespace autolabel
