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

#include "autolabel/image_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace autolabel {

namespace {

void check_dims(int height, int width) {
    if (height < 1 || width < 1) {
        throw InvalidArgument("raster dimensions must be positive, got " +
                              std::to_string(height) + "x" + std::to_string(width));
    }
}

struct PnmHeader {
    char kind = 0;  // '5' or '6'
    int width = 0;
    int height = 0;
};

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::string& data, std::size_t& pos) {
    while (pos < data.size()) {
        const auto c = static_cast<unsigned char>(data[pos]);
        if (std::isspace(c)) {
            ++pos;
        } else if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) {
        token.push_back(data[pos++]);
    }
    return token;
}

int parse_positive(const std::string& token, const std::filesystem::path& path,
                   const char* field) {
    if (token.empty() || !std::all_of(token.begin(), token.end(),
                                      [](unsigned char c) { return std::isdigit(c); })) {
        throw PnmError(PnmErrorKind::MalformedHeader,
                       path.string() + ": malformed " + field + " '" + token + "'");
    }
    if (token.size() > 9) {
        throw PnmError(PnmErrorKind::MalformedHeader, path.string() + ": " + field + " too large");
    }
    return std::stoi(token);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Parses the header and returns the payload offset.
std::size_t parse_header(const std::string& data, const std::filesystem::path& path,
                         PnmHeader& header) {
    std::size_t pos = 0;
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
        throw PnmError(PnmErrorKind::UnsupportedFormat,
                       path.string() + ": unsupported format (expected P5 or P6)");
    }
    header.kind = data[1];
    pos = 2;
    if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
        throw PnmError(PnmErrorKind::UnsupportedFormat,
                       path.string() + ": unsupported format (expected P5 or P6)");
    }
    header.width = parse_positive(next_token(data, pos), path, "width");
    header.height = parse_positive(next_token(data, pos), path, "height");
    const std::string maxval_token = next_token(data, pos);
    const int maxval = parse_positive(maxval_token, path, "maxval");
    if (header.width < 1 || header.height < 1) {
        throw PnmError(PnmErrorKind::MalformedHeader, path.string() + ": zero dimension");
    }
    if (maxval != 255) {
        throw PnmError(PnmErrorKind::UnsupportedMaxval,
                       path.string() + ": unsupported maxval " + maxval_token);
    }
    // Exactly one whitespace byte separates the header from the payload.
    if (pos >= data.size()) {
        throw PnmError(PnmErrorKind::TruncatedPayload, path.string() + ": missing payload");
    }
    return pos + 1;
}

std::string header_text(char kind, int height, int width) {
    std::ostringstream out;
    out << 'P' << kind << '\n' << width << ' ' << height << "\n255\n";
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& header,
                const std::vector<unsigned char>& payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

template <typename Op>
Plane zip(const Plane& a, const Plane& b, Op op) {
    require_same_shape(a, b, "elementwise operation");
    Plane out(a.height(), a.width());
    auto av = a.values();
    auto bv = b.values();
    auto ov = out.values();
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = op(av[k], bv[k]);
    return out;
}

template <typename Op>
Plane map(const Plane& a, Op op) {
    Plane out(a.height(), a.width());
    auto av = a.values();
    auto ov = out.values();
    for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = op(av[k]);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Plane::Plane(int height, int width, double fill) : height_(height), width_(width) {
    check_dims(height, width);
    values_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Plane::Plane(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
    check_dims(height, width);
    if (values_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw DimensionMismatch("plane value count does not match " + std::to_string(height) +
                                "x" + std::to_string(width));
    }
}

Image::Image(int height, int width, double fill)
    : channels_{Plane(height, width, fill), Plane(height, width, fill),
                Plane(height, width, fill)} {}

Image::Image(std::array<Plane, 3> channels) : channels_(std::move(channels)) {
    if (!channels_[0].same_shape(channels_[1]) || !channels_[0].same_shape(channels_[2])) {
        throw DimensionMismatch("image channels differ in size");
    }
}

void Image::set_pixel(int i, int j, double r, double g, double b) {
    channels_[0](i, j) = r;
    channels_[1](i, j) = g;
    channels_[2](i, j) = b;
}

Mask::Mask(int height, int width, std::uint8_t fill) : height_(height), width_(width) {
    check_dims(height, width);
    ids_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

IntegralPlane::IntegralPlane(const Plane& source)
    : height_(source.height()), width_(source.width()) {
    const auto stride = static_cast<std::size_t>(width_ + 1);
    sums_.assign(static_cast<std::size_t>(height_ + 1) * stride, 0.0);
    for (int i = 0; i < height_; ++i) {
        double row = 0.0;
        for (int j = 0; j < width_; ++j) {
            row += source(i, j);
            sums_[static_cast<std::size_t>(i + 1) * stride + static_cast<std::size_t>(j + 1)] =
                sums_[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j + 1)] + row;
        }
    }
}

// ---------------------------------------------------------------------------

PnmContent load_pnm(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    PnmHeader header;
    const std::size_t offset = parse_header(data, path, header);
    const int channels = header.kind == '5' ? 1 : 3;
    const std::size_t pixels =
        static_cast<std::size_t>(header.width) * static_cast<std::size_t>(header.height);
    if (data.size() - offset < pixels * static_cast<std::size_t>(channels)) {
        throw PnmError(PnmErrorKind::TruncatedPayload,
                       path.string() + ": truncated payload (expected " +
                           std::to_string(pixels * static_cast<std::size_t>(channels)) +
                           " bytes, found " + std::to_string(data.size() - offset) + ")");
    }
    auto byte = [&](std::size_t k) {
        return static_cast<double>(static_cast<unsigned char>(data[offset + k])) / 255.0;
    };
    if (channels == 1) {
        std::vector<double> values(pixels);
        for (std::size_t k = 0; k < pixels; ++k) values[k] = byte(k);
        return Plane(header.height, header.width, std::move(values));
    }
    Image img(header.height, header.width);
    for (int c = 0; c < 3; ++c) {
        auto v = img.channel(c).values();
        for (std::size_t k = 0; k < pixels; ++k) v[k] = byte(3 * k + static_cast<std::size_t>(c));
    }
    return img;
}

Plane load_pgm(const std::filesystem::path& path) {
    auto content = load_pnm(path);
    if (auto* p = std::get_if<Plane>(&content)) return std::move(*p);
    throw PnmError(PnmErrorKind::UnsupportedFormat, path.string() + ": expected P5 (PGM)");
}

Image load_ppm(const std::filesystem::path& path) {
    auto content = load_pnm(path);
    if (auto* img = std::get_if<Image>(&content)) return std::move(*img);
    throw PnmError(PnmErrorKind::UnsupportedFormat, path.string() + ": expected P6 (PPM)");
}

void save_pnm(const Plane& plane, const std::filesystem::path& path) {
    std::vector<unsigned char> payload(plane.size());
    auto v = plane.values();
    for (std::size_t k = 0; k < payload.size(); ++k) payload[k] = quantize_byte(v[k]);
    write_file(path, header_text('5', plane.height(), plane.width()), payload);
}

void save_pnm(const Image& image, const std::filesystem::path& path) {
    const std::size_t pixels = image.channel(0).size();
    std::vector<unsigned char> payload(3 * pixels);
    for (int c = 0; c < 3; ++c) {
        auto v = image.channel(c).values();
        for (std::size_t k = 0; k < pixels; ++k) {
            payload[3 * k + static_cast<std::size_t>(c)] = quantize_byte(v[k]);
        }
    }
    write_file(path, header_text('6', image.height(), image.width()), payload);
}

Mask load_mask(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    PnmHeader header;
    const std::size_t offset = parse_header(data, path, header);
    if (header.kind != '5') {
        throw PnmError(PnmErrorKind::UnsupportedFormat, path.string() + ": masks must be P5");
    }
    Mask mask(header.height, header.width);
    if (data.size() - offset < mask.size()) {
        throw PnmError(PnmErrorKind::TruncatedPayload, path.string() + ": truncated payload");
    }
    auto ids = mask.ids();
    for (std::size_t k = 0; k < ids.size(); ++k) {
        ids[k] = static_cast<std::uint8_t>(data[offset + k]);
    }
    return mask;
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
    auto ids = mask.ids();
    for (auto id : ids) {
        if (id == 255) throw InvalidArgument("mask class id 255 is reserved");
    }
    write_file(path, header_text('5', mask.height(), mask.width()),
               std::vector<unsigned char>(ids.begin(), ids.end()));
}

// ---------------------------------------------------------------------------

std::uint8_t quantize_byte(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

Plane to_grayscale(const Image& img) {
    const auto r = img.channel(0).values();
    const auto g = img.channel(1).values();
    const auto b = img.channel(2).values();
    Plane out(img.height(), img.width());
    auto o = out.values();
    for (std::size_t k = 0; k < o.size(); ++k) {
        o[k] = std::clamp(0.299 * r[k] + 0.587 * g[k] + 0.114 * b[k], 0.0, 1.0);
    }
    return out;
}

IntegralPlane integral(const Plane& p) { return IntegralPlane(p); }

Plane box_mean(const Plane& p, int radius) {
    if (radius < 0) throw InvalidArgument("box_mean radius must be >= 0");
    if (radius == 0) return p;

    const int h = p.height();
    const int w = p.width();
    const IntegralPlane table(p);
    const auto [lo, hi] = std::minmax_element(p.values().begin(), p.values().end());
    const double vmin = *lo;
    const double vmax = *hi;

    Plane out(h, w);
    for (int i = 0; i < h; ++i) {
        const int top = std::max(0, i - radius);
        const int bottom = std::min(h, i + radius + 1);
        for (int j = 0; j < w; ++j) {
            const int left = std::max(0, j - radius);
            const int right = std::min(w, j + radius + 1);
            const double count = static_cast<double>((bottom - top) * (right - left));
            // The 4-corner difference can drift by a few ulps; keep the mean
            // inside the input range.
            out(i, j) = std::clamp(table.window_sum(top, left, bottom, right) / count, vmin, vmax);
        }
    }
    return out;
}

Plane window_counts(int height, int width, int radius) {
    Plane out(height, width);
    for (int i = 0; i < height; ++i) {
        const int rows = std::min(height, i + radius + 1) - std::max(0, i - radius);
        for (int j = 0; j < width; ++j) {
            const int cols = std::min(width, j + radius + 1) - std::max(0, j - radius);
            out(i, j) = static_cast<double>(rows * cols);
        }
    }
    return out;
}

void require_same_shape(const Plane& a, const Plane& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.height()) + "x" +
                                std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                                "x" + std::to_string(b.width()));
    }
}

Plane operator+(const Plane& a, const Plane& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}
Plane operator-(const Plane& a, const Plane& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}
Plane operator*(const Plane& a, const Plane& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}
Plane operator*(double s, const Plane& a) {
    return map(a, [s](double x) { return s * x; });
}
Plane operator+(const Plane& a, double c) {
    return map(a, [c](double x) { return x + c; });
}
Plane operator-(const Plane& a) {
    return map(a, [](double x) { return -x; });
}

}  // namespace autolabel
