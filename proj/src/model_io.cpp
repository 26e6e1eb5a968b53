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

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "autolabel/pixel_classifier.hpp"

namespace autolabel {

namespace {

constexpr char kMagic[4] = {'A', 'L', 'M', 'D'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void f64(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int s = 0; s < 64; s += 8) out_.push_back(static_cast<std::uint8_t>(bits >> s));
    }
    void block(const std::vector<double>& v) {
        for (double x : v) f64(x);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw Error("model record truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int s = 0; s < 4; ++s) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * s);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int s = 0; s < 8; ++s) bits |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * s);
        return std::bit_cast<double>(bits);
    }
    std::string text(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::vector<double> block(std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) x = f64();
        return v;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
    model.validate();
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(model.classes));
    w.u32(static_cast<std::uint32_t>(model.features));
    w.u32(static_cast<std::uint32_t>(model.image_classes));
    const std::string id = model.feature_spec.id();
    w.u32(static_cast<std::uint32_t>(id.size()));
    w.bytes(id.data(), id.size());
    w.block(model.pixel_weights);
    w.block(model.pixel_bias);
    w.block(model.gap_weights);
    w.block(model.gap_bias);
    return w.take();
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    if (r.text(4) != std::string(kMagic, 4)) throw Error("not a model file (bad magic)");
    if (const auto version = r.u32(); version != kFormatVersion) {
        throw Error("unsupported model format version " + std::to_string(version));
    }
    Model m;
    m.classes = static_cast<int>(r.u32());
    m.features = static_cast<int>(r.u32());
    m.image_classes = static_cast<int>(r.u32());
    const auto id_len = r.u32();
    if (id_len > 256) throw Error("model feature spec identifier too long");
    m.feature_spec = FeatureSpec::from_id(r.text(id_len));
    if (m.classes < 1 || m.classes > 255 || m.features != FeatureSpec::kChannels ||
        m.image_classes < 0 || m.image_classes > 255) {
        throw Error("model header has inconsistent C/F");
    }
    const auto C = static_cast<std::size_t>(m.classes);
    const auto F = static_cast<std::size_t>(m.features);
    const auto Ci = static_cast<std::size_t>(m.image_classes);
    m.pixel_weights = r.block(C * F);
    m.pixel_bias = r.block(C);
    m.gap_weights = r.block(Ci * F);
    m.gap_bias = r.block(Ci);
    if (!r.done()) throw Error("trailing bytes after model record");
    m.validate();
    return m;
}

void save_model(const Model& model, const std::filesystem::path& path) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace autolabel
