#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "advmark/errors.hpp"
#include "advmark/rng.hpp"

namespace advmark {

using real_t = double;

// Dense row-major tensor. Images are batch x 3 x H x W with intensities in
// [0,1]; payloads are batch x L. Shape is dynamic but almost everything in the
// project is 1-, 2- or 4-dimensional.
class Tensor {
  public:
    Tensor() = default;

    explicit Tensor(std::vector<std::int64_t> shape, real_t fill = 0.0)
        : shape_(std::move(shape)), data_(checked_numel(shape_), fill) {}

    static Tensor zeros(std::vector<std::int64_t> shape) { return Tensor(std::move(shape)); }

    static Tensor full(std::vector<std::int64_t> shape, real_t v) { return Tensor(std::move(shape), v); }

    static Tensor scalar(real_t v) { return Tensor({1}, v); }

    static Tensor uniform(std::vector<std::int64_t> shape, Rng& rng, real_t lo = 0.0, real_t hi = 1.0) {
        Tensor t(std::move(shape));
        for (auto& v : t.data_) v = rng.uniform(lo, hi);
        return t;
    }

    static Tensor normal(std::vector<std::int64_t> shape, Rng& rng, real_t mean = 0.0, real_t stddev = 1.0) {
        Tensor t(std::move(shape));
        for (auto& v : t.data_) v = mean + stddev * rng.normal();
        return t;
    }

    const std::vector<std::int64_t>& shape() const { return shape_; }
    std::int64_t ndim() const { return static_cast<std::int64_t>(shape_.size()); }
    std::int64_t dim(std::int64_t i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    real_t* data() { return data_.data(); }
    const real_t* data() const { return data_.data(); }

    real_t& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    real_t operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    // 4-D convenience accessor (b, c, h, w)
    real_t& at(std::int64_t b, std::int64_t c, std::int64_t h, std::int64_t w) {
        return data_[static_cast<std::size_t>(((b * shape_[1] + c) * shape_[2] + h) * shape_[3] + w)];
    }
    real_t at(std::int64_t b, std::int64_t c, std::int64_t h, std::int64_t w) const {
        return data_[static_cast<std::size_t>(((b * shape_[1] + c) * shape_[2] + h) * shape_[3] + w)];
    }

    real_t item() const {
        if (numel() != 1) throw ShapeError("Tensor::item: tensor has " + std::to_string(numel()) + " elements");
        return data_[0];
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    Tensor reshaped(std::vector<std::int64_t> shape) const {
        Tensor t = *this;
        if (checked_numel(shape) != numel()) throw ShapeError("Tensor::reshaped: element count mismatch");
        t.shape_ = std::move(shape);
        return t;
    }

    void fill(real_t v) { std::fill(data_.begin(), data_.end(), v); }

  private:
    static std::int64_t checked_numel(const std::vector<std::int64_t>& shape) {
        std::int64_t n = 1;
        for (auto d : shape) {
            if (d <= 0) throw ShapeError("Tensor: non-positive dimension");
            n *= d;
        }
        return n;
    }

    std::vector<std::int64_t> shape_;
    std::vector<real_t> data_;
};

inline std::string shape_str(const Tensor& t) {
    std::string s = "[";
    for (std::int64_t i = 0; i < t.ndim(); ++i) {
        if (i) s += ",";
        s += std::to_string(t.dim(i));
    }
    return s + "]";
}

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* where) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(where) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
}

// Validates the image contract used across module boundaries: 4-D, 3 channels,
// spatial dims multiples of 8 (the block-based JPEG path needs full blocks).
inline void require_image(const Tensor& t, const char* where) {
    if (t.ndim() != 4 || t.dim(1) != 3)
        throw ShapeError(std::string(where) + ": expected batch x 3 x H x W, got " + shape_str(t));
    if (t.dim(2) % 8 != 0 || t.dim(3) % 8 != 0)
        throw ShapeError(std::string(where) + ": H and W must be multiples of 8, got " + shape_str(t));
}

}  // namespace advmark
