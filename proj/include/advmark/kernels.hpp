#pragma once

#include <cstdint>
#include <vector>

#include "advmark/tensor.hpp"

namespace advmark::kern {

struct ConvDims {
    std::int64_t batch = 0, cin = 0, h = 0, w = 0;
    std::int64_t cout = 0, kh = 0, kw = 0;
    std::int64_t stride = 1, pad = 0;

    std::int64_t out_h() const { return (h + 2 * pad - kh) / stride + 1; }
    std::int64_t out_w() const { return (w + 2 * pad - kw) / stride + 1; }
};

// OpenMP kernels. Each output element is produced by exactly one thread with
// a fixed term order, so results are bit-identical to the serial references
// below for any thread count.
namespace par {

void conv2d_forward(const real_t* in, const real_t* weight, const real_t* bias, real_t* out, const ConvDims& d);
void conv2d_backward_input(const real_t* gout, const real_t* weight, real_t* gin, const ConvDims& d);
void conv2d_backward_weight(const real_t* in, const real_t* gout, real_t* gweight, real_t* gbias,
                            const ConvDims& d);

// Separable Gaussian blur with replicate border, plus its exact adjoint.
void gaussian_blur(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   const std::vector<real_t>& kernel1d, real_t* scratch);
void gaussian_blur_adjoint(const real_t* gout, real_t* gin, std::int64_t planes, std::int64_t h, std::int64_t w,
                           const std::vector<real_t>& kernel1d, real_t* scratch);

// Bilinear resample (half-pixel centers, clamped), plus its exact adjoint.
void bilinear_resize(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                     std::int64_t oh, std::int64_t ow);
void bilinear_resize_adjoint(const real_t* gout, real_t* gin, std::int64_t planes, std::int64_t h, std::int64_t w,
                             std::int64_t oh, std::int64_t ow);

// Square median filter with replicate border (ksize odd).
void median_filter(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   std::int64_t ksize);

}  // namespace par

// Serial reference implementations, kept for correctness tests and the
// kernel benchmark. Term order matches the parallel kernels exactly.
namespace ref {

void conv2d_forward(const real_t* in, const real_t* weight, const real_t* bias, real_t* out, const ConvDims& d);
void conv2d_backward_input(const real_t* gout, const real_t* weight, real_t* gin, const ConvDims& d);
void conv2d_backward_weight(const real_t* in, const real_t* gout, real_t* gweight, real_t* gbias,
                            const ConvDims& d);
void gaussian_blur(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   const std::vector<real_t>& kernel1d, real_t* scratch);
void bilinear_resize(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                     std::int64_t oh, std::int64_t ow);
void median_filter(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   std::int64_t ksize);

}  // namespace ref

std::vector<real_t> gaussian_kernel1d(std::int64_t ksize, real_t sigma);

}  // namespace advmark::kern
