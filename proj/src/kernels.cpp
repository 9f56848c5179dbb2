#include "advmark/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "advmark/parallel.hpp"

namespace advmark::kern {

namespace {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a >= 0 ? a / b : -ceil_div(-a, b);
}

// Valid output-column range for a given kernel column: 0 <= ow*stride + kw - pad < w.
inline void col_range(std::int64_t kw, std::int64_t pad, std::int64_t stride, std::int64_t w, std::int64_t wo,
                      std::int64_t& lo, std::int64_t& hi) {
    lo = std::max<std::int64_t>(0, ceil_div(pad - kw, stride));
    hi = std::min<std::int64_t>(wo, floor_div(w - 1 - kw + pad, stride) + 1);
}

// One (batch, out-channel) plane: plane accumulation in ic -> kh -> kw order.
inline void conv_fwd_plane(const real_t* in, const real_t* weight, real_t bias_v, real_t* out, const ConvDims& d,
                           std::int64_t b, std::int64_t oc) {
    const std::int64_t ho = d.out_h(), wo = d.out_w();
    for (std::int64_t i = 0; i < ho * wo; ++i) out[i] = bias_v;
    for (std::int64_t ic = 0; ic < d.cin; ++ic) {
        const real_t* in_plane = in + ((b * d.cin + ic) * d.h) * d.w;
        for (std::int64_t kh = 0; kh < d.kh; ++kh) {
            for (std::int64_t kw = 0; kw < d.kw; ++kw) {
                const real_t wv = weight[((oc * d.cin + ic) * d.kh + kh) * d.kw + kw];
                std::int64_t lo, hi;
                col_range(kw, d.pad, d.stride, d.w, wo, lo, hi);
                for (std::int64_t oh = 0; oh < ho; ++oh) {
                    const std::int64_t ih = oh * d.stride - d.pad + kh;
                    if (ih < 0 || ih >= d.h) continue;
                    const real_t* in_row = in_plane + ih * d.w - d.pad + kw;
                    real_t* out_row = out + oh * wo;
                    if (d.stride == 1) {
                        for (std::int64_t ow = lo; ow < hi; ++ow) out_row[ow] += wv * in_row[ow];
                    } else {
                        for (std::int64_t ow = lo; ow < hi; ++ow) out_row[ow] += wv * in_row[ow * d.stride];
                    }
                }
            }
        }
    }
}

inline void conv_bwd_input_plane(const real_t* gout, const real_t* weight, real_t* gin, const ConvDims& d,
                                 std::int64_t b, std::int64_t ic) {
    const std::int64_t ho = d.out_h(), wo = d.out_w();
    real_t* gin_plane = gin + ((b * d.cin + ic) * d.h) * d.w;
    for (std::int64_t i = 0; i < d.h * d.w; ++i) gin_plane[i] = 0.0;
    for (std::int64_t oc = 0; oc < d.cout; ++oc) {
        const real_t* g_plane = gout + ((b * d.cout + oc) * ho) * wo;
        for (std::int64_t kh = 0; kh < d.kh; ++kh) {
            for (std::int64_t kw = 0; kw < d.kw; ++kw) {
                const real_t wv = weight[((oc * d.cin + ic) * d.kh + kh) * d.kw + kw];
                std::int64_t lo, hi;
                col_range(kw, d.pad, d.stride, d.w, wo, lo, hi);
                for (std::int64_t oh = 0; oh < ho; ++oh) {
                    const std::int64_t ih = oh * d.stride - d.pad + kh;
                    if (ih < 0 || ih >= d.h) continue;
                    real_t* gin_row = gin_plane + ih * d.w - d.pad + kw;
                    const real_t* g_row = g_plane + oh * wo;
                    if (d.stride == 1) {
                        for (std::int64_t ow = lo; ow < hi; ++ow) gin_row[ow] += wv * g_row[ow];
                    } else {
                        for (std::int64_t ow = lo; ow < hi; ++ow) gin_row[ow * d.stride] += wv * g_row[ow];
                    }
                }
            }
        }
    }
}

inline void conv_bwd_weight_pair(const real_t* in, const real_t* gout, real_t* gweight, const ConvDims& d,
                                 std::int64_t oc, std::int64_t ic) {
    const std::int64_t ho = d.out_h(), wo = d.out_w();
    for (std::int64_t kh = 0; kh < d.kh; ++kh) {
        for (std::int64_t kw = 0; kw < d.kw; ++kw) {
            std::int64_t lo, hi;
            col_range(kw, d.pad, d.stride, d.w, wo, lo, hi);
            real_t acc = 0.0;
            for (std::int64_t b = 0; b < d.batch; ++b) {
                const real_t* in_plane = in + ((b * d.cin + ic) * d.h) * d.w;
                const real_t* g_plane = gout + ((b * d.cout + oc) * ho) * wo;
                for (std::int64_t oh = 0; oh < ho; ++oh) {
                    const std::int64_t ih = oh * d.stride - d.pad + kh;
                    if (ih < 0 || ih >= d.h) continue;
                    const real_t* in_row = in_plane + ih * d.w - d.pad + kw;
                    const real_t* g_row = g_plane + oh * wo;
                    if (d.stride == 1) {
                        for (std::int64_t ow = lo; ow < hi; ++ow) acc += g_row[ow] * in_row[ow];
                    } else {
                        for (std::int64_t ow = lo; ow < hi; ++ow) acc += g_row[ow] * in_row[ow * d.stride];
                    }
                }
            }
            gweight[((oc * d.cin + ic) * d.kh + kh) * d.kw + kw] = acc;
        }
    }
}

inline std::int64_t clamp_idx(std::int64_t i, std::int64_t n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// Horizontal then vertical pass; scratch holds the intermediate plane (h*w).
inline void blur_plane(const real_t* in, real_t* out, std::int64_t h, std::int64_t w,
                       const std::vector<real_t>& k, real_t* scratch) {
    const std::int64_t r = static_cast<std::int64_t>(k.size()) / 2;
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) {
            real_t acc = 0.0;
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(k.size()); ++t)
                acc += k[static_cast<std::size_t>(t)] * in[y * w + clamp_idx(x + t - r, w)];
            scratch[y * w + x] = acc;
        }
    }
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) {
            real_t acc = 0.0;
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(k.size()); ++t)
                acc += k[static_cast<std::size_t>(t)] * scratch[clamp_idx(y + t - r, h) * w + x];
            out[y * w + x] = acc;
        }
    }
}

// Adjoint of blur_plane: transpose the vertical pass, then the horizontal one.
inline void blur_plane_adjoint(const real_t* g, real_t* gin, std::int64_t h, std::int64_t w,
                               const std::vector<real_t>& k, real_t* scratch) {
    const std::int64_t r = static_cast<std::int64_t>(k.size()) / 2;
    for (std::int64_t i = 0; i < h * w; ++i) scratch[i] = 0.0;
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x)
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(k.size()); ++t)
                scratch[clamp_idx(y + t - r, h) * w + x] += k[static_cast<std::size_t>(t)] * g[y * w + x];
    for (std::int64_t i = 0; i < h * w; ++i) gin[i] = 0.0;
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x)
            for (std::int64_t t = 0; t < static_cast<std::int64_t>(k.size()); ++t)
                gin[y * w + clamp_idx(x + t - r, w)] += k[static_cast<std::size_t>(t)] * scratch[y * w + x];
}

inline void resize_plane(const real_t* in, real_t* out, std::int64_t h, std::int64_t w, std::int64_t oh,
                         std::int64_t owid) {
    const real_t sy = static_cast<real_t>(h) / static_cast<real_t>(oh);
    const real_t sx = static_cast<real_t>(w) / static_cast<real_t>(owid);
    for (std::int64_t y = 0; y < oh; ++y) {
        real_t fy = (static_cast<real_t>(y) + 0.5) * sy - 0.5;
        fy = std::min(std::max(fy, 0.0), static_cast<real_t>(h - 1));
        const auto y0 = static_cast<std::int64_t>(fy);
        const std::int64_t y1 = std::min(y0 + 1, h - 1);
        const real_t wy = fy - static_cast<real_t>(y0);
        for (std::int64_t x = 0; x < owid; ++x) {
            real_t fx = (static_cast<real_t>(x) + 0.5) * sx - 0.5;
            fx = std::min(std::max(fx, 0.0), static_cast<real_t>(w - 1));
            const auto x0 = static_cast<std::int64_t>(fx);
            const std::int64_t x1 = std::min(x0 + 1, w - 1);
            const real_t wx = fx - static_cast<real_t>(x0);
            out[y * owid + x] = (1.0 - wy) * ((1.0 - wx) * in[y0 * w + x0] + wx * in[y0 * w + x1]) +
                                wy * ((1.0 - wx) * in[y1 * w + x0] + wx * in[y1 * w + x1]);
        }
    }
}

inline void resize_plane_adjoint(const real_t* g, real_t* gin, std::int64_t h, std::int64_t w, std::int64_t oh,
                                 std::int64_t owid) {
    const real_t sy = static_cast<real_t>(h) / static_cast<real_t>(oh);
    const real_t sx = static_cast<real_t>(w) / static_cast<real_t>(owid);
    for (std::int64_t i = 0; i < h * w; ++i) gin[i] = 0.0;
    for (std::int64_t y = 0; y < oh; ++y) {
        real_t fy = (static_cast<real_t>(y) + 0.5) * sy - 0.5;
        fy = std::min(std::max(fy, 0.0), static_cast<real_t>(h - 1));
        const auto y0 = static_cast<std::int64_t>(fy);
        const std::int64_t y1 = std::min(y0 + 1, h - 1);
        const real_t wy = fy - static_cast<real_t>(y0);
        for (std::int64_t x = 0; x < owid; ++x) {
            real_t fx = (static_cast<real_t>(x) + 0.5) * sx - 0.5;
            fx = std::min(std::max(fx, 0.0), static_cast<real_t>(w - 1));
            const auto x0 = static_cast<std::int64_t>(fx);
            const std::int64_t x1 = std::min(x0 + 1, w - 1);
            const real_t wx = fx - static_cast<real_t>(x0);
            const real_t gv = g[y * owid + x];
            gin[y0 * w + x0] += (1.0 - wy) * (1.0 - wx) * gv;
            gin[y0 * w + x1] += (1.0 - wy) * wx * gv;
            gin[y1 * w + x0] += wy * (1.0 - wx) * gv;
            gin[y1 * w + x1] += wy * wx * gv;
        }
    }
}

inline void median_plane(const real_t* in, real_t* out, std::int64_t h, std::int64_t w, std::int64_t ksize) {
    const std::int64_t r = ksize / 2;
    real_t window[49];
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) {
            std::int64_t n = 0;
            for (std::int64_t dy = -r; dy <= r; ++dy)
                for (std::int64_t dx = -r; dx <= r; ++dx)
                    window[n++] = in[clamp_idx(y + dy, h) * w + clamp_idx(x + dx, w)];
            std::nth_element(window, window + n / 2, window + n);
            out[y * w + x] = window[n / 2];
        }
    }
}

}  // namespace

std::vector<real_t> gaussian_kernel1d(std::int64_t ksize, real_t sigma) {
    std::vector<real_t> k(static_cast<std::size_t>(ksize));
    const std::int64_t r = ksize / 2;
    real_t sum = 0.0;
    for (std::int64_t i = 0; i < ksize; ++i) {
        const real_t d = static_cast<real_t>(i - r);
        const real_t v = sigma > 0.0 ? std::exp(-0.5 * d * d / (sigma * sigma)) : (d == 0.0 ? 1.0 : 0.0);
        k[static_cast<std::size_t>(i)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

namespace par {

void conv2d_forward(const real_t* in, const real_t* weight, const real_t* bias, real_t* out, const ConvDims& d) {
    const std::int64_t ho = d.out_h(), wo = d.out_w();
    parallel_for(d.batch * d.cout, [&](std::int64_t i) {
        const std::int64_t b = i / d.cout, oc = i % d.cout;
        conv_fwd_plane(in, weight, bias ? bias[oc] : 0.0, out + i * ho * wo, d, b, oc);
    });
}

void conv2d_backward_input(const real_t* gout, const real_t* weight, real_t* gin, const ConvDims& d) {
    parallel_for(d.batch * d.cin, [&](std::int64_t i) {
        conv_bwd_input_plane(gout, weight, gin, d, i / d.cin, i % d.cin);
    });
}

void conv2d_backward_weight(const real_t* in, const real_t* gout, real_t* gweight, real_t* gbias,
                            const ConvDims& d) {
    parallel_for(d.cout * d.cin, [&](std::int64_t i) {
        conv_bwd_weight_pair(in, gout, gweight, d, i / d.cin, i % d.cin);
    });
    if (gbias != nullptr) {
        const std::int64_t ho = d.out_h(), wo = d.out_w();
        parallel_for(d.cout, [&](std::int64_t oc) {
            real_t acc = 0.0;
            for (std::int64_t b = 0; b < d.batch; ++b) {
                const real_t* g_plane = gout + ((b * d.cout + oc) * ho) * wo;
                for (std::int64_t i = 0; i < ho * wo; ++i) acc += g_plane[i];
            }
            gbias[oc] = acc;
        });
    }
}

void gaussian_blur(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   const std::vector<real_t>& kernel1d, real_t* scratch) {
    parallel_for(planes, [&](std::int64_t p) {
        blur_plane(in + p * h * w, out + p * h * w, h, w, kernel1d, scratch + p * h * w);
    });
}

void gaussian_blur_adjoint(const real_t* gout, real_t* gin, std::int64_t planes, std::int64_t h, std::int64_t w,
                           const std::vector<real_t>& kernel1d, real_t* scratch) {
    parallel_for(planes, [&](std::int64_t p) {
        blur_plane_adjoint(gout + p * h * w, gin + p * h * w, h, w, kernel1d, scratch + p * h * w);
    });
}

void bilinear_resize(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                     std::int64_t oh, std::int64_t ow) {
    parallel_for(planes, [&](std::int64_t p) { resize_plane(in + p * h * w, out + p * oh * ow, h, w, oh, ow); });
}

void bilinear_resize_adjoint(const real_t* gout, real_t* gin, std::int64_t planes, std::int64_t h, std::int64_t w,
                             std::int64_t oh, std::int64_t ow) {
    parallel_for(planes, [&](std::int64_t p) {
        resize_plane_adjoint(gout + p * oh * ow, gin + p * h * w, h, w, oh, ow);
    });
}

void median_filter(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   std::int64_t ksize) {
    parallel_for(planes, [&](std::int64_t p) { median_plane(in + p * h * w, out + p * h * w, h, w, ksize); });
}

}  // namespace par

namespace ref {

void conv2d_forward(const real_t* in, const real_t* weight, const real_t* bias, real_t* out, const ConvDims& d) {
    const std::int64_t ho = d.out_h(), wo = d.out_w();
    for (std::int64_t i = 0; i < d.batch * d.cout; ++i)
        conv_fwd_plane(in, weight, bias ? bias[i % d.cout] : 0.0, out + i * ho * wo, d, i / d.cout, i % d.cout);
}

void conv2d_backward_input(const real_t* gout, const real_t* weight, real_t* gin, const ConvDims& d) {
    for (std::int64_t i = 0; i < d.batch * d.cin; ++i)
        conv_bwd_input_plane(gout, weight, gin, d, i / d.cin, i % d.cin);
}

void conv2d_backward_weight(const real_t* in, const real_t* gout, real_t* gweight, real_t* gbias,
                            const ConvDims& d) {
    for (std::int64_t i = 0; i < d.cout * d.cin; ++i) conv_bwd_weight_pair(in, gout, gweight, d, i / d.cin, i % d.cin);
    if (gbias != nullptr) {
        const std::int64_t ho = d.out_h(), wo = d.out_w();
        for (std::int64_t oc = 0; oc < d.cout; ++oc) {
            real_t acc = 0.0;
            for (std::int64_t b = 0; b < d.batch; ++b) {
                const real_t* g_plane = gout + ((b * d.cout + oc) * ho) * wo;
                for (std::int64_t i = 0; i < ho * wo; ++i) acc += g_plane[i];
            }
            gbias[oc] = acc;
        }
    }
}

void gaussian_blur(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   const std::vector<real_t>& kernel1d, real_t* scratch) {
    for (std::int64_t p = 0; p < planes; ++p)
        blur_plane(in + p * h * w, out + p * h * w, h, w, kernel1d, scratch + p * h * w);
}

void bilinear_resize(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                     std::int64_t oh, std::int64_t ow) {
    for (std::int64_t p = 0; p < planes; ++p) resize_plane(in + p * h * w, out + p * oh * ow, h, w, oh, ow);
}

void median_filter(const real_t* in, real_t* out, std::int64_t planes, std::int64_t h, std::int64_t w,
                   std::int64_t ksize) {
    for (std::int64_t p = 0; p < planes; ++p) median_plane(in + p * h * w, out + p * h * w, h, w, ksize);
}

}  // namespace ref

}  // namespace advmark::kern
