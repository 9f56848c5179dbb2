#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "advmark/tensor.hpp"

namespace advmark::ag {

// Minimal reverse-mode tape. Ops build a DAG eagerly; backward() walks it in
// reverse topological order. Gradients accumulate, so callers zero parameter
// grads between steps (Adam::step does this).
struct Node;
using Var = std::shared_ptr<Node>;

struct Node {
    Tensor value;
    Tensor grad;  // allocated on first accumulation
    bool requires_grad = false;
    std::vector<Var> parents;
    std::function<void(Node&)> backward_fn;
};

Var constant(Tensor v);
Var leaf(Tensor v, bool requires_grad = true);

Tensor& ensure_grad(Node& n);
void accumulate(Node& n, const Tensor& g);

// Backpropagate from a scalar root (seeds d(root)/d(root) = 1).
void backward(const Var& root);

// --- elementwise / structural ---
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, real_t s);
Var add_const(const Var& a, const Tensor& c);
Var relu(const Var& x);
Var sigmoid(const Var& x);
Var clamp01(const Var& x);
Var concat_channels(const std::vector<Var>& xs);
Var broadcast_hw(const Var& x, std::int64_t h, std::int64_t w);  // [B,C] -> [B,C,h,w]
Var global_avg_pool(const Var& x);                               // [B,C,H,W] -> [B,C]

// out = x * (1 - mask) + base * mask  (mask and base are constants)
Var masked_blend(const Var& x, const Tensor& mask, const Tensor& base);

// forward = precomputed value, backward = identity (straight-through)
Var straight_through(const Var& x, Tensor value);

// --- neural-net primitives ---
Var conv2d(const Var& x, const Var& weight, const Var& bias, std::int64_t stride, std::int64_t pad);
Var linear(const Var& x, const Var& weight, const Var& bias);  // [B,N] x [M,N] -> [B,M]

// --- scalar losses ---
Var mean_all(const Var& x);
Var mse_loss(const Var& a, const Var& b);
// Binary cross-entropy on probabilities; probabilities are clamped to
// [eps, 1-eps] so the loss stays finite.
Var bce_loss(const Var& prob, const Tensor& target, real_t eps = 1e-7);
// mean(max(0, x-1)^2 + max(0, -x)^2): mass outside [0,1]
Var range_penalty(const Var& x);
Var weighted_sum(const std::vector<Var>& scalars, const std::vector<real_t>& weights);

// --- image distortion primitives with true gradients ---
Var gaussian_blur(const Var& x, std::int64_t ksize, real_t sigma);
Var resize_bilinear(const Var& x, std::int64_t oh, std::int64_t ow);
Var brightness(const Var& x, real_t factor);
Var contrast(const Var& x, real_t factor);
Var saturation(const Var& x, real_t factor);
// 3x3 per-pixel channel mix (used for hue rotation)
Var channel_mix(const Var& x, const std::array<real_t, 9>& m);

}  // namespace advmark::ag
