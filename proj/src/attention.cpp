// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/attention.hpp"

#include "cubegen/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cubegen {

TokenLayout TokenLayout::simple(int generation, int context) {
    TokenLayout l;
    l.generation = generation;
    l.context = context;
    if (context > 0) l.segments.push_back({0, context, "context"});
    return l;
}

void TokenLayout::validate() const {
    if (generation < 0 || context < 0) throw std::invalid_argument("TokenLayout: negative token count");
    int next = 0;
    for (const TokenSegment& s : segments) {
        if (s.offset != next || s.length < 0)
            throw std::invalid_argument("TokenLayout: segments must be contiguous from 0");
        next += s.length;
    }
    if (next != context) throw std::invalid_argument("TokenLayout: segment lengths must sum to C");
}

ContextMask::ContextMask(int generation, int context, BandedMaskSpec spec)
    : generation_(generation), context_(context), spec_(spec) {
    if (spec.bandwidth < 1) throw std::invalid_argument("BandedMaskSpec: bandwidth must be >= 1");
}

bool ContextMask::operator()(int q, int k) const {
    const bool q_gen = q < generation_;
    const bool k_gen = k < generation_;
    if (q_gen) return k_gen || spec_.generation_reads_context;
    if (k_gen) return true;
    return std::abs(q - k) <= spec_.bandwidth;
}

std::int64_t ContextMask::allowed_pairs() const {
    const std::int64_t G = generation_;
    const std::int64_t C = context_;
    const std::int64_t K = spec_.bandwidth;
    std::int64_t band = 0;
    for (std::int64_t i = 0; i < C; ++i) band += std::min(C - 1, i + K) - std::max<std::int64_t>(0, i - K) + 1;
    const std::int64_t gen_rows = G * (spec_.generation_reads_context ? G + C : G);
    return gen_rows + C * G + band;
}

ContextMask build_context_mask(const TokenLayout& layout, const BandedMaskSpec& spec) {
    layout.validate();
    return ContextMask(layout.generation, layout.context, spec);
}

template <typename T>
AttentionInputs<T>::AttentionInputs(int heads_, int tokens_, int dim_)
    : heads(heads_), tokens(tokens_), dim(dim_) {
    const std::size_t n = static_cast<std::size_t>(heads) * tokens * dim;
    queries.assign(n, T(0));
    keys.assign(n, T(0));
    values.assign(n, T(0));
}

template <typename T>
void AttentionInputs<T>::validate() const {
    if (heads < 1 || tokens < 0 || dim < 1) throw std::invalid_argument("AttentionInputs: bad shape");
    const std::size_t n = static_cast<std::size_t>(heads) * tokens * dim;
    if (queries.size() != n || keys.size() != n || values.size() != n)
        throw std::invalid_argument("AttentionInputs: q, k, v must all hold heads * tokens * dim values");
}

template struct AttentionInputs<float>;
template struct AttentionInputs<double>;

namespace {

// Softmax over scores[0..n) in place, returns the normaliser. Entries equal to
// -inf stay exactly zero.
template <typename T>
T softmax_in_place(T* scores, std::size_t n) {
    T m = -std::numeric_limits<T>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, scores[i]);
    T sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = std::isinf(scores[i]) ? T(0) : std::exp(scores[i] - m);
        sum += scores[i];
    }
    return sum;
}

template <typename T>
void check_rows(const AttentionInputs<T>& inp, const MaskPredicate& mask) {
    for (int q = 0; q < inp.tokens; ++q) {
        bool any = false;
        for (int k = 0; k < inp.tokens && !any; ++k) any = mask(q, k);
        if (!any) throw std::invalid_argument("attention: query row " + std::to_string(q) + " has no allowed keys");
    }
}

template <typename T>
void dense_scores(const AttentionInputs<T>& inp, const MaskPredicate& mask, int h, std::vector<T>& scores) {
    const int n = inp.tokens;
    const std::size_t d = static_cast<std::size_t>(inp.dim);
    const T inv_sqrt_d = T(1) / std::sqrt(static_cast<T>(inp.dim));
    scores.assign(static_cast<std::size_t>(n) * n, T(0));
    for (int q = 0; q < n; ++q) {
        T* row = scores.data() + static_cast<std::size_t>(q) * n;
        for (int k = 0; k < n; ++k) {
            const T s = simd::dot(inp.q(h, q), inp.k(h, k), d) * inv_sqrt_d;
            row[k] = mask(q, k) ? s : -std::numeric_limits<T>::infinity();
        }
    }
}

} // namespace

template <typename T>
std::vector<T> dense_attention_weights(const AttentionInputs<T>& inp, const MaskPredicate& mask, int head) {
    inp.validate();
    check_rows(inp, mask);
    std::vector<T> scores;
    dense_scores(inp, mask, head, scores);
    const std::size_t n = static_cast<std::size_t>(inp.tokens);
    for (std::size_t q = 0; q < n; ++q) {
        T* row = scores.data() + q * n;
        const T sum = softmax_in_place(row, n);
        for (std::size_t k = 0; k < n; ++k) row[k] /= sum;
    }
    return scores;
}

template <typename T>
std::vector<T> dense_masked_attention(const AttentionInputs<T>& inp, const MaskPredicate& mask) {
    inp.validate();
    check_rows(inp, mask);
    const int n = inp.tokens;
    const std::size_t d = static_cast<std::size_t>(inp.dim);
    std::vector<T> out(inp.queries.size(), T(0));
    std::vector<T> scores;
    for (int h = 0; h < inp.heads; ++h) {
        dense_scores(inp, mask, h, scores);
        for (int q = 0; q < n; ++q) {
            T* row = scores.data() + static_cast<std::size_t>(q) * n;
            const T sum = softmax_in_place(row, static_cast<std::size_t>(n));
            T* o = out.data() + (static_cast<std::size_t>(h) * n + q) * d;
            for (int k = 0; k < n; ++k) simd::axpy(row[k], inp.v(h, k), o, d);
            simd::scale(T(1) / sum, o, d);
        }
    }
    return out;
}

template <typename T>
std::vector<T> sparse_context_attention(const AttentionInputs<T>& inp, const TokenLayout& layout,
                                        const BandedMaskSpec& spec) {
    inp.validate();
    layout.validate();
    if (layout.total() != inp.tokens) throw std::invalid_argument("sparse_context_attention: layout/input length mismatch");
    if (spec.bandwidth < 1) throw std::invalid_argument("BandedMaskSpec: bandwidth must be >= 1");
    const int G = layout.generation;
    const int n = inp.tokens;
    const int K = spec.bandwidth;
    const std::size_t d = static_cast<std::size_t>(inp.dim);
    const T inv_sqrt_d = T(1) / std::sqrt(static_cast<T>(inp.dim));

    std::vector<T> out(inp.queries.size(), T(0));
    std::vector<T> scores(static_cast<std::size_t>(std::max(n, 1)));
    // Key ranges per row: [0, a_end) then [b_begin, b_end).
    for (int h = 0; h < inp.heads; ++h) {
        for (int q = 0; q < n; ++q) {
            int a_end, b_begin, b_end;
            if (q < G) {
                a_end = spec.generation_reads_context ? n : G;
                b_begin = b_end = a_end;
            } else {
                a_end = G;
                b_begin = std::max(G, q - K);
                b_end = std::min(n, q + K + 1);
            }
            const std::size_t count = static_cast<std::size_t>(a_end + (b_end - b_begin));
            if (count == 0)
                throw std::invalid_argument("attention: query row " + std::to_string(q) + " has no allowed keys");
            const T* qv = inp.q(h, q);
            std::size_t s = 0;
            for (int k = 0; k < a_end; ++k) scores[s++] = simd::dot(qv, inp.k(h, k), d) * inv_sqrt_d;
            for (int k = b_begin; k < b_end; ++k) scores[s++] = simd::dot(qv, inp.k(h, k), d) * inv_sqrt_d;
            const T sum = softmax_in_place(scores.data(), count);
            T* o = out.data() + (static_cast<std::size_t>(h) * n + q) * d;
            s = 0;
            for (int k = 0; k < a_end; ++k) simd::axpy(scores[s++], inp.v(h, k), o, d);
            for (int k = b_begin; k < b_end; ++k) simd::axpy(scores[s++], inp.v(h, k), o, d);
            simd::scale(T(1) / sum, o, d);
        }
    }
    return out;
}

double attention_flops(const TokenLayout& layout, const BandedMaskSpec& spec, int dim) {
    const double G = layout.generation;
    const double C = layout.context;
    const double band = std::min(2.0 * spec.bandwidth + 1.0, C);
    return 2.0 * dim * (G * G + 2.0 * G * C + C * band);
}

double dense_attention_flops(const TokenLayout& layout, int dim) {
    const double n = layout.total();
    return 2.0 * dim * n * n;
}

template std::vector<float> dense_masked_attention(const AttentionInputs<float>&, const MaskPredicate&);
template std::vector<double> dense_masked_attention(const AttentionInputs<double>&, const MaskPredicate&);
template std::vector<float> dense_attention_weights(const AttentionInputs<float>&, const MaskPredicate&, int);
template std::vector<double> dense_attention_weights(const AttentionInputs<double>&, const MaskPredicate&, int);
template std::vector<float> sparse_context_attention(const AttentionInputs<float>&, const TokenLayout&, const BandedMaskSpec&);
template std::vector<double> sparse_context_attention(const AttentionInputs<double>&, const TokenLayout&, const BandedMaskSpec&);

} // namespace cubegen
