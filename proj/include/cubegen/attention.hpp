// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Generation/context attention with a banded context self-mask.
//
// Tokens [0, G) are the generation sequence, [G, G + C) the context. Allowed
// (query, key) pairs:
//   gen -> gen   always
//   gen -> ctx   always (switchable, see BandedMaskSpec)
//   ctx -> gen   always
//   ctx -> ctx   iff |q - k| <= K, measured on the flat index with no reset
//                at segment boundaries
//
// Both evaluation paths reduce keys in ascending index order per query row.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cubegen {

struct TokenSegment {
    int offset;
    int length;
    std::string tag;
};

struct TokenLayout {
    int generation = 0;
    int context = 0;
    std::vector<TokenSegment> segments; // partition of the context tokens

    int total() const { return generation + context; }

    /// Builds a layout with a single untagged context segment (or none if C = 0).
    static TokenLayout simple(int generation, int context);

    /// Throws std::invalid_argument unless segments tile [0, C) contiguously.
    void validate() const;
};

struct BandedMaskSpec {
    int bandwidth = 1; // K
    /// Whether generation queries may read context keys. On by default;
    /// turning it off yields the stricter reading where only context queries
    /// see across the partition.
    bool generation_reads_context = true;
};

class ContextMask {
public:
    ContextMask(int generation, int context, BandedMaskSpec spec);

    bool operator()(int q, int k) const;

    int generation() const { return generation_; }
    int context() const { return context_; }
    int total() const { return generation_ + context_; }
    const BandedMaskSpec& spec() const { return spec_; }

    /// Exact number of allowed pairs.
    std::int64_t allowed_pairs() const;

private:
    int generation_;
    int context_;
    BandedMaskSpec spec_;
};

ContextMask build_context_mask(const TokenLayout& layout, const BandedMaskSpec& spec);

using MaskPredicate = std::function<bool(int, int)>;

/// Per-head row-major [heads][tokens][dim] query, key and value tensors.
template <typename T>
struct AttentionInputs {
    int heads = 1;
    int tokens = 0;
    int dim = 1;
    std::vector<T> queries;
    std::vector<T> keys;
    std::vector<T> values;

    AttentionInputs() = default;
    AttentionInputs(int heads, int tokens, int dim);

    void validate() const;

    const T* q(int h, int i) const { return queries.data() + (static_cast<std::size_t>(h) * tokens + i) * dim; }
    const T* k(int h, int i) const { return keys.data() + (static_cast<std::size_t>(h) * tokens + i) * dim; }
    const T* v(int h, int i) const { return values.data() + (static_cast<std::size_t>(h) * tokens + i) * dim; }
};

/// Reference path: full score matrix per head, masked softmax.
template <typename T>
std::vector<T> dense_masked_attention(const AttentionInputs<T>& inp, const MaskPredicate& mask);

/// Softmax weights of the reference path for one head, row-major tokens x tokens.
template <typename T>
std::vector<T> dense_attention_weights(const AttentionInputs<T>& inp, const MaskPredicate& mask, int head);

/// Block-skipping path: context rows touch only the G generation keys plus
/// the 2K + 1 band; no tokens x tokens buffer is ever formed.
template <typename T>
std::vector<T> sparse_context_attention(const AttentionInputs<T>& inp, const TokenLayout& layout,
                                        const BandedMaskSpec& spec);

/// Closed-form score multiply-accumulate count: 2d (G^2 + 2GC + C min(2K+1, C)).
double attention_flops(const TokenLayout& layout, const BandedMaskSpec& spec, int dim);

/// Same count for unmasked attention over G + C tokens: 2d (G + C)^2.
double dense_attention_flops(const TokenLayout& layout, int dim);

extern template struct AttentionInputs<float>;
extern template struct AttentionInputs<double>;

} // namespace cubegen
