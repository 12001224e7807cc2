// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/simd/kernels.hpp"

namespace cubegen::simd {

namespace {

template <typename T>
T dot_ref(const T* a, const T* b, std::size_t n) {
    T acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

template <typename T>
void axpy_ref(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void scale_ref(T alpha, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

const KernelTable kScalar = {
    dot_ref<float>, dot_ref<double>, axpy_ref<float>, axpy_ref<double>, scale_ref<float>, scale_ref<double>,
};

} // namespace

const KernelTable& scalar_kernels() { return kScalar; }

} // namespace cubegen::simd
