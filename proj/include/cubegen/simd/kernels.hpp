// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Vector kernels behind the attention and sampler inner loops. Each kernel has
// a portable scalar reference and an AVX2/FMA variant; the variant is chosen
// once at startup from CPUID and can be overridden for testing.

#include <cstddef>
#include <string_view>

namespace cubegen::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
    float (*dot_f32)(const float* a, const float* b, std::size_t n);
    double (*dot_f64)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy_f32)(float alpha, const float* x, float* y, std::size_t n);
    void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
    /// y *= alpha
    void (*scale_f32)(float alpha, float* y, std::size_t n);
    void (*scale_f64)(double alpha, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

/// Best ISA the running CPU supports.
Isa detected_isa();

Isa active_isa();

/// Pins dispatch to `isa`; falls back to scalar if the CPU cannot run it.
void force_isa(Isa isa);

const KernelTable& kernels();

inline float dot(const float* a, const float* b, std::size_t n) { return kernels().dot_f32(a, b, n); }
inline double dot(const double* a, const double* b, std::size_t n) { return kernels().dot_f64(a, b, n); }
inline void axpy(float alpha, const float* x, float* y, std::size_t n) { kernels().axpy_f32(alpha, x, y, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { kernels().axpy_f64(alpha, x, y, n); }
inline void scale(float alpha, float* y, std::size_t n) { kernels().scale_f32(alpha, y, n); }
inline void scale(double alpha, double* y, std::size_t n) { kernels().scale_f64(alpha, y, n); }

} // namespace cubegen::simd
