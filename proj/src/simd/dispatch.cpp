// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace cubegen::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    // CUBEGEN_ISA=scalar pins the reference kernels for A/B runs.
    if (const char* env = std::getenv("CUBEGEN_ISA"); env && std::string(env) == "scalar") return Isa::Scalar;
    return detected_isa();
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{initial_isa() == Isa::Avx2 ? avx2_kernels() : &scalar_kernels()};
    return table;
}

} // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return (avx2_kernels() != nullptr && cpu_has_avx2()) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return active_table().load() == &scalar_kernels() ? Isa::Scalar : Isa::Avx2; }

void force_isa(Isa isa) {
    if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2)
        active_table().store(avx2_kernels());
    else
        active_table().store(&scalar_kernels());
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_relaxed); }

} // namespace cubegen::simd
