// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <atomic>
#include <cstdlib>

#include "umtk/kernels.hpp"

namespace umtk::kernels {

namespace {

const RowKernels* kernels_for(Isa isa) noexcept {
    return isa == Isa::Avx2 ? avx2_kernels() : &scalar_kernels();
}

std::atomic<const RowKernels*>& selection() noexcept {
    static std::atomic<const RowKernels*> current{kernels_for(detect_isa())};
    return current;
}

} // namespace

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

std::optional<Isa> isa_from_string(std::string_view name) noexcept {
    if (name == "scalar")
        return Isa::Scalar;
    if (name == "avx2")
        return Isa::Avx2;
    return std::nullopt;
}

Isa detect_isa() noexcept {
    if (const char* env = std::getenv("UMTK_KERNEL")) {
        if (auto isa = isa_from_string(env); isa && kernels_for(*isa) != nullptr)
            return *isa;
    }
    return avx2_kernels() != nullptr ? Isa::Avx2 : Isa::Scalar;
}

const RowKernels& active() noexcept { return *selection().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
    const RowKernels* k = kernels_for(isa);
    if (k == nullptr)
        return false;
    selection().store(k, std::memory_order_release);
    return true;
}

} // namespace umtk::kernels
