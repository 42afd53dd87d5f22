// src/kernels/dispatch.cc

// Copyright 2026  The svb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string>

#include "svb/errors.h"
#include "svb/kernels.h"

namespace svb::kernels {

namespace {

Isa InitialIsa() {
  const char* force = std::getenv("SVB_FORCE_SCALAR");
  if (force != nullptr && *force != '\0' && std::string(force) != "0")
    return Isa::kScalar;
  return DetectIsa();
}

std::atomic<Isa> g_active_isa{InitialIsa()};

const KernelTable kScalarTable = {scalar::Dot, scalar::Axpy, scalar::SquaredDistance};
#if defined(SVB_HAVE_AVX2_KERNELS)
const KernelTable kAvx2Table = {avx2::Dot, avx2::Axpy, avx2::SquaredDistance};
#endif
#if defined(SVB_HAVE_NEON_KERNELS)
const KernelTable kNeonTable = {neon::Dot, neon::Axpy, neon::SquaredDistance};
#endif

void CheckSizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw InvalidInput(std::string(what) + ": length mismatch (" +
                       std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(SVB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(SVB_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa DetectIsa() {
  if (IsaSupported(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaSupported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

Isa ActiveIsa() { return g_active_isa.load(std::memory_order_relaxed); }

const KernelTable& KernelsFor(Isa isa) {
  switch (isa) {
#if defined(SVB_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return kAvx2Table;
#endif
#if defined(SVB_HAVE_NEON_KERNELS)
    case Isa::kNeon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& ActiveKernels() { return KernelsFor(ActiveIsa()); }

void SetActiveIsa(Isa isa) {
  if (!IsaSupported(isa))
    throw InvalidInput("ISA " + std::string(IsaName(isa)) +
                       " is not supported on this CPU");
  g_active_isa.store(isa, std::memory_order_relaxed);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSizes(a.size(), b.size(), "Dot");
  switch (ActiveIsa()) {
#if defined(SVB_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::Dot(a.data(), b.data(), a.size());
#endif
#if defined(SVB_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::Dot(a.data(), b.data(), a.size());
#endif
    default: return scalar::Dot(a.data(), b.data(), a.size());
  }
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckSizes(x.size(), y.size(), "Axpy");
  switch (ActiveIsa()) {
#if defined(SVB_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: avx2::Axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
#if defined(SVB_HAVE_NEON_KERNELS)
    case Isa::kNeon: neon::Axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
    default: scalar::Axpy(alpha, x.data(), y.data(), x.size());
  }
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  CheckSizes(a.size(), b.size(), "SquaredDistance");
  switch (ActiveIsa()) {
#if defined(SVB_HAVE_AVX2_KERNELS)
    case Isa::kAvx2: return avx2::SquaredDistance(a.data(), b.data(), a.size());
#endif
#if defined(SVB_HAVE_NEON_KERNELS)
    case Isa::kNeon: return neon::SquaredDistance(a.data(), b.data(), a.size());
#endif
    default: return scalar::SquaredDistance(a.data(), b.data(), a.size());
  }
}

void MatVec(std::span<const double> m, std::span<const double> x,
            std::span<double> out) {
  CheckSizes(m.size(), out.size() * x.size(), "MatVec");
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < out.size(); ++r)
    out[r] = Dot(m.subspan(r * cols, cols), x);
}

}  // namespace svb::kernels
