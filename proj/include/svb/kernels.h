// include/svb/kernels.h

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

#ifndef SVB_KERNELS_H_
#define SVB_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Inner-loop arithmetic used by the dense linear algebra and the MLP.
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64). The variant is picked once at
// startup from CPU features; tests switch it explicitly to compare the
// variants against the scalar reference.

namespace svb::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

/// Best ISA supported by this CPU.
Isa DetectIsa();

/// ISA currently used by the dispatching entry points. Defaults to
/// DetectIsa(), or kScalar if the environment variable SVB_FORCE_SCALAR is
/// set to a non-empty value other than "0".
Isa ActiveIsa();

/// Selects the ISA for the dispatching entry points. Throws InvalidInput if
/// the CPU cannot run it.
void SetActiveIsa(Isa isa);

bool IsaSupported(Isa isa);

/// Raw-pointer entry points of one ISA, for hot loops that hoist the
/// dispatch. Lengths are not checked.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& KernelsFor(Isa isa);
/// KernelsFor(ActiveIsa()).
const KernelTable& ActiveKernels();

/// sum_i a[i] * b[i]
double Dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_i (a[i] - b[i])^2
double SquaredDistance(std::span<const double> a, std::span<const double> b);

/// out[r] = sum_c m[r*cols + c] * x[c]   (row-major m, rows = out.size())
void MatVec(std::span<const double> m, std::span<const double> x,
            std::span<double> out);

// Per-ISA implementations, exposed for equivalence tests. The SIMD variants
// must only be called when IsaSupported() says so.
namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SVB_HAVE_AVX2_KERNELS 1
namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define SVB_HAVE_NEON_KERNELS 1
namespace neon {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace svb::kernels

#endif  // SVB_KERNELS_H_
