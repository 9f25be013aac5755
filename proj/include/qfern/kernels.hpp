#pragma once

#include <cstddef>

// Arithmetic inner loops shared by the spectral, resistance and oscillator
// code. Every kernel has a scalar reference implementation and, on x86-64,
// an AVX2/FMA variant; the active one is picked at runtime (see select_isa).
// The two paths are equivalence-tested against each other.
namespace qfern::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool cpu_supports_avx2();

// Switches the dispatch table. Avx2 falls back to Scalar when the CPU (or
// the build) lacks it. The env var QFERN_SIMD=scalar|avx2 sets the initial
// choice; default is the best supported ISA.
void select_isa(Isa isa);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i w[i] * x[i] * y[i]
double weighted_dot(const double* x, const double* y, const double* w, std::size_t n);

// sum_i w[i] * (x[i] - y[i])^2
double weighted_sq_diff(const double* x, const double* y, const double* w, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// In-place plane rotation: (x, y) <- (c*x - s*y, s*x + c*y)
void rotate(double* x, double* y, std::size_t n, double c, double s);

// y = A x for a row-major rows x cols matrix
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);

// out[i] = omega[i] + cosv[i]*wsin[i] - sinv[i]*wcos[i]
// (coupled-oscillator phase velocity, with W*sin(theta) and W*cos(theta)
// precomputed by matvec)
void phase_rate(const double* omega, const double* cosv, const double* sinv,
                const double* wsin, const double* wcos, double* out, std::size_t n);

}  // namespace qfern::kernels
