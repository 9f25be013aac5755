#include "qfern/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qfern::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double weighted_dot(const double* x, const double* y, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double weighted_sq_diff(const double* x, const double* y, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - y[i];
    s += w[i] * d * d;
  }
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    double xi = x[i];
    double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void phase_rate(const double* omega, const double* cosv, const double* sinv,
                const double* wsin, const double* wcos, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = omega[i] + cosv[i] * wsin[i] - sinv[i] * wcos[i];
}

}  // namespace scalar

#if defined(QFERN_HAVE_AVX2)
namespace avx2 {
// defined in kernels_avx2.cpp
double dot(const double* x, const double* y, std::size_t n);
double weighted_dot(const double* x, const double* y, const double* w, std::size_t n);
double weighted_sq_diff(const double* x, const double* y, const double* w, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void rotate(double* x, double* y, std::size_t n, double c, double s);
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void phase_rate(const double* omega, const double* cosv, const double* sinv,
                const double* wsin, const double* wcos, double* out, std::size_t n);
}  // namespace avx2
#endif

namespace {

struct Dispatch {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
  double (*weighted_sq_diff)(const double*, const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*rotate)(double*, double*, std::size_t, double, double);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*phase_rate)(const double*, const double*, const double*, const double*,
                     const double*, double*, std::size_t);
};

constexpr Dispatch kScalarTable = {
    Isa::Scalar,       scalar::dot,    scalar::weighted_dot, scalar::weighted_sq_diff,
    scalar::axpy,      scalar::rotate, scalar::matvec,       scalar::phase_rate,
};

#if defined(QFERN_HAVE_AVX2)
constexpr Dispatch kAvx2Table = {
    Isa::Avx2,       avx2::dot,    avx2::weighted_dot, avx2::weighted_sq_diff,
    avx2::axpy,      avx2::rotate, avx2::matvec,       avx2::phase_rate,
};
#endif

Dispatch resolve(Isa wanted) {
#if defined(QFERN_HAVE_AVX2)
  if (wanted == Isa::Avx2 && cpu_supports_avx2()) return kAvx2Table;
#else
  (void)wanted;
#endif
  return kScalarTable;
}

Isa initial_isa() {
  if (const char* env = std::getenv("QFERN_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0) return Isa::Avx2;
  }
  return Isa::Avx2;  // resolve() falls back when unsupported
}

Dispatch& table() {
  static Dispatch d = resolve(initial_isa());
  return d;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(QFERN_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void select_isa(Isa isa) { table() = resolve(isa); }

double dot(const double* x, const double* y, std::size_t n) { return table().dot(x, y, n); }

double weighted_dot(const double* x, const double* y, const double* w, std::size_t n) {
  return table().weighted_dot(x, y, w, n);
}

double weighted_sq_diff(const double* x, const double* y, const double* w, std::size_t n) {
  return table().weighted_sq_diff(x, y, w, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) { table().axpy(a, x, y, n); }

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  table().rotate(x, y, n, c, s);
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  table().matvec(a, rows, cols, x, y);
}

void phase_rate(const double* omega, const double* cosv, const double* sinv,
                const double* wsin, const double* wcos, double* out, std::size_t n) {
  table().phase_rate(omega, cosv, sinv, wsin, wcos, out, n);
}

}  // namespace qfern::kernels
