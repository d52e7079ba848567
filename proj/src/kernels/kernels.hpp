#pragma once

// Row kernels behind the phase-space and classical transforms. Each has a
// serial reference and an OpenMP variant with identical per-row arithmetic,
// so the two agree bit for bit.

#include <complex>
#include <cstdint>
#include <span>

namespace locmom::kernels {

using cplx = std::complex<double>;

/// Wigner rows on the half-spacing momentum grid, ascending p.
/// out[i * n + s] = scale * Re sum_j conj(psi_{i+j}) psi_{i-j} (-1)^j e^{2 pi i s j / n}.
struct WignerArgs {
  std::span<const cplx> psi;
  bool periodic = false;
  double scale = 1.0;
};

/// out[j * n + s] = Re[conj(psi_j) a_s (-1)^j e^{2 pi i s j / n}].
struct MargenauHillArgs {
  std::span<const cplx> psi;
  std::span<const cplx> a;
};

/// Inverse transform of the local characteristic function per row.
/// Rows with |psi_j| <= floor are zero and marked undefined.
struct ConditionalArgs {
  std::span<const cplx> psi;
  double amplitude_floor = 0.0;
  double scale = 1.0;
};

/// out[i] = sum_k values[i * n_cols + k] * w, where w = weights[k] when
/// weights has n_cols entries and weights[i * n_cols + k] otherwise.
struct RowDotArgs {
  std::span<const double> values;
  std::span<const double> weights;
  int n_cols = 0;
};

/// Per-row probability, mean and two-pass variance of a under F dp.
struct RowStatsArgs {
  std::span<const double> values;
  std::span<const double> a;
  int n_cols = 0;
  double dp = 0.0;
};

struct RowStatsOut {
  std::span<double> mass;
  std::span<double> mean;
  std::span<double> variance;
};

namespace serial {
void wigner_rows(const WignerArgs& args, std::span<double> out);
void margenau_hill_rows(const MargenauHillArgs& args, std::span<double> out);
void conditional_rows(const ConditionalArgs& args, std::span<double> out,
                      std::span<std::uint8_t> defined);
void row_dot(const RowDotArgs& args, std::span<double> out);
void row_stats(const RowStatsArgs& args, const RowStatsOut& out);
}  // namespace serial

namespace openmp {
void wigner_rows(const WignerArgs& args, std::span<double> out);
void margenau_hill_rows(const MargenauHillArgs& args, std::span<double> out);
void conditional_rows(const ConditionalArgs& args, std::span<double> out,
                      std::span<std::uint8_t> defined);
void row_dot(const RowDotArgs& args, std::span<double> out);
void row_stats(const RowStatsArgs& args, const RowStatsOut& out);
}  // namespace openmp

/// Thread cap from LOCMOM_THREADS (unset or 0 = OpenMP default).
int thread_limit();

}  // namespace locmom::kernels
