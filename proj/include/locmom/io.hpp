#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "locmom/dynamics.hpp"
#include "locmom/local_moments.hpp"
#include "locmom/phase_space.hpp"

namespace locmom::io {

/// printf "%.17g": round-trips every double, locale independent.
std::string format_double(double v);

/// Long-format CSV, one row per grid point per profile:
/// q,value,mask,definition,order. Masked-out values are written as 0.
void write_profiles_csv(std::ostream& os, const std::vector<LocalProfile>& profiles);
nlohmann::ordered_json profiles_json(const std::vector<LocalProfile>& profiles);

/// q,p,value with q the slow index.
void write_distribution_csv(std::ostream& os, const QuasiDistribution& f);

/// Little-endian binary layout:
///   char[4] "LMQD", u32 version, u32 kind, u32 n_q, u32 n_p,
///   f64 q_min, dq, p_min, dp, hbar, then n_q * n_p f64 row-major.
inline constexpr std::uint32_t kBinaryVersion = 1;
void write_distribution_binary(std::ostream& os, const QuasiDistribution& f);
/// Inverse of write_distribution_binary. The grid mass is not stored and
/// comes back as 1. Throws
/// InvalidArgument on a malformed stream.
QuasiDistribution read_distribution_binary(std::istream& is);

/// kind, lattice, total mass and the minimum cell.
nlohmann::ordered_json distribution_metadata(const QuasiDistribution& f);

nlohmann::ordered_json decomposition_json(const VarianceDecomposition& d);

/// Per-snapshot quantity exported from an evolution trace.
enum class TraceQuantity { density, mean_p, variance_W };
std::string to_string(TraceQuantity q);

/// "# key=value" metadata lines (potential, dt, hbar, mass, quantity), then
/// t,q,value,mask for every snapshot and grid point.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace, TraceQuantity quantity,
                     double mask_eps = kMaskEps);

}  // namespace locmom::io
