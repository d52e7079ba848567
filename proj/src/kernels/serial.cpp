#include "kernels.hpp"
#include "rows.hpp"

namespace locmom::kernels::serial {

void wigner_rows(const WignerArgs& args, std::span<double> out) {
  const int n = static_cast<int>(args.psi.size());
  std::vector<cplx> buf(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rows::wigner_row(args, i, buf, out.data() + static_cast<std::size_t>(i) * n);
}

void margenau_hill_rows(const MargenauHillArgs& args, std::span<double> out) {
  const int n = static_cast<int>(args.psi.size());
  const auto tw = rows::twiddles(n);
  for (int j = 0; j < n; ++j)
    rows::margenau_hill_row(args, tw, j, out.data() + static_cast<std::size_t>(j) * n);
}

void conditional_rows(const ConditionalArgs& args, std::span<double> out,
                      std::span<std::uint8_t> defined) {
  const int n = static_cast<int>(args.psi.size());
  std::vector<cplx> buf(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    defined[j] = rows::conditional_row(args, j, buf, out.data() + static_cast<std::size_t>(j) * n);
}

void row_dot(const RowDotArgs& args, std::span<double> out) {
  const int rows_n = static_cast<int>(out.size());
  for (int i = 0; i < rows_n; ++i) out[i] = rows::row_dot(args, i);
}

void row_stats(const RowStatsArgs& args, const RowStatsOut& out) {
  const int rows_n = static_cast<int>(out.mass.size());
  for (int i = 0; i < rows_n; ++i) rows::row_stats(args, i, out);
}

}  // namespace locmom::kernels::serial
