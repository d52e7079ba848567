#include "locmom/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "locmom/error.hpp"
#include "locmom/grid.hpp"

namespace locmom::io {
namespace {

static_assert(std::endian::native == std::endian::little, "binary writer assumes little-endian");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw InvalidArgument("input", "truncated distribution file");
  return v;
}

std::uint32_t kind_code(DistributionKind k) {
  switch (k) {
    case DistributionKind::weyl_wigner: return 0;
    case DistributionKind::margenau_hill: return 1;
    case DistributionKind::classical: return 2;
  }
  return 0;
}

DistributionKind kind_from_code(std::uint32_t c) {
  switch (c) {
    case 0: return DistributionKind::weyl_wigner;
    case 1: return DistributionKind::margenau_hill;
    case 2: return DistributionKind::classical;
  }
  throw InvalidArgument("input", "unknown distribution kind code " + std::to_string(c));
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_profiles_csv(std::ostream& os, const std::vector<LocalProfile>& profiles) {
  os << "q,value,mask,definition,order\n";
  for (const auto& p : profiles) {
    const auto def = to_string(p.definition);
    const auto order = p.order.label();
    for (int j = 0; j < p.profile.size(); ++j) {
      const bool on = p.profile.defined(j);
      os << format_double(p.profile.grid.q(j)) << ',' << format_double(on ? p.profile.values[j] : 0.0)
         << ',' << (on ? 1 : 0) << ',' << def << ',' << order << '\n';
    }
  }
}

nlohmann::ordered_json profiles_json(const std::vector<LocalProfile>& profiles) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    nlohmann::ordered_json item;
    item["definition"] = to_string(p.definition);
    item["order"] = p.order.label();
    auto q = nlohmann::ordered_json::array();
    auto v = nlohmann::ordered_json::array();
    auto m = nlohmann::ordered_json::array();
    for (int j = 0; j < p.profile.size(); ++j) {
      const bool on = p.profile.defined(j);
      q.push_back(p.profile.grid.q(j));
      v.push_back(on ? p.profile.values[j] : 0.0);
      m.push_back(on ? 1 : 0);
    }
    item["q"] = std::move(q);
    item["value"] = std::move(v);
    item["mask"] = std::move(m);
    arr.push_back(std::move(item));
  }
  return arr;
}

void write_distribution_csv(std::ostream& os, const QuasiDistribution& f) {
  os << "q,p,value\n";
  for (int i = 0; i < f.grid.n; ++i) {
    const auto q = format_double(f.grid.q(i));
    for (int k = 0; k < f.n_p; ++k)
      os << q << ',' << format_double(f.p(k)) << ',' << format_double(f.at(i, k)) << '\n';
  }
}

void write_distribution_binary(std::ostream& os, const QuasiDistribution& f) {
  os.write("LMQD", 4);
  put<std::uint32_t>(os, kBinaryVersion);
  put<std::uint32_t>(os, kind_code(f.kind));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.n_p));
  for (double v : {f.grid.q_min, f.grid.dq, f.p_min, f.dp, f.grid.hbar}) put<double>(os, v);
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

QuasiDistribution read_distribution_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "LMQD", 4) != 0)
    throw InvalidArgument("input", "not a distribution file");
  if (get<std::uint32_t>(is) != kBinaryVersion)
    throw InvalidArgument("input", "unsupported distribution file version");
  QuasiDistribution f;
  f.kind = kind_from_code(get<std::uint32_t>(is));
  const auto n_q = static_cast<int>(get<std::uint32_t>(is));
  f.n_p = static_cast<int>(get<std::uint32_t>(is));
  const double q_min = get<double>(is);
  const double dq = get<double>(is);
  f.p_min = get<double>(is);
  f.dp = get<double>(is);
  const double hbar = get<double>(is);
  f.grid = make_grid(n_q, q_min, q_min + n_q * dq, hbar);
  // keep the stored spacing exactly
  f.grid.dq = dq;
  f.values.resize(static_cast<std::size_t>(n_q) * f.n_p);
  if (!is.read(reinterpret_cast<char*>(f.values.data()),
               static_cast<std::streamsize>(f.values.size() * sizeof(double))))
    throw InvalidArgument("input", "truncated distribution file");
  f.min_cell = locate_minimum(f);
  return f;
}

nlohmann::ordered_json distribution_metadata(const QuasiDistribution& f) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(f.kind);
  j["n_q"] = f.grid.n;
  j["n_p"] = f.n_p;
  j["q_min"] = f.grid.q_min;
  j["dq"] = f.grid.dq;
  j["p_min"] = f.p_min;
  j["dp"] = f.dp;
  j["hbar"] = f.grid.hbar;
  j["total"] = f.total();
  j["min"] = {{"value", f.min_cell.value},
              {"q", f.min_cell.q},
              {"p", f.min_cell.p},
              {"q_index", f.min_cell.q_index},
              {"p_index", f.min_cell.p_index}};
  return j;
}

nlohmann::ordered_json decomposition_json(const VarianceDecomposition& d) {
  nlohmann::ordered_json j;
  j["definition"] = to_string(d.definition);
  j["avg_local_variance"] = d.avg_local_variance;
  j["variance_of_local_avg"] = d.variance_of_local_avg;
  j["total"] = d.total;
  j["direct_total"] = d.direct_total;
  j["residual"] = d.residual();
  return j;
}

std::string to_string(TraceQuantity q) {
  switch (q) {
    case TraceQuantity::density: return "density";
    case TraceQuantity::mean_p: return "mean_p";
    case TraceQuantity::variance_W: return "variance_W";
  }
  return "?";
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace, TraceQuantity quantity,
                     double mask_eps) {
  os << "# potential=" << trace.potential.label << '\n'
     << "# dt=" << format_double(trace.dt) << '\n'
     << "# stride=" << trace.snapshot_stride << '\n'
     << "# hbar=" << format_double(trace.grid.hbar) << '\n'
     << "# mass=" << format_double(trace.grid.mass) << '\n'
     << "# quantity=" << to_string(quantity) << '\n'
     << "t,q,value,mask\n";
  for (std::size_t s = 0; s < trace.size(); ++s) {
    const auto psi = trace.snapshot(s);
    RealProfile prof;
    switch (quantity) {
      case TraceQuantity::density:
        prof = RealProfile::from_values(psi.grid(), psi.density());
        break;
      case TraceQuantity::mean_p:
        prof = local_value_S(psi, MomentumPower{1}, mask_eps).profile;
        break;
      case TraceQuantity::variance_W:
        prof = phase_space_local_variance(wigner_transform(psi), psi, mask_eps).profile;
        break;
    }
    const auto t = format_double(trace.times[s]);
    for (int j = 0; j < prof.size(); ++j) {
      const bool on = prof.defined(j);
      os << t << ',' << format_double(psi.grid().q(j)) << ',' << format_double(on ? prof.values[j] : 0.0)
         << ',' << (on ? 1 : 0) << '\n';
    }
  }
}

}  // namespace locmom::io
