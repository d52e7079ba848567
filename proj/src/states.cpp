#include "locmom/states.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>

#include "locmom/error.hpp"

namespace locmom {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCommensurateTol = 1e-9;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_recipe(const std::string& what) {
  throw InvalidArgument("state", "malformed state recipe: " + what);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  StateRecipe parse_all() {
    StateRecipe r = parse_recipe();
    skip_ws();
    if (pos_ != text_.size()) bad_recipe("trailing text at '" + rest() + "'");
    return r;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  std::string rest() const { return std::string(text_.substr(pos_, 16)); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) bad_recipe(std::string("expected '") + c + "' at '" + rest() + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) bad_recipe("expected a name at '" + rest() + "'");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const std::string tail(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str()) bad_recipe("expected a number at '" + rest() + "'");
    if (!std::isfinite(v)) bad_recipe("non-finite number at '" + rest() + "'");
    pos_ += static_cast<std::size_t>(end - tail.c_str());
    return v;
  }

  template <class Assign>
  void keyword_args(const std::string& name, Assign&& assign) {
    expect('(');
    if (peek(')')) bad_recipe(name + " needs arguments");
    do {
      const std::string key = identifier();
      expect('=');
      const double v = number();
      if (!assign(key, v)) bad_recipe(name + " has no parameter '" + key + "'");
    } while (peek(',') && (++pos_, true));
    expect(')');
  }

  cplx coefficient() {
    if (peek('(')) {
      ++pos_;
      const double re = number();
      expect(',');
      const double im = number();
      expect(')');
      return {re, im};
    }
    return {number(), 0.0};
  }

  StateRecipe parse_recipe() {
    const std::string name = identifier();
    if (name == "gaussian") {
      GaussianRecipe g;
      bool have_s = false;
      keyword_args(name, [&](const std::string& k, double v) {
        if (k == "s") return have_s = true, g.s = v, true;
        if (k == "k0") return g.k0 = v, true;
        if (k == "q0") return g.q0 = v, true;
        return false;
      });
      if (!have_s) bad_recipe("gaussian requires s");
      if (!(g.s > 0)) bad_recipe("gaussian width s must be positive");
      return {g};
    }
    if (name == "plane_wave") {
      PlaneWaveRecipe p;
      bool have_k = false;
      keyword_args(name, [&](const std::string& k, double v) {
        if (k == "k") return have_k = true, p.k = v, true;
        return false;
      });
      if (!have_k) bad_recipe("plane_wave requires k");
      return {p};
    }
    if (name == "oscillator") {
      OscillatorRecipe o;
      double level = 0.0;
      keyword_args(name, [&](const std::string& k, double v) {
        if (k == "level") return level = v, true;
        if (k == "omega") return o.omega = v, true;
        return false;
      });
      if (level != std::floor(level) || level < 0 || level > kMaxOscillatorLevel)
        bad_recipe("oscillator level must be an integer in 0..4");
      if (!(o.omega > 0)) bad_recipe("oscillator omega must be positive");
      o.level = static_cast<int>(level);
      return {o};
    }
    if (name == "superposition") {
      SuperpositionRecipe sup;
      expect('[');
      do {
        SuperpositionBranch b;
        b.coeff = coefficient();
        expect('*');
        b.recipe = parse_recipe();
        sup.branches.push_back(std::move(b));
      } while (peek(',') && (++pos_, true));
      expect(']');
      if (sup.branches.size() < 2) bad_recipe("superposition needs at least two branches");
      return {std::move(sup)};
    }
    bad_recipe("unknown state kind '" + name + "'");
  }
};

void require_edge_decay(const Wavefunction& psi) {
  const double edge = edge_density(psi);
  if (!(edge < kEdgeDensityBound))
    throw PreconditionError("state does not fit the window: edge density " + fmt(edge) +
                            " exceeds " + fmt(kEdgeDensityBound));
}

ComplexField gaussian_amplitudes(const GaussianRecipe& g, const GridSpec& grid) {
  if (!(g.s > 0)) throw InvalidArgument("state", "gaussian width s must be positive");
  if (g.q0 - 8 * g.s < grid.q_min || g.q0 + 8 * g.s > grid.q_max)
    throw PreconditionError("state does not fit the window: q0 +/- 8s = [" +
                            fmt(g.q0 - 8 * g.s) + ", " + fmt(g.q0 + 8 * g.s) +
                            "] leaves [" + fmt(grid.q_min) + ", " + fmt(grid.q_max) + "]");
  const double amp = std::pow(2 * kPi * g.s * g.s, -0.25);
  ComplexField out(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.q(j) - g.q0;
    out[j] = amp * std::exp(-x * x / (4 * g.s * g.s)) * std::polar(1.0, g.k0 * grid.q(j));
  }
  return out;
}

int plane_wave_cycles(const PlaneWaveRecipe& p, const GridSpec& grid) {
  const double cycles = p.k * grid.length() / (2 * kPi);
  const double m = std::round(cycles);
  if (std::abs(cycles - m) > kCommensurateTol)
    throw PreconditionError("plane wave is not commensurate with the window: k*L/(2 pi) = " +
                            fmt(cycles) + " is not an integer");
  if (m < -grid.n / 2 || m >= grid.n / 2)
    throw PreconditionError("plane wave wavenumber exceeds the grid's Nyquist limit");
  return static_cast<int>(m);
}

ComplexField plane_wave_amplitudes(const PlaneWaveRecipe& p, const GridSpec& grid) {
  const int m = plane_wave_cycles(p, grid);
  const double k = 2 * kPi * m / grid.length();
  ComplexField out(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) out[j] = std::polar(1.0, k * grid.q(j));
  return out;
}

ComplexField oscillator_amplitudes(const OscillatorRecipe& o, const GridSpec& grid) {
  if (o.level < 0 || o.level > kMaxOscillatorLevel)
    throw InvalidArgument("state", "oscillator level must be in 0..4");
  if (!(o.omega > 0)) throw InvalidArgument("state", "oscillator omega must be positive");
  const double alpha = std::sqrt(grid.mass * o.omega / grid.hbar);
  const double scale = std::sqrt(alpha);
  ComplexField out(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double xi = alpha * grid.q(j);
    // Normalized Hermite functions: h_{k+1} = sqrt(2/(k+1)) xi h_k - sqrt(k/(k+1)) h_{k-1}.
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25) * std::exp(-xi * xi / 2);
    for (int k = 0; k < o.level; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    out[j] = scale * cur;
  }
  return out;
}

Wavefunction normalize_checked(const GridSpec& grid, ComplexField amp) {
  Wavefunction raw(grid, std::move(amp));
  if (!(raw.norm_squared() > 0)) throw PreconditionError("state has zero norm on this grid");
  return raw.normalized();
}

}  // namespace

std::string format_recipe(const StateRecipe& recipe) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GaussianRecipe>) {
          return "gaussian(s=" + fmt(r.s) + ",k0=" + fmt(r.k0) + ",q0=" + fmt(r.q0) + ")";
        } else if constexpr (std::is_same_v<T, PlaneWaveRecipe>) {
          return "plane_wave(k=" + fmt(r.k) + ")";
        } else if constexpr (std::is_same_v<T, OscillatorRecipe>) {
          return "oscillator(level=" + std::to_string(r.level) + ",omega=" + fmt(r.omega) + ")";
        } else {
          std::string out = "superposition[";
          for (std::size_t i = 0; i < r.branches.size(); ++i) {
            if (i) out += ',';
            const auto& b = r.branches[i];
            out += "(" + fmt(b.coeff.real()) + "," + fmt(b.coeff.imag()) + ")*" +
                   format_recipe(b.recipe);
          }
          return out + "]";
        }
      },
      recipe.kind);
}

StateRecipe parse_recipe(std::string_view text) { return Parser(text).parse_all(); }

bool recipe_is_localized(const StateRecipe& recipe) {
  if (std::holds_alternative<PlaneWaveRecipe>(recipe.kind)) return false;
  if (const auto* sup = std::get_if<SuperpositionRecipe>(&recipe.kind)) {
    for (const auto& b : sup->branches)
      if (!recipe_is_localized(b.recipe)) return false;
  }
  return true;
}

namespace {

ComplexField leaf_or_sum(const StateRecipe& recipe, const GridSpec& grid) {
  return std::visit(
      [&](const auto& r) -> ComplexField {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GaussianRecipe>) return gaussian_amplitudes(r, grid);
        else if constexpr (std::is_same_v<T, PlaneWaveRecipe>) return plane_wave_amplitudes(r, grid);
        else if constexpr (std::is_same_v<T, OscillatorRecipe>) return oscillator_amplitudes(r, grid);
        else return superposition_amplitudes(r, grid);
      },
      recipe.kind);
}

}  // namespace

ComplexField superposition_amplitudes(const SuperpositionRecipe& recipe, const GridSpec& grid) {
  if (recipe.branches.size() < 2)
    throw InvalidArgument("state", "superposition needs at least two branches");
  ComplexField sum(static_cast<std::size_t>(grid.n));
  for (const auto& b : recipe.branches) {
    const Wavefunction branch = synthesize(b.recipe, grid);
    for (int j = 0; j < grid.n; ++j) sum[j] += b.coeff * branch[j];
  }
  return sum;
}

Wavefunction synthesize(const StateRecipe& recipe, const GridSpec& grid) {
  Wavefunction psi = normalize_checked(grid, leaf_or_sum(recipe, grid));
  if (recipe_is_localized(recipe)) require_edge_decay(psi);
  return psi;
}

StateRecipe gaussian(double s, double k0, double q0) { return {GaussianRecipe{s, k0, q0}}; }
StateRecipe plane_wave(double k) { return {PlaneWaveRecipe{k}}; }
StateRecipe oscillator(int level, double omega) { return {OscillatorRecipe{level, omega}}; }
StateRecipe superposition(std::vector<SuperpositionBranch> branches) {
  return {SuperpositionRecipe{std::move(branches)}};
}

double commensurate_wavenumber(const GridSpec& grid, int cycles) {
  return 2 * kPi * cycles / grid.length();
}

double GaussianOracle::density(double q) const {
  const double x = q - q0;
  return std::exp(-x * x / (2 * s * s)) / std::sqrt(2 * kPi * s * s);
}

double GaussianOracle::mean_p(double) const { return hbar * k0; }

double GaussianOracle::second_moment_S(double q) const {
  const double x = q - q0;
  const double h2 = hbar * hbar;
  return h2 * k0 * k0 + h2 / (2 * s * s) - h2 * x * x / (4 * s * s * s * s);
}

double GaussianOracle::second_moment_W(double) const {
  const double h2 = hbar * hbar;
  return h2 * k0 * k0 + h2 / (4 * s * s);
}

double GaussianOracle::sandwich_over_density(double q) const {
  const double h2 = hbar * hbar;
  return h2 * k0 * k0 + variance_C(q);
}

double GaussianOracle::variance_C(double q) const {
  const double x = q - q0;
  return hbar * hbar * x * x / (4 * s * s * s * s);
}

double GaussianOracle::variance_S(double q) const {
  const double x = q - q0;
  return hbar * hbar / (2 * s * s) - hbar * hbar * x * x / (4 * s * s * s * s);
}

double GaussianOracle::variance_W(double) const { return hbar * hbar / (4 * s * s); }

double GaussianOracle::global_p2() const {
  return hbar * hbar * k0 * k0 + hbar * hbar / (4 * s * s);
}

GaussianOracle gaussian_oracle(const StateRecipe& recipe, double hbar) {
  const auto* g = std::get_if<GaussianRecipe>(&recipe.kind);
  if (!g) throw InvalidArgument("state", "closed-form oracle requires a gaussian recipe");
  return GaussianOracle{g->s, g->k0, g->q0, hbar};
}

}  // namespace locmom
