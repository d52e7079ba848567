#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "locmom/cli.hpp"
#include "locmom/error.hpp"
#include "locmom/io.hpp"
#include "locmom/states.hpp"
#include "support.hpp"

using namespace locmom;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "locmom_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(0.25) == "0.25");
}

TEST_CASE("binary distribution round trip") {
  const auto g = make_grid(64, -10, 10);
  const auto f = wigner_transform(synthesize(oscillator(1, 1), g));
  std::stringstream buf;
  io::write_distribution_binary(buf, f);
  CHECK(buf.str().size() == 4 + 4 * 4 + 5 * 8 + 64 * 64 * 8);
  CHECK(buf.str().substr(0, 4) == "LMQD");
  const auto back = io::read_distribution_binary(buf);
  CHECK(back.kind == f.kind);
  CHECK(back.values == f.values);
  CHECK(back.grid.dq == f.grid.dq);
  CHECK(back.p_min == f.p_min);
  CHECK(back.dp == f.dp);
  CHECK(back.min_cell.value == f.min_cell.value);

  std::stringstream bad("LMQX");
  CHECK_THROWS_AS(io::read_distribution_binary(bad), InvalidArgument);
  std::stringstream truncated(buf.str().substr(0, 40));
  CHECK_THROWS_AS(io::read_distribution_binary(truncated), InvalidArgument);
}

TEST_CASE("profile CSV layout") {
  const auto r = run({"moments", "--grid-n", "16", "--q-min", "-10", "--q-max", "10", "--definition", "S",
                      "--order", "1", "--state", "gaussian(s=1,k0=2,q0=0)"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 17);
  CHECK(ls[0] == "q,value,mask,definition,order");
  CHECK(ls[1].rfind("-10,", 0) == 0);
  CHECK(ls[9].rfind("0,", 0) == 0);
  CHECK(ls[9].substr(ls[9].size() - 6) == ",1,S,1");
}

TEST_CASE("moments: S variance negative beyond sqrt 2") {
  const auto r = run({"moments", "--definition", "all", "--order", "variance", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["profiles"].size() == 4);
  const auto& s = j["profiles"][0];
  CHECK(s["definition"] == "S");
  for (std::size_t i = 0; i < s["q"].size(); ++i) {
    if (s["mask"][i] != 1) continue;
    const double q = s["q"][i];
    const double v = s["value"][i];
    if (std::abs(q) > std::sqrt(2.0) + 0.05) CHECK(v < 0);
    if (std::abs(q) < std::sqrt(2.0) - 0.05) CHECK(v > 0);
  }
  CHECK(j["config"]["state"] == "gaussian(s=1,k0=2,q0=0)");
}

TEST_CASE("moments: plane wave gives constant profiles") {
  const double k = commensurate_wavenumber(testing::desk_grid(), 4);
  const auto r = run({"moments", "--state", format_recipe(plane_wave(k)), "--order", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& p : j["profiles"])
    for (const auto& v : p["value"]) CHECK(v.get<double>() == doctest::Approx(k).epsilon(1e-10));
}

TEST_CASE("decompose records") {
  auto r = run({"decompose", "--definition", "S", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const auto& rec = j["records"][0];
  CHECK(rec["avg_local_variance"].get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(std::abs(rec["variance_of_local_avg"].get<double>()) < 1e-12);
  CHECK(rec["total"].get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(rec["direct_total"].get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(rec["residual"].get<double>() < 1e-8);

  const auto cat = format_recipe(testing::two_gaussians());
  r = run({"decompose", "--state", cat, "--format", "json"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  REQUIRE(j["records"].size() == 4);
  for (const auto& x : j["records"]) CHECK(x["residual"].get<double>() < 1e-8);

  const double k = commensurate_wavenumber(testing::desk_grid(), 4);
  r = run({"decompose", "--state", format_recipe(plane_wave(k)), "--format", "json"});
  REQUIRE(r.code == 0);
  for (const auto& x : nlohmann::json::parse(r.out)["records"]) {
    CHECK(std::abs(x["avg_local_variance"].get<double>()) < 1e-10);
    CHECK(std::abs(x["direct_total"].get<double>()) < 1e-10);
  }
}

TEST_CASE("distribution metadata") {
  const auto path = scratch("w.bin");
  auto r = run({"distribution", "--kind", "wigner", "--state", "oscillator(level=1,omega=1)", "--format",
                "binary", "--out", path.string()});
  REQUIRE(r.code == 0);
  auto meta = nlohmann::json::parse(r.out)["metadata"];
  CHECK(meta["kind"] == "wigner");
  CHECK(meta["min"]["value"].get<double>() == doctest::Approx(-1 / testing::kPi).epsilon(1e-6));
  CHECK(meta["min"]["q"].get<double>() == 0.0);
  CHECK(meta["min"]["p"].get<double>() == 0.0);
  std::ifstream in(path, std::ios::binary);
  CHECK(io::read_distribution_binary(in).values.size() == 512u * 512u);

  const double k = commensurate_wavenumber(testing::desk_grid(), 4);
  r = run({"distribution", "--kind", "mh", "--state", format_recipe(plane_wave(k)), "--out",
           scratch("mh.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["metadata"]["min"]["value"].get<double>() >= -1e-10);

  r = run({"distribution", "--kind", "classical", "--out", scratch("cl.csv").string()});
  REQUIRE(r.code == 0);
  meta = nlohmann::json::parse(r.out)["metadata"];
  CHECK(meta["kind"] == "classical");
  CHECK(meta["min"]["value"].get<double>() >= 0);
  CHECK(lines(slurp(scratch("cl.csv"))).size() == 512u * 512u + 1);
}

TEST_CASE("evolve report and trace export") {
  const auto prefix = scratch("free").string();
  auto r = run({"evolve", "--dt", "1e-3", "--steps", "100", "--stride", "50", "--export", prefix});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["continuity_residual"].get<double>() < 1e-5);
  CHECK(j["euler_residual_W"].get<double>() < 1e-4);
  CHECK(j["continuity_ratio"].get<double>() == doctest::Approx(4).epsilon(0.15));
  CHECK(j["norm_drift"].get<double>() < 1e-9);
  CHECK(j["snapshots"] == 3);
  REQUIRE(j["exports"].size() == 3);
  const auto ls = lines(slurp(prefix + "_density.csv"));
  CHECK(ls[0] == "# potential=free");
  CHECK(ls[1] == "# dt=0.001");
  CHECK(ls[6] == "t,q,value,mask");
  CHECK(ls.size() == 7 + 3 * 512);

  r = run({"evolve", "--state", "gaussian(s=0.70710678118654757,k0=0,q0=1)", "--potential", "harmonic:1",
           "--dt", "0.0031415926535897933", "--steps", "1000", "--stride", "1000"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["mean_q_sign_flip"] == true);
  CHECK(j["mean_q_final"].get<double>() == doctest::Approx(-1).epsilon(1e-5));
}

TEST_CASE("exit code contract") {
  auto r = run({"moments", "--state", "gaussian(s=1,k0=2"});
  CHECK(r.code == 2);
  auto e = nlohmann::json::parse(r.err);
  CHECK(e["field"] == "state");
  CHECK(r.out.empty());

  CHECK(run({"moments", "--grid-n", "7"}).code == 2);
  CHECK(nlohmann::json::parse(run({"moments", "--grid-n", "abc"}).err)["field"] == "grid-n");
  CHECK(run({"moments", "--definition", "X"}).code == 2);
  CHECK(run({"moments", "--order", "5"}).code == 2);
  CHECK(run({"moments", "--definition", "C", "--order", "3"}).code == 2);
  CHECK(run({"moments", "--no-such-flag", "1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"evolve", "--potential", "square:1"}).code == 2);
  CHECK(run({"distribution"}).code == 2);

  r = run({"evolve", "--dt", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("suggested dt") != std::string::npos);
  CHECK(run({"moments", "--state", "gaussian(s=1,k0=0,q0=15)"}).code == 3);
  CHECK(run({"distribution", "--kind", "classical", "--state", "oscillator(level=1,omega=1)", "--out",
             scratch("x.csv").string()}).code == 3);
  CHECK(run({"decompose", "--mask-eps", "0.5", "--state", "oscillator(level=1,omega=1)"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config file merge and canonical round trip") {
  const auto path = scratch("cfg.json");
  {
    std::ofstream f(path);
    f << R"json({"grid_n": 64, "q_min": -10, "q_max": 10, "definition": "W", "order": 2,
             "state": "gaussian( s = 1 , k0 = 2 , q0 = 0 )", "format": "json"})json";
  }
  auto r = run({"moments", "--config", path.string(), "--definition", "MH"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["config"]["grid_n"] == 64);
  CHECK(j["config"]["definition"] == "MH");
  CHECK(j["config"]["order"] == "2");
  CHECK(j["config"]["state"] == "gaussian(s=1,k0=2,q0=0)");
  CHECK(j["profiles"][0]["definition"] == "MH");

  auto c = cli::RunConfig::from_json(j["config"]);
  c.validate();
  CHECK(c.to_json().dump() == j["config"].dump());
  CHECK(cli::RunConfig::from_json(nlohmann::json::parse(c.to_json().dump())).to_json().dump() ==
        c.to_json().dump());

  {
    std::ofstream f(path);
    f << R"({"grid": 64})";
  }
  r = run({"moments", "--config", path.string()});
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.err)["field"] == "grid");
  {
    std::ofstream f(path);
    f << R"({"grid_n": "many"})";
  }
  CHECK(run({"moments", "--config", path.string()}).code == 2);
  CHECK(run({"moments", "--config", scratch("missing.json").string()}).code == 2);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::vector<std::string> args{"moments", "--definition", "all", "--order", "2", "--grid-n", "128",
                                      "--q-min", "-12", "--q-max", "12"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto p1 = scratch("d1.bin");
  const auto p2 = scratch("d2.bin");
  run({"distribution", "--format", "binary", "--grid-n", "128", "--q-min", "-12", "--q-max", "12", "--out", p1.string()});
  run({"distribution", "--format", "binary", "--grid-n", "128", "--q-min", "-12", "--q-max", "12", "--out", p2.string()});
  CHECK(slurp(p1) == slurp(p2));
}
