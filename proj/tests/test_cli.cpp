#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qbattery/cli.hpp"

using namespace qbattery::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Table parse(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in);
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qbattery_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("energy grid") {
    const auto r = call({"energy", "--zeta", "1", "--tau", "1", "--t-min", "-4", "--t-max", "4", "--steps", "400"});
    REQUIRE(r.code == 0);
    const auto t = parse(r.out);
    CHECK(t.columns == std::vector<std::string>{"t", "E_over_Emax"});
    REQUIRE(t.rows.size() == 400);
    CHECK(t.rows.front()[0] == -4.0);
    CHECK(t.rows.back()[0] == 4.0);
    CHECK(t.rows.front()[1] < 1e-6);
    CHECK(t.rows.back()[1] > 0.999);
  }

  TEST_CASE("peak power at weak drive") {
    const auto r = call({"peak-power", "--zeta", "0.01"});
    REQUIRE(r.code == 0);
    const auto t = parse(r.out);
    CHECK(std::fabs(t.values("t_P_over_tau").at(0) - 0.506) < 1e-3);
  }

  TEST_CASE("outputs are deterministic and thread-independent") {
    const std::vector<std::string> args{"sweep", "--zeta", "0.2,0.7,1.5,3,6", "--alpha", "0.3,0.8"};
    const auto one = call(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    const auto four = call(threaded);
    REQUIRE(one.code == 0);
    CHECK(one.out == call(args).out);
    CHECK(one.out == four.out);
    const auto t = parse(one.out);
    CHECK(t.values("zeta") == std::vector<double>{0.2, 0.7, 1.5, 3, 6});
    CHECK(t.column("t_alpha_0.3") < t.columns.size());
  }

  TEST_CASE("csv keeps full precision") {
    const auto r = call({"energy", "--zeta", "0.3", "--steps", "7"});
    std::istringstream in(r.out);
    const auto t = read_csv(in);
    std::ostringstream again;
    write_table(again, t, Format::csv, "energy");
    CHECK(again.str() == r.out);
  }

  TEST_CASE("json output") {
    const auto r = call({"charge-time", "--zeta", "2", "--alpha", "0.1", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "charge-time");
    CHECK(j["columns"][0] == "alpha");
    CHECK(j["rows"].size() == 1);
    CHECK(j["rows"][0][3].is_null());  // large-zeta form undefined at zeta = 2, alpha = 0.1
  }

  TEST_CASE("exit codes") {
    CHECK(call({"--help"}).code == 0);
    CHECK(call({}).code == 2);
    CHECK(call({"energy", "--no-such-flag"}).code == 2);
    CHECK(call({"energy", "--zeta", "abc"}).code == 2);
    CHECK(call({"energy", "--zeta", "-1"}).code == 2);
    CHECK(call({"energy", "--steps", "1"}).code == 2);
    CHECK(call({"energy", "--t-min", "2", "--t-max", "1"}).code == 2);
    CHECK(call({"energy", "--format", "xml"}).code == 2);
    CHECK(call({"fig", "9z"}).code == 2);
    CHECK(call({"fock-check", "--fock-dim", "8", "--tail-tol", "1e-6"}).code == 2);
    CHECK(call({"power", "--pulse", "sech"}).code == 2);
    const auto breach = call({"fock-check", "--zeta", "1", "--fock-dim", "10", "--steps", "3"});
    CHECK(breach.code == 1);
    CHECK(breach.err.find("truncation") != std::string::npos);
    CHECK(breach.out.empty());
  }

  TEST_CASE("config file with flag override") {
    const auto path = scratch("config.ini");
    {
      std::ofstream cfg(path);
      cfg << "zeta=2\nsteps=5\nt-min=-1\nt-max=1\n";
    }
    const auto from_file = parse(call({"energy", "--config", path.string()}).out);
    CHECK(from_file.rows.size() == 5);
    CHECK(from_file.rows.front()[0] == -1.0);
    const auto overridden = parse(call({"energy", "--config", path.string(), "--steps", "3"}).out);
    CHECK(overridden.rows.size() == 3);
    CHECK(overridden.rows[1][1] == doctest::Approx(from_file.rows[2][1]).epsilon(1e-15));
    std::filesystem::remove(path);
  }

  TEST_CASE("output file") {
    const auto path = scratch("out.csv");
    const auto r = call({"quadratures", "--zeta", "2", "--theta-steps", "9", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto t = read_csv(in);
    CHECK(t.rows.size() == 9);
    std::filesystem::remove(path);
    CHECK(call({"energy", "--out", "/nonexistent-dir/x.csv"}).code == 1);
  }

  TEST_CASE("moments and fock-check commands") {
    const auto m = parse(call({"moments", "--pulse", "sech", "--zeta", "1", "--t-min", "-8", "--t-max", "8", "--steps", "3"}).out);
    CHECK(m.values("n").back() == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-3));
    const auto f = call({"fock-check", "--zeta", "0.5", "--steps", "5", "--t-max", "6"});
    REQUIRE(f.code == 0);
    const auto t = parse(f.out);
    CHECK(t.values("n").back() == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-4));
    CHECK(std::isnan(t.values("ergotropy_ratio").front()));
    CHECK(t.values("ergotropy_ratio").back() == doctest::Approx(1.0).epsilon(1e-8));
    const auto lossy = call({"fock-check", "--zeta", "0.5", "--engine", "lindblad", "--kappa", "0.1", "--steps", "3"});
    CHECK(lossy.code == 0);
  }

  TEST_CASE("figure panels") {
    CHECK(figure_panels() == std::vector<std::string>{"2a", "2b", "2c", "3a", "3b", "3c"});
    for (const auto& panel : figure_panels()) {
      CAPTURE(panel);
      const auto a = call({"fig", panel, "--steps", "11"});
      const auto b = call({"fig" + panel, "--steps", "11"});
      REQUIRE(a.code == 0);
      CHECK(a.out == b.out);
      CHECK(parse(a.out).rows.size() >= 11);
    }
    const auto t = parse(call({"fig", "2a"}).out);
    CHECK(t.columns == std::vector<std::string>{"t_over_tau", "zeta_0.1", "zeta_0.5", "zeta_1", "zeta_2", "zeta_4", "delta"});
  }
}
