#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efm/field_io.hpp"
#include "efm/simulation.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "efm_cli_tests";

int run(const std::string& args) {
    const std::string cmd = std::string(EFM_BIN_PATH) + " " + args +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct Setup {
    Setup() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};
const Setup setup;

} // namespace

TEST_CASE("no subcommand or unknown file fails with exit code 2") {
    CHECK(run("") != 0);
    CHECK(run("convert " + (kWork / "missing.fgrid").string() + " " +
              (kWork / "out.csv").string()) == 2);
    CHECK(run("distance " + (kWork / "missing.fgrid").string() + " " +
              (kWork / "missing2.fgrid").string()) == 2);
}

TEST_CASE("convert round trips FGRID1 through CSV bitwise") {
    const efm::Field f = efm::synthetic_base_field(6, 8, 20, 4);
    const fs::path a = kWork / "a.fgrid";
    const fs::path csv = kWork / "a.csv";
    const fs::path b = kWork / "b.fgrid";
    efm::write_field(f, a);
    REQUIRE(run("convert " + a.string() + " " + csv.string()) == 0);
    REQUIRE(run("convert " + csv.string() + " " + b.string()) == 0);
    const efm::Field g = efm::read_field(b);
    CHECK(g.values() == f.values());
    CHECK(g.grid() == f.grid());
}

TEST_CASE("simulate: seeded runs are reproducible, seeds differ") {
    const std::string base = "simulate --nlat 8 --nlon 12 --ntime 60 "
                             "--ranges 3000,9000 ";
    REQUIRE(run(base + "--seed 7 -o " + (kWork / "s7a").string()) == 0);
    REQUIRE(run(base + "--seed 7 -o " + (kWork / "s7b").string()) == 0);
    REQUIRE(run(base + "--seed 8 -o " + (kWork / "s8").string()) == 0);
    CHECK(slurp(kWork / "s7a/disentanglement.csv") ==
          slurp(kWork / "s7b/disentanglement.csv"));
    CHECK(slurp(kWork / "s7a/bias_recovery.csv") ==
          slurp(kWork / "s7b/bias_recovery.csv"));
    CHECK(slurp(kWork / "s7a/disentanglement.csv") !=
          slurp(kWork / "s8/disentanglement.csv"));
}

TEST_CASE("simulate: outputs are byte-identical across thread counts") {
    const std::string base = "simulate --nlat 8 --nlon 12 --ntime 60 "
                             "--ranges 3000,9000 --seed 7 ";
    REQUIRE(run("--threads 1 " + base + "-o " + (kWork / "t1").string()) == 0);
    REQUIRE(run("--threads 4 " + base + "-o " + (kWork / "t4").string()) == 0);
    for (const char* name :
         {"disentanglement.csv", "bias_recovery.csv", "bias_estimated_j1.png",
          "bias_true_j3.png"})
        CHECK(slurp(kWork / "t1" / name) == slurp(kWork / "t4" / name));
}

TEST_CASE("simulate writes a manifest naming the subcommand") {
    const fs::path out = kWork / "man";
    REQUIRE(run("simulate --nlat 6 --nlon 8 --ntime 40 --ranges 5000 --seed 1 -o " +
                out.string()) == 0);
    const std::string manifest = slurp(out / "manifest.json");
    CHECK(manifest.find("\"simulate\"") != std::string::npos);
    CHECK(manifest.find("\"seed\"") != std::string::npos);
}

TEST_CASE("distance: self-distance ranks first with zero components") {
    const efm::Field f = efm::synthetic_base_field(8, 12, 48, 11);
    const efm::Field g = efm::apply_modification(f, {2, 2});
    const fs::path ref = kWork / "ref.fgrid";
    const fs::path self = kWork / "self.fgrid";
    const fs::path mod = kWork / "mod.fgrid";
    efm::write_field(f, ref);
    efm::write_field(f, self);
    efm::write_field(g, mod);
    const fs::path out = kWork / "dist";
    REQUIRE(run("distance " + ref.string() + " " + self.string() + " " +
                mod.string() + " --range-km 4000 --centers ref -o " +
                out.string()) == 0);
    const std::string ranking = slurp(out / "ranking.csv");
    // Header, then the self model first with a (near-)zero d_sa.
    std::istringstream is(ranking);
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    CHECK(header.find("d_sa") != std::string::npos);
    CHECK(first.find("self") != std::string::npos);
    CHECK(fs::exists(out / "self_local.csv"));
    CHECK(fs::exists(out / "mod_amplitude.png"));
    CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("distance runs are byte-identical across thread counts") {
    const fs::path ref = kWork / "ref.fgrid";
    const fs::path mod = kWork / "mod.fgrid";
    for (int t : {1, 2, 8})
        REQUIRE(run("--threads " + std::to_string(t) + " distance " +
                    ref.string() + " " + mod.string() +
                    " --range-km 4000 --centers ref -o " +
                    (kWork / ("d" + std::to_string(t))).string()) == 0);
    CHECK(slurp(kWork / "d1/ranking.csv") == slurp(kWork / "d2/ranking.csv"));
    CHECK(slurp(kWork / "d1/ranking.csv") == slurp(kWork / "d8/ranking.csv"));
    CHECK(slurp(kWork / "d1/mod_local.csv") == slurp(kWork / "d8/mod_local.csv"));
}

TEST_CASE("timing-bias produces an events table over the region") {
    const efm::Field f = efm::synthetic_base_field(18, 36, 73, 2);
    const efm::Field g = efm::apply_modification(f, {0, 2});
    const fs::path ref = kWork / "tb_ref.fgrid";
    const fs::path mod = kWork / "tb_mod.fgrid";
    efm::write_field(f, ref);
    efm::write_field(g, mod);
    const fs::path out = kWork / "tb";
    REQUIRE(run("timing-bias " + ref.string() + " " + mod.string() +
                " --range-km 2500 -o " + out.string()) == 0);
    const std::string events = slurp(out / "events.csv");
    CHECK(events.find("onset_day") != std::string::npos);
    CHECK(fs::exists(out / "onset_bias.png"));
    CHECK(fs::exists(out / "retreat_bias.png"));
}
