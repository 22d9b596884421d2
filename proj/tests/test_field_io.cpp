#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efm/climatology.hpp"
#include "efm/errors.hpp"
#include "efm/field.hpp"
#include "efm/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace efm;
namespace fs = std::filesystem;

namespace {

fs::path tmp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "efm_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

Field random_field(std::size_t nlat, std::size_t nlon, std::size_t ntime,
                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> v(nlat * nlon * ntime);
    for (double& x : v) x = u(rng);
    return Field(SpatialGrid::uniform(nlat, nlon), ntime, std::move(v), "test");
}

} // namespace

TEST_CASE("Field validates construction") {
    const SpatialGrid g = SpatialGrid::uniform(2, 2);
    CHECK_THROWS_AS(Field(g, 3, std::vector<double>(12, 0.0)), ValidationError);
    CHECK_THROWS_AS(Field(g, 4, std::vector<double>(15, 0.0)), DimMismatch);
    std::vector<double> bad(16, 1.0);
    bad[7] = std::nan("");
    CHECK_THROWS_AS(Field(g, 4, std::move(bad)), NonFiniteValue);
    std::vector<double> inf(16, 1.0);
    inf[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Field(g, 4, std::move(inf)), NonFiniteValue);
}

TEST_CASE("Field accessors") {
    Field f = random_field(3, 4, 5, 1);
    CHECK(f.time_at(0) == 0.0);
    CHECK(f.time_at(4) == 1.0);
    const auto series = f.cell_series(1, 2);
    REQUIRE(series.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(series[k] == f.at(k, 1, 2));
}

TEST_CASE("FGRID1 round trip is exact") {
    const Field f = random_field(4, 6, 12, 7);
    const fs::path p = tmp_path("roundtrip.fgrid");
    write_field(f, p);
    const Field g = read_field(p);
    CHECK(g.grid() == f.grid());
    CHECK(g.ntime() == f.ntime());
    CHECK(g.name() == f.name());
    CHECK(g.units() == f.units());
    CHECK(g.days_per_unit() == f.days_per_unit());
    CHECK(g.values() == f.values()); // bitwise
}

TEST_CASE("FGRID1 rejects a bad magic") {
    const fs::path p = tmp_path("badmagic.fgrid");
    std::ofstream os(p, std::ios::binary);
    os << "NOPE!!" << std::string(64, '\0');
    os.close();
    CHECK_THROWS_AS(read_field(p), MagicMismatch);
}

TEST_CASE("FGRID1 rejects truncated payload") {
    const Field f = random_field(3, 3, 6, 3);
    const fs::path p = tmp_path("trunc.fgrid");
    write_field(f, p);
    const auto full = fs::file_size(p);
    fs::resize_file(p, full - 16);
    CHECK_THROWS_AS(read_field(p), DimMismatch);
}

TEST_CASE("FGRID1 rejects trailing bytes") {
    const Field f = random_field(3, 3, 6, 3);
    const fs::path p = tmp_path("extra.fgrid");
    write_field(f, p);
    std::ofstream os(p, std::ios::binary | std::ios::app);
    const double junk = 1.5;
    os.write(reinterpret_cast<const char*>(&junk), sizeof junk);
    os.close();
    CHECK_THROWS_AS(read_field(p), DimMismatch);
}

TEST_CASE("CSV round trip is exact via %.17g") {
    const Field f = random_field(3, 5, 8, 9);
    const fs::path p = tmp_path("roundtrip.csv");
    write_field_csv(f, p);
    const Field g = read_field_csv(p);
    CHECK(g.grid() == f.grid());
    CHECK(g.ntime() == f.ntime());
    CHECK(g.values() == f.values());
}

TEST_CASE("CSV parse error reports the line") {
    const fs::path p = tmp_path("bad.csv");
    std::ofstream os(p);
    os << "time,lat,lon,value\n";
    os << "0,-45,0,1.0\n";
    os << "0,-45,90,zebra\n";
    os.close();
    try {
        read_field_csv(p);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("daily_climatology: one year reproduces the input") {
    const SpatialGrid g = SpatialGrid::uniform(2, 3);
    std::vector<int> days(365);
    std::vector<double> v(365 * 6);
    for (int d = 0; d < 365; ++d) {
        days[d] = d + 1;
        for (int c = 0; c < 6; ++c)
            v[d * 6 + c] = std::sin(0.02 * d) + 0.1 * c;
    }
    const Field clim = daily_climatology({DailyStack{g, days, v}});
    REQUIRE(clim.ntime() == 365);
    for (std::size_t k = 0; k < clim.values().size(); ++k)
        CHECK(clim.values()[k] == doctest::Approx(v[k]).epsilon(1e-15));
}

TEST_CASE("daily_climatology averages across years") {
    const SpatialGrid g = SpatialGrid::uniform(2, 2);
    std::vector<int> days(365);
    for (int d = 0; d < 365; ++d) days[d] = d + 1;
    std::vector<double> a(365 * 4, 1.0), b(365 * 4, 3.0);
    const Field clim =
        daily_climatology({DailyStack{g, days, a}, DailyStack{g, days, b}});
    for (double x : clim.values()) CHECK(x == doctest::Approx(2.0));
}

TEST_CASE("daily_climatology requires every calendar day") {
    const SpatialGrid g = SpatialGrid::uniform(2, 2);
    std::vector<int> days(364);
    for (int d = 0; d < 364; ++d) days[d] = d + 1; // day 365 missing
    std::vector<double> v(364 * 4, 0.0);
    CHECK_THROWS_AS(daily_climatology({DailyStack{g, days, v}}), MissingDay);
}

TEST_CASE("rmse and mae: closed forms and ordering") {
    const Field f = random_field(4, 6, 8, 21);
    CHECK(rmse(f, f) == 0.0);
    CHECK(mae(f, f) == 0.0);
    std::vector<double> shifted = f.values();
    for (double& x : shifted) x += 2.0;
    const Field g = f.with_values(std::move(shifted));
    CHECK(rmse(f, g) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mae(f, g) == doctest::Approx(2.0).epsilon(1e-12));
    const Field h = random_field(4, 6, 8, 22);
    CHECK(mae(f, h) <= rmse(f, h) + 1e-12);
    const Field other_grid = random_field(4, 7, 8, 23);
    CHECK_THROWS_AS(rmse(f, other_grid), GridMismatch);
}
