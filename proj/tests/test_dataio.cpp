#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fxcast/dataio.hpp"
#include "fxcast/errors.hpp"
#include "fxcast/rng.hpp"

using namespace fxcast;

static const char* kHeader = "Date,Open,High,Low,Close,Adj Close,Volume\n";

TEST_CASE("parse_ohlc_csv maps fields") {
    std::string csv = std::string(kHeader) + "2018-01-02,82.9,83.1,82.8,83.0,83.0,0\n";
    auto bars = parse_ohlc_csv(csv);
    REQUIRE(bars.size() == 1);
    CHECK(bars[0].date == Date{2018, 1, 2});
    CHECK(bars[0].close == 83.0);
    CHECK(bars[0].open == 82.9);
}

TEST_CASE("parse_ohlc_csv prefers Adj Close") {
    std::string csv = std::string(kHeader) + "2018-01-02,82.9,83.1,82.8,83.0,84.5,0\n";
    auto bars = parse_ohlc_csv(csv);
    CHECK(bars[0].close == 84.5);
}

TEST_CASE("parse_ohlc_csv null close becomes missing marker") {
    std::string csv = std::string(kHeader) + "2018-01-02,82.9,83.1,82.8,null,null,0\n";
    auto bars = parse_ohlc_csv(csv);
    CHECK_FALSE(bars[0].close.has_value());
}

TEST_CASE("parse_ohlc_csv error paths") {
    CHECK_THROWS_AS(parse_ohlc_csv(""), FormatError);
    CHECK_THROWS_AS(parse_ohlc_csv(kHeader), FormatError);  // header only
    CHECK_THROWS_AS(parse_ohlc_csv("Foo,Bar\n1,2\n"), FormatError);
    std::string bad_date = std::string(kHeader) + "not-a-date,1,1,1,1,1,0\n";
    CHECK_THROWS_WITH_AS(parse_ohlc_csv(bad_date), doctest::Contains("line 2"), FormatError);
}

static OhlcBar bar(int day, std::optional<double> close) {
    OhlcBar b;
    b.date = Date{2020, 1, day};
    b.open = b.high = b.low = close;
    b.close = close;
    return b;
}

TEST_CASE("forward_fill fills from prior values") {
    auto filled = forward_fill({bar(1, 83.0), bar(2, std::nullopt), bar(3, 84.0)});
    REQUIRE(filled.size() == 3);
    CHECK(*filled[1].close == 83.0);
    CHECK(*filled[2].close == 84.0);
}

TEST_CASE("forward_fill drops leading missing rows") {
    ValidationReport report;
    auto filled = forward_fill({bar(1, std::nullopt), bar(2, 83.0)}, &report);
    REQUIRE(filled.size() == 1);
    CHECK(*filled[0].close == 83.0);
    CHECK(report.dropped_rows == std::vector<std::string>{"2020-01-01"});
}

TEST_CASE("forward_fill identity on complete input") {
    auto input = std::vector<OhlcBar>{bar(1, 83.0), bar(2, 84.0)};
    auto filled = forward_fill(input);
    CHECK(*filled[0].close == 83.0);
    CHECK(*filled[1].close == 84.0);
}

TEST_CASE("forward_fill is idempotent") {
    auto once = forward_fill({bar(1, 83.0), bar(2, std::nullopt), bar(4, 85.0),
                              bar(5, std::nullopt)});
    auto twice = forward_fill(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(*once[i].close == *twice[i].close);
}

TEST_CASE("forward_fill keeps the last duplicate date") {
    ValidationReport report;
    auto b1 = bar(1, 83.0);
    auto b2 = bar(1, 90.0);
    auto filled = forward_fill({b1, b2, bar(2, 84.0)}, &report);
    REQUIRE(filled.size() == 2);
    CHECK(*filled[0].close == 90.0);
    CHECK(report.duplicate_dates.size() == 1);
}

TEST_CASE("forward_fill with all closes missing fails") {
    CHECK_THROWS_AS(forward_fill({bar(1, std::nullopt), bar(2, std::nullopt)}), DataError);
}

TEST_CASE("invert_rates flips values and orientation") {
    RateSeries s;
    s.dates = {Date{2020, 1, 1}, Date{2020, 1, 2}};
    s.values = {250.0 / 3.0, 1.0};  // 83.333... taka per dollar
    s.orientation = Orientation::UsdPerBdt;

    auto inv = invert_rates(s);
    CHECK(inv.orientation == Orientation::BdtPerUsd);
    CHECK(inv.values[0] == doctest::Approx(0.012).epsilon(1e-9));
    CHECK(inv.values[1] == 1.0);  // fixed point

    auto back = invert_rates(inv);
    CHECK(back.orientation == Orientation::UsdPerBdt);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(back.values[i] == doctest::Approx(s.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("invert_rates rejects non-positive values") {
    RateSeries s;
    s.dates = {Date{2020, 1, 1}, Date{2020, 1, 2}};
    s.values = {83.0, -1.0};
    CHECK_THROWS_WITH_AS(invert_rates(s), doctest::Contains("2020-01-02"), DomainError);
}

TEST_CASE("rate series CSV round trip") {
    RateSeries s;
    s.dates = {Date{2020, 1, 1}, Date{2020, 1, 2}, Date{2020, 1, 3}};
    s.values = {0.0120000001, 0.0119, 0.0118};
    s.orientation = Orientation::UsdPerBdt;
    auto rt = rate_series_from_csv(rate_series_to_csv(s));
    REQUIRE(rt.values.size() == 3);
    CHECK(rt.orientation == s.orientation);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rt.values[i] == s.values[i]);  // 17 sig digits round-trip exactly
        CHECK(rt.dates[i] == s.dates[i]);
    }
}

TEST_CASE("fetch_remote cache hit with network down") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "fxcast_cache_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    // Port 9 (discard) refuses immediately, simulating a dead network.
    std::string url = "http://127.0.0.1:9/data.csv";

    char key[32];
    std::snprintf(key, sizeof(key), "%016llx", (unsigned long long)fnv1a64(url));
    {
        std::ofstream out(dir / (std::string(key) + ".csv"));
        out << "cached,body\n";
    }
    bool stale = false;
    auto body = fetch_remote(url, dir.string(), &stale);
    CHECK(body == "cached,body\n");
    CHECK(stale);
    fs::remove_all(dir);
}

TEST_CASE("fetch_remote with no cache and no network fails") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "fxcast_cache_empty";
    fs::remove_all(dir);
    CHECK_THROWS_AS(fetch_remote("http://127.0.0.1:9/none.csv", dir.string()), FetchError);
    fs::remove_all(dir);
}

TEST_CASE("parse-fill-invert preserves row count modulo reported drops") {
    std::string csv = std::string(kHeader) +
                      "2020-01-01,null,null,null,null,null,0\n"
                      "2020-01-02,83,83,83,83,83,0\n"
                      "2020-01-03,null,null,null,null,null,0\n"
                      "2020-01-06,84,84,84,84,84,0\n";
    ValidationReport report;
    auto bars = parse_ohlc_csv(csv);
    auto filled = forward_fill(bars, &report);
    auto series = to_rate_series(filled, Orientation::BdtPerUsd);
    auto inverted = invert_rates(series);
    CHECK(bars.size() == inverted.values.size() + report.dropped_rows.size());
}
