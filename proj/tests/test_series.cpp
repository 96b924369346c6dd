#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bubblescope/csv.hpp"
#include "bubblescope/month.hpp"
#include "bubblescope/series.hpp"

using namespace bubblescope;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("month stamps parse and format", "[series]") {
    CHECK(parse_month("200801") == MonthStamp{2008, 1});
    CHECK(parse_month("201705") == MonthStamp{2017, 5});
    CHECK(parse_month("2017-05") == MonthStamp{2017, 5});
    CHECK(MonthStamp{2008, 1}.str() == "200801");

    CHECK_THROWS_AS(parse_month("200013"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month("200800"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month("20081"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month("abcdef"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month(""), std::invalid_argument);
}

TEST_CASE("parse after format is the identity", "[series]") {
    for (int idx = -240; idx <= 480; ++idx) {
        const MonthStamp s = MonthStamp::from_index(idx);
        CHECK(parse_month(s.str()) == s);
        CHECK(s.index() == idx);
    }
}

TEST_CASE("month differences", "[series]") {
    CHECK(month_diff(MonthStamp{2017, 5}, MonthStamp{2008, 1}) == 112);
    CHECK(month_diff(MonthStamp{2017, 9}, MonthStamp{2017, 5}) == 4);
    CHECK(month_diff(MonthStamp{2008, 1}, MonthStamp{2008, 1}) == 0);

    // antisymmetry over a grid
    for (int a = -30; a <= 30; a += 7) {
        for (int b = -30; b <= 30; b += 5) {
            const auto sa = MonthStamp::from_index(a);
            const auto sb = MonthStamp::from_index(b);
            CHECK(month_diff(sa, sb) == -month_diff(sb, sa));
        }
    }
}

TEST_CASE("price series validates construction", "[series]") {
    CHECK_THROWS_AS(PriceSeries(MonthStamp{2008, 1}, {100.0}), std::invalid_argument);
    CHECK_THROWS_AS(PriceSeries(MonthStamp{2008, 1}, {100.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PriceSeries(MonthStamp{2008, 1}, {100.0, -5.0}), std::invalid_argument);

    const PriceSeries s(MonthStamp{2008, 1}, {100.0, 101.0, 102.0});
    CHECK(s.end() == MonthStamp{2008, 3});
    CHECK(s.value_at(MonthStamp{2008, 2}) == 101.0);
    CHECK_THROWS_AS(s.value_at(MonthStamp{2008, 4}), std::out_of_range);
}

TEST_CASE("windows enforce ordering and minimum length", "[series]") {
    CHECK_THROWS_AS(Window(MonthStamp{2017, 5}, MonthStamp{2008, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Window(MonthStamp{2008, 1}, MonthStamp{2008, 1}), std::invalid_argument);
    // 23 observations is one short of the minimum
    CHECK_THROWS_AS(Window(MonthStamp{2008, 1}, MonthStamp{2009, 11}), std::invalid_argument);
    const Window w(MonthStamp{2008, 1}, MonthStamp{2009, 12});
    CHECK(w.n_months() == 24);
    CHECK(Window(MonthStamp{2008, 1}, MonthStamp{2017, 5}).n_months() == 113);
}

TEST_CASE("slice covers the window inclusively", "[series]") {
    std::vector<double> v;
    for (int i = 0; i < 114; ++i) v.push_back(100.0 + i);  // Jan/2008 .. Jun/2017
    const PriceSeries s(MonthStamp{2008, 1}, v);

    const Window w(MonthStamp{2008, 1}, MonthStamp{2017, 5});
    const PriceSeries part = slice(s, w);
    CHECK(part.size() == 113);
    CHECK(part.start() == MonthStamp{2008, 1});
    CHECK(part.end() == MonthStamp{2017, 5});
    CHECK(part[0] == 100.0);
    CHECK(part[112] == 212.0);

    // full-span window is the identity
    const Window full(MonthStamp{2008, 1}, MonthStamp{2017, 6});
    const PriceSeries same = slice(s, full);
    CHECK(same.values() == s.values());

    // slicing a slice with the same window is idempotent
    const PriceSeries again = slice(part, w);
    CHECK(again.values() == part.values());
    CHECK(again.start() == part.start());

    CHECK_THROWS_AS(slice(s, Window(MonthStamp{2008, 1}, MonthStamp{2017, 7})),
                    std::out_of_range);
    CHECK_THROWS_AS(slice(s, Window(MonthStamp{2007, 12}, MonthStamp{2017, 5})),
                    std::out_of_range);
}

TEST_CASE("csv loads a two column monthly file", "[series][csv]") {
    std::string body = "date,shanghai\n";
    MonthStamp t{2008, 1};
    for (int i = 0; i < 114; ++i) {
        body += t.plus_months(i).str() + "," + std::to_string(10000 + 37 * i) + "\n";
    }
    const auto path = write_temp("bs_ok.csv", body);
    const SeriesTable table = load_csv(path.string());
    REQUIRE(table.columns.size() == 1);
    const PriceSeries& s = table.get("shanghai");
    CHECK(s.size() == 114);
    CHECK(s.start() == MonthStamp{2008, 1});
    CHECK(s[1] == 10037.0);
    std::filesystem::remove(path);
}

TEST_CASE("csv accepts dashed dates and multiple columns", "[series][csv]") {
    const auto path = write_temp("bs_multi.csv",
                                 "date,a,b\n"
                                 "2008-01,1.5,2.5\n"
                                 "2008-02,1.6,2.6\n"
                                 "2008-03,1.7,2.7\n");
    const SeriesTable table = load_csv(path.string());
    REQUIRE(table.columns.size() == 2);
    CHECK(table.has("a"));
    CHECK(table.get("b")[2] == 2.7);
    CHECK_THROWS_AS(table.get("c"), std::invalid_argument);
    std::filesystem::remove(path);
}

TEST_CASE("csv rejects gaps, duplicates and bad values", "[series][csv]") {
    const auto gap = write_temp("bs_gap.csv",
                                "date,p\n200801,1\n200802,2\n200804,3\n");
    try {
        load_csv(gap.string());
        FAIL("expected gap error");
    } catch (const io_error& e) {
        CHECK(std::string(e.what()).find("gap at 200803") != std::string::npos);
    }
    std::filesystem::remove(gap);

    const auto dup = write_temp("bs_dup.csv", "date,p\n200801,1\n200801,2\n");
    CHECK_THROWS_AS(load_csv(dup.string()), io_error);
    std::filesystem::remove(dup);

    const auto zero = write_temp("bs_zero.csv", "date,p\n200801,1\n200802,0\n");
    CHECK_THROWS_AS(load_csv(zero.string()), io_error);
    std::filesystem::remove(zero);

    const auto text = write_temp("bs_text.csv", "date,p\n200801,1\n200802,oops\n");
    CHECK_THROWS_AS(load_csv(text.string()), io_error);
    std::filesystem::remove(text);

    CHECK_THROWS_AS(load_csv("/nonexistent/path.csv"), io_error);
}

TEST_CASE("csv writer round-trips through the loader", "[series][csv]") {
    const PriceSeries a(MonthStamp{2010, 11}, {1.25, 2.5, 3.75, 5.125});
    const PriceSeries b(MonthStamp{2010, 11}, {10.0, 20.0, 30.0, 40.0});
    const auto path = std::filesystem::temp_directory_path() / "bs_round.csv";
    save_csv(path.string(), {{"first", a}, {"second", b}});
    const SeriesTable table = load_csv(path.string());
    CHECK(table.get("first").values() == a.values());
    CHECK(table.get("second").values() == b.values());
    CHECK(table.get("first").start() == a.start());
    std::filesystem::remove(path);
}
