#include "hitlog/hitcount.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hitlog::hitcount;
using hitlog::mr::Collector;
using hitlog::mr::KeyValuePair;
using hitlog::testing::counting_oracle;
using hitlog::testing::counts_from_parts;
using hitlog::testing::fixture;
using hitlog::testing::slurp;
using hitlog::testing::spit;
using hitlog::testing::TempDir;
namespace fs = std::filesystem;

TEST_CASE("quarter_of") {
    using hitlog::logmodel::Date;
    CHECK(quarter_of(Date{13, 1, 2012}) == "Q1");
    CHECK(quarter_of(Date{31, 3, 2012}) == "Q1");
    CHECK(quarter_of(Date{1, 4, 2012}) == "Q2");
    CHECK(quarter_of(Date{4, 9, 2012}) == "Q3");
    CHECK(quarter_of(Date{31, 12, 2012}) == "Q4");
}

TEST_CASE("tag names") {
    for (auto tag : all_tags()) {
        const auto name = tag_name(tag);
        CHECK(name.find('-') == std::string_view::npos);
        CHECK(parse_tag_name(name) == tag);
    }
    CHECK(all_tags().size() == 7);
    CHECK_FALSE(parse_tag_name("HitsNothing").has_value());
    CHECK(parse_tag_list("HitsCity, HitsPage") == TagSet{FieldTag::City, FieldTag::Page});
    CHECK(parse_tag_list("all") == all_tags());
    CHECK_THROWS(parse_tag_list("HitsCity,Bogus"));
    CHECK_THROWS(parse_tag_list(""));
}

TEST_CASE("TaggedKey round trip splits on the first dash") {
    CHECK(serialize(TaggedKey{FieldTag::Page, "/pizza/cosmos-e-solutions-pvt-ltd.html"}) ==
          "HitsPage-/pizza/cosmos-e-solutions-pvt-ltd.html");
    const auto k = parse_tagged_key("HitsPage-/pizza/cosmos-e-solutions-pvt-ltd.html");
    REQUIRE(k.has_value());
    CHECK(k->tag == FieldTag::Page);
    CHECK(k->value == "/pizza/cosmos-e-solutions-pvt-ltd.html");
    CHECK_FALSE(parse_tagged_key("nodash").has_value());
    CHECK_FALSE(parse_tagged_key("Unknown-x").has_value());

    std::mt19937_64 rng(17);
    const std::string alphabet = "ab-/.-Q1";
    for (int i = 0; i < 300; ++i) {
        const auto tag = static_cast<FieldTag>(rng() % 7);
        std::string value;
        for (std::size_t n = rng() % 12; n > 0; --n) value += alphabet[rng() % alphabet.size()];
        const TaggedKey key{tag, value};
        CHECK(parse_tagged_key(serialize(key)) == key);
    }
}

TEST_CASE("hit_map") {
    SUBCASE("first sample log line, all tags") {
        Collector c;
        hit_map("pizza/index.html#13/01/2012#1#48#india#mh#pune", c);
        const auto& pairs = c.pairs();
        CHECK(pairs.size() == 7);
        auto has = [&](const std::string& key) {
            return std::count(pairs.begin(), pairs.end(), KeyValuePair{key, "1"}) == 1;
        };
        CHECK(has("HitsPage-pizza/index.html"));
        CHECK(has("HitsCity-pune"));
        CHECK(has("HitsQuarter-Q1"));
        CHECK(has("HitsAge-48"));
        CHECK(has("HitsState-mh"));
        CHECK(has("HitsCountry-india"));
        CHECK(has("HitsDate-13/01/2012"));
        CHECK(c.counters().at(std::string(kValidCounter)) == 1);
    }
    SUBCASE("malformed line emits nothing and is counted") {
        Collector c;
        hit_map("garbage", c);
        CHECK(c.pairs().empty());
        CHECK(c.counters().at(std::string(kSkippedCounter)) == 1);
    }
    SUBCASE("value is the record's hit field") {
        Collector c;
        hit_map("p#01/01/2012#5#20#india#mh#pune", c, {FieldTag::City});
        REQUIRE(c.pairs().size() == 1);
        CHECK(c.pairs()[0] == KeyValuePair{"HitsCity-pune", "5"});
    }
    SUBCASE("sample log city tag: 18 pairs, pune 8 / nashik 5 / bombay 5") {
        Collector c;
        for (const auto& line : hitlog::testing::split_lines(slurp(fixture("sample18.log")))) {
            hit_map(line, c, {FieldTag::City});
        }
        CHECK(c.pairs().size() == 18);
        std::map<std::string, int> grouped;
        for (const auto& kv : c.pairs()) ++grouped[kv.key];
        CHECK(grouped == std::map<std::string, int>{{"HitsCity-pune", 8}, {"HitsCity-nashik", 5}, {"HitsCity-bombay", 5}});
    }
}

TEST_CASE("hit_reduce") {
    Collector c;
    const std::vector<std::string> ones = {"1", "1", "1"};
    hit_reduce("HitsCity-pune", ones, c);
    CHECK(c.pairs().back() == KeyValuePair{"HitsCity-pune", "3"});
    const std::vector<std::string> single = {"5"};
    hit_reduce("k", single, c);
    CHECK(c.pairs().back() == KeyValuePair{"k", "5"});

    const std::vector<std::string> bad = {"1", "x"};
    try {
        hit_reduce("k", bad, c);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(e.key() == "k");
    }
    const std::vector<std::string> negative = {"-1"};
    CHECK_THROWS_AS(hit_reduce("k", negative, c), NumericError);
    const std::vector<std::string> overflow = {"9223372036854775807", "1"};
    CHECK_THROWS_AS(hit_reduce("k", overflow, c), NumericError);
}

TEST_CASE("hit_reduce is permutation invariant") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> values;
        std::int64_t expected = 0;
        for (std::size_t n = 1 + rng() % 20; n > 0; --n) {
            const auto v = static_cast<std::int64_t>(rng() % 1000);
            expected += v;
            values.push_back(std::to_string(v));
        }
        std::shuffle(values.begin(), values.end(), rng);
        Collector c;
        hit_reduce("k", values, c);
        CHECK(c.pairs().back().value == std::to_string(expected));
    }
}

TEST_CASE("run_hitcount") {
    TempDir tmp("hc");
    SUBCASE("one record, city tag") {
        spit(tmp / "one.log", "pizza/index.html#13/01/2012#1#48#india#mh#pune\n");
        run_hitcount(tmp / "one.log", {FieldTag::City}, {}, tmp / "out");
        CHECK(slurp(tmp / "out" / "part-00000") == "HitsCity-pune\t1\n");
    }
    SUBCASE("sample log pages: 11 / 4 / 3") {
        const auto res = run_hitcount(fixture("sample18.log"), {FieldTag::Page}, {2, 2, 200, {}}, tmp / "out");
        CHECK(counts_from_parts(tmp / "out") ==
              hitlog::testing::Counts{{"HitsPage-pizza/index.html", 11},
                                      {"HitsPage-/pizza/anywhere-banking.html", 4},
                                      {"HitsPage-/pizza/cosmos-e-solutions-pvt-ltd.html", 3}});
        CHECK(res.counters.at(std::string(kValidCounter)) == 18);
    }
    SUBCASE("sample log quarters: 4 / 4 / 6 / 4") {
        run_hitcount(fixture("sample18.log"), {FieldTag::Quarter}, {}, tmp / "out");
        CHECK(slurp(tmp / "out" / "part-00000") == "HitsQuarter-Q1\t4\nHitsQuarter-Q2\t4\nHitsQuarter-Q3\t6\nHitsQuarter-Q4\t4\n");
    }
    SUBCASE("malformed lines are skipped and counted") {
        spit(tmp / "mix.log", "p#01/01/2012#1#20#india#mh#pune\njunk\np#02/01/2012#1#21#india#mh#nashik\n");
        const auto res = run_hitcount(tmp / "mix.log", {FieldTag::City}, {}, tmp / "out");
        CHECK(res.counters.at(std::string(kSkippedCounter)) == 1);
        CHECK(res.counters.at(std::string(kValidCounter)) == 2);
    }
    SUBCASE("per-tag mass conservation and split invariance") {
        hitlog::logmodel::GeneratorConfig g;
        g.record_count = 5000;
        g.seed = 8;
        std::ostringstream os;
        hitlog::logmodel::write_records(os, hitlog::logmodel::generate(g));
        spit(tmp / "g.log", os.str());
        run_hitcount(tmp / "g.log", all_tags(), {3, 2, 0, {}}, tmp / "single");
        const auto single = counts_from_parts(tmp / "single");
        CHECK(single == counting_oracle(os.str()));
        for (const auto& tag : hitlog::testing::oracle_tag_names()) {
            std::int64_t total = 0;
            for (const auto& [k, v] : hitlog::testing::filter_prefix(single, tag + "-")) total += v;
            CHECK(total == 5000);
        }
        const auto nodes = hitlog::mr::distribute(tmp / "g.log", 3, tmp / "nodes");
        run_hitcount(nodes, all_tags(), {2, 4, 0, {}}, tmp / "multi");
        CHECK(counts_from_parts(tmp / "multi") == single);
    }
    SUBCASE("empty tag set is rejected") {
        CHECK_THROWS_AS(run_hitcount(fixture("sample18.log"), {}, {}, tmp / "out"), std::invalid_argument);
    }
}
