// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hitlog/bench.hpp"
#include "hitlog/charting.hpp"
#include "hitlog/hitcount.hpp"
#include "hitlog/logmodel.hpp"
#include "hitlog/mrengine.hpp"
#include "hitlog/piglite.hpp"
#include "support/pig_gen.hpp"
#include "support/test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

namespace {

using namespace hitlog;
using testing::Counts;
using testing::counting_oracle;
using testing::counts_from_parts;
using testing::filter_prefix;
using testing::slurp;
using testing::spit;
using testing::TempDir;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kSpeedupRatio = 0.75;      // 4-worker median / 1-worker median at 100k
constexpr double kMonotoneSlack = 0.10;     // allowed per-step decrease in a timing series
constexpr double kWedgeSumTolerance = 1e-6;  // degrees
constexpr double kFractionTolerance = 1e-9;
constexpr std::size_t kMinCoresForSpeedup = 4;
constexpr std::size_t kRandomScripts = 50;
constexpr std::size_t kPreprocessCases = 1000;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

std::string describe_diff(const Counts& got, const Counts& want) {
    std::ostringstream os;
    os << got.size() << " keys vs " << want.size() << " expected";
    for (const auto& [k, v] : want) {
        const auto it = got.find(k);
        if (it == got.end() || it->second != v) {
            os << "; first mismatch " << k << ": " << (it == got.end() ? std::string("missing") : std::to_string(it->second))
               << " vs " << v;
            break;
        }
    }
    return os.str();
}

std::string generate_log(std::uint64_t seed, std::size_t n) {
    logmodel::GeneratorConfig g;
    g.seed = seed;
    g.record_count = n;
    std::ostringstream os;
    logmodel::write_records(os, logmodel::generate(g));
    return os.str();
}

std::vector<fs::path> part_files(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().rfind("part-", 0) == 0) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string sorted_lines(const fs::path& dir) {
    std::vector<std::string> lines;
    for (const auto& f : part_files(dir)) {
        for (auto& l : testing::split_lines(slurp(f))) lines.push_back(std::move(l));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
    Outcome o;
    TempDir tmp("acc1");
    std::size_t runs = 0;
    for (std::uint64_t seed : {1, 42, 7}) {
        for (std::size_t n : {1000, 10000, 100000}) {
            const auto text = generate_log(seed, n);
            const auto log = tmp / ("s" + std::to_string(seed) + "-" + std::to_string(n) + ".log");
            spit(log, text);
            const auto out = tmp / "out";
            hitcount::run_hitcount(log, hitcount::all_tags(), {2, 3, 0, {}}, out);
            const auto got = counts_from_parts(out);
            const auto want = counting_oracle(text);
            o.check(got == want, "seed " + std::to_string(seed) + " n " + std::to_string(n) + ": " +
                                     describe_diff(got, want));
            ++runs;
        }
    }
    o.detail = std::to_string(runs) + " runs, all 7 tags, exact";
    return o;
}

Outcome determinism() {
    Outcome o;
    TempDir tmp("acc2");
    spit(tmp / "log", generate_log(42, 100000));
    std::string combined_reference;
    std::size_t runs = 0;
    for (std::size_t partitions : {1, 2, 4}) {
        std::vector<std::string> reference;
        for (std::size_t workers : {1, 2, 4, 8}) {
            const auto out = tmp / ("w" + std::to_string(workers) + "p" + std::to_string(partitions));
            hitcount::run_hitcount(tmp / "log", hitcount::all_tags(), {workers, partitions, 0, {}}, out);
            ++runs;
            std::vector<std::string> bytes;
            for (const auto& f : part_files(out)) bytes.push_back(slurp(f));
            o.check(bytes.size() == partitions, "wrong part file count");
            if (reference.empty()) {
                reference = bytes;
            } else {
                o.check(bytes == reference, "workers " + std::to_string(workers) + " partitions " +
                                                std::to_string(partitions) + " differ from workers 1");
            }
            const auto combined = sorted_lines(out);
            if (combined_reference.empty()) combined_reference = combined;
            o.check(combined == combined_reference,
                    "combined output differs at partitions " + std::to_string(partitions));
        }
    }
    o.detail = std::to_string(runs) + " runs, byte-identical per partition count, identical combined content";
    return o;
}

std::string multi_load_script(std::size_t nodes, const std::string& pattern, const std::string& store_dir) {
    std::string s;
    std::string aliases;
    for (std::size_t i = 1; i <= nodes; ++i) {
        const auto alias = "N" + std::to_string(i);
        s += alias + " = load 'mr/node-" + std::to_string(i) +
             "' using PigStorage('\\t') AS (page:chararray,hits:int);\n";
        aliases += (i > 1 ? ", " : "") + alias;
    }
    s += "X = UNION " + aliases + ";\n";
    s += "Y = FILTER X BY (page matches " + pig::quote(pattern) + ") ;\n";
    s += "X = FOREACH Y GENERATE page,hits;\n";
    s += "X = GROUP X by page;\n";
    s += "X = FOREACH X GENERATE group , SUM(X.hits);\n";
    s += "store X into '" + store_dir + "' using PigStorage('\\t','-schema');\n";
    return s;
}

Outcome distribution_invariance() {
    Outcome o;
    TempDir tmp("acc3");
    spit(tmp / "log", generate_log(42, 100000));
    hitcount::run_hitcount(tmp / "log", hitcount::all_tags(), {1, 1, 0, {}}, tmp / "single");
    const auto single = counts_from_parts(tmp / "single");
    const auto single_pages = filter_prefix(single, "HitsPage-");

    for (std::size_t nodes : {2, 4}) {
        const auto root = tmp / ("n" + std::to_string(nodes));
        const auto files = mr::distribute(tmp / "log", nodes, root / "split");
        for (std::size_t i = 0; i < files.size(); ++i) {
            hitcount::run_hitcount(files[i], hitcount::all_tags(), {2, 2, 0, {}},
                                   root / "mr" / ("node-" + std::to_string(i + 1)));
        }
        struct Variant {
            std::string pattern;
            const Counts* expected;
            std::string name;
        };
        for (const auto& v : {Variant{"^HitsPage-.*", &single_pages, "pages"}, Variant{".*", &single, "all keys"}}) {
            const auto store_dir = "Data/" + std::to_string(nodes) + "-" + (v.expected == &single ? "all" : "pages");
            pig::execute(pig::parse(multi_load_script(nodes, v.pattern, store_dir)), root);
            const auto got = counts_from_parts(root / store_dir);
            o.check(got == *v.expected,
                    std::to_string(nodes) + " nodes, " + v.name + ": " + describe_diff(got, *v.expected));
        }
    }
    o.detail = "2 and 4 nodes, HitsPage and all-keys pipelines, " + std::to_string(single.size()) + " keys";
    return o;
}

Outcome script_fidelity() {
    Outcome o;
    TempDir tmp("acc4");
    const auto text = generate_log(7, 20000);
    spit(tmp / "log", text);
    const auto files = mr::distribute(tmp / "log", 2, tmp / "split");
    for (std::size_t i = 0; i < files.size(); ++i) {
        hitcount::run_hitcount(files[i], hitcount::all_tags(), {1, 1, 0, {}},
                               tmp / "mr" / ("node-" + std::to_string(i + 1)) );
    }
    const auto source = testing::reference_pig_script("mr/node-1/part-00000", "mr/node-2/part-00000");
    const auto script = pig::parse(source);
    o.check(script.statements.size() == 8, "reference script does not parse to 8 statements");
    const auto result = pig::execute(script, tmp.path());
    o.check(result.stored.size() == 1 && result.stored[0] == tmp / "Data/HitsPages", "unexpected store path");
    const auto got = counts_from_parts(tmp / "Data/HitsPages");
    const auto want = filter_prefix(counting_oracle(text), "HitsPage-");
    o.check(got == want, "stored totals: " + describe_diff(got, want));

    o.check(pig::parse(pig::pretty_print(script)) == script, "reference script round trip");
    testing::PigScriptGenerator gen(2024);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < kRandomScripts; ++i) {
        const auto s = gen.next();
        const bool same = pig::parse(pig::pretty_print(s)) == s;
        ok += same;
        o.check(same, "random script " + std::to_string(i) + " round trip");
    }
    o.detail = std::to_string(want.size()) + " page totals match oracle; round trip on reference + " +
               std::to_string(ok) + "/" + std::to_string(kRandomScripts) + " random scripts";
    return o;
}

Outcome sample_counts() {
    Outcome o;
    TempDir tmp("acc5");
    const auto fixture = testing::fixture("sample18.log");
    hitcount::run_hitcount(fixture, hitcount::all_tags(), {2, 2, 0, {}}, tmp / "out");
    const auto got = counts_from_parts(tmp / "out");

    // Recounted by hand from the 18 printed lines.
    const Counts cities = {{"HitsCity-pune", 8}, {"HitsCity-nashik", 5}, {"HitsCity-bombay", 5}};
    const Counts pages = {{"HitsPage-pizza/index.html", 11},
                          {"HitsPage-/pizza/anywhere-banking.html", 4},
                          {"HitsPage-/pizza/cosmos-e-solutions-pvt-ltd.html", 3}};
    o.check(filter_prefix(got, "HitsCity-") == cities, "city counts " + describe_diff(filter_prefix(got, "HitsCity-"), cities));
    o.check(filter_prefix(got, "HitsPage-") == pages, "page counts " + describe_diff(filter_prefix(got, "HitsPage-"), pages));
    for (const auto& tag : testing::oracle_tag_names()) {
        std::int64_t total = 0;
        for (const auto& [k, v] : filter_prefix(got, tag + "-")) total += v;
        o.check(total == 18, tag + " total " + std::to_string(total));
    }
    o.check(got == counting_oracle(slurp(fixture)), "full output differs from oracle scan");
    o.detail = "pune/nashik/bombay = 8/5/5, pages = 11/4/3, per-tag totals 18 (recounted)";
    return o;
}

Outcome scaling_trend() {
    Outcome o;
    TempDir tmp("acc6");
    bench::BenchPlan plan;  // 20k..100k x {1, 4}, 3 repetitions
    const auto result = bench::run_bench(plan, tmp.path());

    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> series;
    for (const auto& row : result.rows) series[row.worker_count].emplace_back(row.record_count, row.median_seconds);
    std::ostringstream timings;
    timings.setf(std::ios::fixed);
    timings.precision(3);
    for (auto& [workers, pts] : series) {
        std::sort(pts.begin(), pts.end());
        timings << " w" << workers << "=[";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            timings << (i ? " " : "") << pts[i].second;
            if (i > 0) {
                o.check(pts[i].second >= (1.0 - kMonotoneSlack) * pts[i - 1].second,
                        "workers " + std::to_string(workers) + " time drops more than 10% at n=" +
                            std::to_string(pts[i].first));
            }
        }
        timings << "]s";
    }
    const double t1 = series.at(1).back().second;
    const double t4 = series.at(4).back().second;
    const std::size_t cores = std::thread::hardware_concurrency();
    char ratio[64];
    std::snprintf(ratio, sizeof ratio, "%.3f", t4 / t1);
    std::string speedup;
    if (cores >= kMinCoresForSpeedup) {
        o.check(t4 <= kSpeedupRatio * t1, std::string("4-worker/1-worker ratio ") + ratio + " > 0.75");
        speedup = std::string("4w/1w ratio at 100k = ") + ratio + " (limit 0.75)";
    } else {
        speedup = std::string("speedup sub-check NOT APPLICABLE: host reports ") + std::to_string(cores) +
                  " hardware thread(s), needs >= 4; measured 4w/1w ratio " + ratio;
    }
    o.detail = "monotone within 10%;" + timings.str() + "; " + speedup;
    return o;
}

Outcome format_golden() {
    Outcome o;
    TempDir tmp("acc7");
    const auto text = generate_log(42, 100000);
    spit(tmp / "log", text);
    hitcount::run_hitcount(tmp / "log", hitcount::all_tags(), {2, 4, 0, {}}, tmp / "out");

    // Part files.
    const std::regex line_re("[^\t\n]+\t(0|[1-9][0-9]*)");
    std::size_t lines = 0;
    for (const auto& f : part_files(tmp / "out")) {
        const auto bytes = slurp(f);
        o.check(bytes.empty() || bytes.back() == '\n', f.filename().string() + " not LF-terminated");
        o.check(bytes.find('\r') == std::string::npos, f.filename().string() + " contains CR");
        std::string prev;
        for (const auto& l : testing::split_lines(bytes)) {
            ++lines;
            o.check(std::regex_match(l, line_re), "bad part line '" + l + "'");
            const auto key = l.substr(0, l.find('\t'));
            o.check(prev.empty() || prev < key, "keys not strictly ascending in " + f.filename().string());
            prev = key;
        }
    }

    // PigStorage store/load identity, byte-level and relation-level.
    const pig::Schema kv{{{"page", pig::ColumnType::Chararray}, {"hits", pig::ColumnType::Int}}};
    const auto rel = pig::load(tmp / "out", "\t", kv);
    const auto data = pig::store(rel, tmp / "stored", "\t", true);
    o.check(pig::load(tmp / "stored", "\t", kv) == rel, "store/load round trip changed the relation");
    std::string concatenated;
    for (const auto& f : part_files(tmp / "out")) concatenated += slurp(f);
    o.check(slurp(data) == concatenated, "stored bytes differ from the loaded part files");
    o.check(slurp(tmp / "stored/.schema") == "page:chararray\nhits:int\n", ".schema bytes for (page, hits)");

    const auto grouped = pig::group_by(filter_matches(rel, "page", "^HitsQuarter-.*"), "page", "X");
    const auto sums = pig::aggregate(grouped, {{pig::AggregateItem::Kind::Group, {}, {}},
                                               {pig::AggregateItem::Kind::Sum, "X", "hits"}});
    pig::store(sums, tmp / "q", "\t", true);
    o.check(slurp(tmp / "q/.schema") == "group:chararray\nsum:int\n", ".schema bytes for (group, sum)");

    // SVG documents.
    std::size_t docs = 0;
    auto check_svg = [&](const std::string& svg, const std::string& what) {
        std::string why, root;
        o.check(testing::is_well_formed_xml(svg, &why, &root) && root == "svg", what + ": " + why);
        ++docs;
    };
    const auto oracle = counting_oracle(text);
    for (const auto& tag : testing::oracle_tag_names()) {
        const auto series = chart::series_from_counts(tmp / "out", tag);
        for (auto kind : {chart::ChartKind::Bar, chart::ChartKind::Pie}) {
            chart::ChartSpec spec;
            spec.kind = kind;
            spec.series = {series};
            check_svg(chart::render(spec), tag + " " + std::string(chart::to_string(kind)));
        }
        double sum = 0.0;
        const auto wedges = chart::pie_layout(series);
        for (const auto& w : wedges) {
            sum += w.sweep_degrees;
            const double expected = static_cast<double>(oracle.at(tag + "-" + w.label)) / 100000.0;
            o.check(std::abs(w.sweep_degrees / 360.0 - expected) <= kFractionTolerance,
                    tag + " wedge " + w.label + " fraction");
        }
        o.check(std::abs(sum - 360.0) <= kWedgeSumTolerance, tag + " wedge sum " + std::to_string(sum));
    }
    bench::BenchResult fake;
    for (std::size_t n : {20000, 40000, 60000, 80000, 100000}) {
        for (std::size_t w : {1, 4}) fake.rows.push_back({n, w, 1e-5 * n / w, {}});
    }
    const auto line_svg = chart::render(bench::line_chart(fake));
    check_svg(line_svg, "line");
    o.check(testing::count_occurrences(line_svg, "<polyline") == 2, "line chart polyline count");

    o.detail = std::to_string(lines) + " part lines, PigStorage round trip, .schema bytes, " + std::to_string(docs) +
               " SVG documents, wedge sums within 1e-6";
    return o;
}

Outcome preprocessing_conservation() {
    Outcome o;
    std::mt19937_64 rng(8);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    const std::vector<std::string> words = {"pune", "nashik", "a-b", "x y", "INDIA", "mh", "q.html", "/p/i.php?id=3"};
    const std::vector<std::string> noise_ext = {".jpg", ".JPEG", ".png", ".gif", ".ico", ".Css", ".js", ".swf"};
    std::size_t total_lines = 0, total_kept = 0;

    for (std::size_t c = 0; c < kPreprocessCases; ++c) {
        std::string input;
        std::size_t want_kept = 0, want_noise = 0, want_malformed = 0;
        std::vector<std::string> want_canonical;
        for (std::size_t n = pick(40); n > 0; --n) {
            const int day = 1 + static_cast<int>(pick(28)), month = 1 + static_cast<int>(pick(12));
            const std::string url = words[pick(words.size())];
            const std::string hit = std::to_string(1 + pick(5)), age = std::to_string(1 + pick(120));
            const std::string tail = "#" + hit + "#" + age + "#" + words[pick(words.size())] + "#" +
                                     words[pick(words.size())] + "#" + words[pick(words.size())];
            char canon[16], loose[16];
            std::snprintf(canon, sizeof canon, "%02d/%02d/2012", day, month);
            std::snprintf(loose, sizeof loose, "%d/%d/2012", day, month);
            switch (pick(3)) {
                case 0: {
                    const bool zero_padded = pick(2);
                    input += url + "#" + (zero_padded ? canon : loose) + tail + "\n";
                    want_canonical.push_back(url + "#" + canon + tail);
                    ++want_kept;
                    break;
                }
                case 1:
                    input += "/static/f" + noise_ext[pick(noise_ext.size())] + "#" + canon + (pick(2) ? tail : "") + "\n";
                    ++want_noise;
                    break;
                default: {
                    static const std::vector<std::string> bad_dates = {"32/01/2012", "29/02/2011", "1-1-2012", ""};
                    switch (pick(5)) {
                        case 0: input += url + "#" + canon + "#1#2\n"; break;
                        case 1: input += url + "#" + bad_dates[pick(bad_dates.size())] + tail + "\n"; break;
                        case 2: input += url + "#" + canon + "#zero#2#a#b#c\n"; break;
                        case 3: input += url + "#" + canon + "#1#0#a#b#c\n"; break;
                        default: input += "\n"; break;
                    }
                    ++want_malformed;
                }
            }
        }
        std::istringstream in(input);
        std::ostringstream out;
        const auto res = logmodel::preprocess(in, logmodel::default_noise_suffixes(), &out);
        const auto& r = res.report;
        const auto tag = "case " + std::to_string(c);
        o.check(r.kept + r.noise + r.malformed == r.total, tag + ": categories do not sum to total");
        o.check(r.total == want_kept + want_noise + want_malformed, tag + ": total");
        o.check(r.kept == want_kept && r.noise == want_noise && r.malformed == want_malformed,
                tag + ": per-category counts");
        o.check(testing::split_lines(out.str()) == want_canonical, tag + ": canonical output");
        std::size_t ln = 0;
        for (const auto& rec : res.records) {
            const auto line = logmodel::format_record(rec);
            const auto reparsed = logmodel::parse_record({line, ++ln});
            o.check(reparsed == rec, tag + ": parse(format(r)) != r");
            o.check(logmodel::format_record(reparsed) == line, tag + ": format(parse(l)) != l");
        }
        total_lines += r.total;
        total_kept += r.kept;
    }
    o.detail = std::to_string(kPreprocessCases) + " cases, " + std::to_string(total_lines) + " lines, " +
               std::to_string(total_kept) + " kept records round-tripped";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "determinism under parallelism", determinism},
        {3, "distribution invariance", distribution_invariance},
        {4, "pig script fidelity", script_fidelity},
        {5, "sample log counts", sample_counts},
        {6, "scaling trend", scaling_trend},
        {7, "format golden tests", format_golden},
        {8, "preprocessing conservation", preprocessing_conservation},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && o.pass;
        char elapsed[32];
        std::snprintf(elapsed, sizeof elapsed, "%.1fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << elapsed << "): "
                  << o.detail << '\n';
        for (const auto& f : o.failures) std::cout << "       " << f << '\n';
        std::cout.flush();
    }
    return all ? 0 : 1;
}
