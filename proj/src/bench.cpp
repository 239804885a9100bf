#include "hitlog/bench.hpp"

#include "hitlog/hitcount.hpp"
#include "hitlog/logmodel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hitlog::bench {

void validate(const BenchPlan& plan) {
    if (plan.record_counts.empty() || plan.worker_counts.empty()) {
        throw std::invalid_argument("bench plan needs record and worker counts");
    }
    if (plan.repetitions == 0) throw std::invalid_argument("bench repetitions must be >= 1");
    for (auto n : plan.record_counts) {
        if (n == 0) throw std::invalid_argument("record counts must be >= 1");
    }
    for (auto w : plan.worker_counts) {
        if (w == 0) throw std::invalid_argument("worker counts must be >= 1");
    }
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of nothing");
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

BenchResult run_bench(const BenchPlan& plan, const std::filesystem::path& work_dir, std::ostream* log) {
    validate(plan);
    std::filesystem::create_directories(work_dir);
    BenchResult result;
    for (auto n : plan.record_counts) {
        logmodel::GeneratorConfig gen;
        gen.record_count = n;
        gen.seed = plan.seed;
        const auto input = work_dir / ("bench-" + std::to_string(n) + ".log");
        {
            std::ofstream os(input, std::ios::binary | std::ios::trunc);
            logmodel::write_records(os, logmodel::generate(gen));
            if (!os) throw std::runtime_error("bench: cannot write " + input.string());
        }
        for (auto w : plan.worker_counts) {
            BenchRow row{n, w, 0.0, {}};
            hitcount::EngineOptions options;
            options.num_workers = w;
            options.num_reduce_partitions = w;
            const auto out_dir = work_dir / ("out-" + std::to_string(n) + "-" + std::to_string(w));
            for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
                try {
                    const auto job = hitcount::run_hitcount(input, hitcount::all_tags(), options, out_dir);
                    row.times.push_back(job.wall_time_seconds);
                } catch (const std::exception& e) {
                    throw std::runtime_error("bench n=" + std::to_string(n) + " workers=" + std::to_string(w) +
                                             ": " + e.what());
                }
            }
            row.median_seconds = median(row.times);
            if (log) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "bench: records=%zu workers=%zu median=%.3fs", n, w,
                              row.median_seconds);
                *log << buf << '\n';
            }
            std::filesystem::remove_all(out_dir);
            result.rows.push_back(std::move(row));
        }
        std::filesystem::remove(input);
    }
    return result;
}

void write_csv(std::ostream& os, const BenchResult& result) {
    os << "records,workers,seconds\n";
    for (const auto& row : result.rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", row.median_seconds);
        os << row.record_count << ',' << row.worker_count << ',' << buf << '\n';
    }
}

BenchResult read_csv(std::istream& is) {
    BenchResult result;
    std::string line;
    if (!std::getline(is, line) || line != "records,workers,seconds") {
        throw std::runtime_error("bench CSV: missing 'records,workers,seconds' header");
    }
    std::size_t n = 1;
    while (std::getline(is, line)) {
        ++n;
        if (line.empty()) continue;
        std::istringstream ss(line);
        BenchRow row;
        char c1 = 0, c2 = 0;
        if (!(ss >> row.record_count >> c1 >> row.worker_count >> c2 >> row.median_seconds) || c1 != ',' ||
            c2 != ',') {
            throw std::runtime_error("bench CSV line " + std::to_string(n) + ": malformed");
        }
        row.times = {row.median_seconds};
        result.rows.push_back(std::move(row));
    }
    return result;
}

chart::ChartSpec line_chart(const BenchResult& result) {
    std::map<std::size_t, chart::Series> by_workers;
    for (const auto& row : result.rows) {
        auto& s = by_workers[row.worker_count];
        if (s.title.empty()) s.title = std::to_string(row.worker_count) + (row.worker_count == 1 ? " worker" : " workers");
        s.points.push_back(chart::Point{std::to_string(row.record_count), row.median_seconds});
    }
    chart::ChartSpec spec;
    spec.kind = chart::ChartKind::Line;
    spec.title = "Hit-count wall time (s) vs records";
    for (auto& [w, s] : by_workers) spec.series.push_back(std::move(s));
    return spec;
}

}  // namespace hitlog::bench
