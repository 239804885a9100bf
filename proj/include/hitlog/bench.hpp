#pragma once

// Scaling benchmark: hit-count wall time over a grid of record counts and
// worker counts, reported as CSV and as a line chart (one series per worker
// count).

#include "hitlog/charting.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace hitlog::bench {

struct BenchPlan {
    std::vector<std::size_t> record_counts = {20000, 40000, 60000, 80000, 100000};
    std::vector<std::size_t> worker_counts = {1, 4};
    std::size_t repetitions = 3;
    std::uint64_t seed = 42;
};

void validate(const BenchPlan& plan);

struct BenchRow {
    std::size_t record_count = 0;
    std::size_t worker_count = 0;
    double median_seconds = 0.0;
    std::vector<double> times;
};

struct BenchResult {
    std::vector<BenchRow> rows;  // record_counts major, worker_counts minor
};

double median(std::vector<double> values);

/// Generates each record count once under `work_dir`, then times the
/// hit-count job for every worker count. `log` (optional) gets one line per cell.
BenchResult run_bench(const BenchPlan& plan, const std::filesystem::path& work_dir, std::ostream* log = nullptr);

/// Header `records,workers,seconds`, seconds with 3 fractional digits.
void write_csv(std::ostream& os, const BenchResult& result);
BenchResult read_csv(std::istream& is);

chart::ChartSpec line_chart(const BenchResult& result);

}  // namespace hitlog::bench
