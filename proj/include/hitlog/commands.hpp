#pragma once

// Subcommand implementations behind the `hitlog` CLI. Each returns the
// process exit status and writes diagnostics to `err`; machine-readable
// results only go to files. A failing command removes any output file or
// directory it created.

#include "hitlog/bench.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hitlog::cli {

namespace fs = std::filesystem;

struct PreprocessOptions {
    fs::path input;
    fs::path output;
    std::vector<std::string> noise_suffixes;  // empty: defaults
};

struct GenerateOptions {
    std::size_t records = 100000;
    std::uint64_t seed = 42;
    fs::path output;
};

struct SplitOptions {
    fs::path input;
    std::size_t nodes = 2;
    fs::path output_root;
};

struct RunOptions {
    std::vector<fs::path> inputs;
    std::string tags = "all";
    std::size_t workers = 1;
    std::size_t partitions = 1;
    fs::path output_dir;
};

struct PigOptions {
    fs::path script;
    fs::path working_dir;  // empty: current directory
};

struct ChartOptions {
    fs::path input;  // part file(s) directory, a part file, or a bench CSV for kind=line
    std::string tag;
    std::string kind = "bar";
    fs::path output;
    int width = 640;
    int height = 400;
};

struct BenchOptions {
    bench::BenchPlan plan;
    fs::path csv;
    fs::path svg;
    fs::path work_dir;  // empty: a temporary directory
};

int cmd_preprocess(const PreprocessOptions& o, std::ostream& err);
int cmd_generate(const GenerateOptions& o, std::ostream& err);
int cmd_split(const SplitOptions& o, std::ostream& err);
int cmd_run(const RunOptions& o, std::ostream& err);
int cmd_pig(const PigOptions& o, std::ostream& err);
int cmd_chart(const ChartOptions& o, std::ostream& err);
int cmd_bench(const BenchOptions& o, std::ostream& err);

}  // namespace hitlog::cli
