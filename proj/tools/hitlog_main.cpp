// hitlog: preprocess, generate, split, run, pig, chart and bench subcommands.

#include "hitlog/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace hitlog::cli;

    CLI::App app{"Web log hit-count analytics on an in-process MapReduce runtime"};
    app.require_subcommand(1);

    PreprocessOptions pre;
    auto* c_pre = app.add_subcommand("preprocess", "Drop noise and malformed lines, write canonical '#' records");
    c_pre->add_option("--input", pre.input, "Raw log file")->required();
    c_pre->add_option("--output", pre.output, "Preprocessed log file")->required();
    c_pre->add_option("--noise-suffix", pre.noise_suffixes, "Replace the default noise suffixes (repeatable)")
        ->delimiter(',');

    GenerateOptions gen;
    auto* c_gen = app.add_subcommand("generate", "Write a seeded synthetic log");
    c_gen->add_option("--records", gen.records, "Record count")->check(CLI::PositiveNumber);
    c_gen->add_option("--seed", gen.seed, "RNG seed");
    c_gen->add_option("--output", gen.output, "Output log file")->required();

    SplitOptions split;
    auto* c_split = app.add_subcommand("split", "Distribute a log over node directories");
    c_split->add_option("--input", split.input, "Log file")->required();
    c_split->add_option("--nodes", split.nodes, "Node count")->check(CLI::PositiveNumber);
    c_split->add_option("--output", split.output_root, "Root directory for node-<i>/")->required();

    RunOptions run;
    auto* c_run = app.add_subcommand("run", "Run the hit-count MapReduce job");
    c_run->add_option("--input", run.inputs, "Input log file(s)")->required()->delimiter(',');
    c_run->add_option("--tags", run.tags, "Comma-separated tags (HitsPage,HitsCity,...) or 'all'");
    c_run->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);
    c_run->add_option("--partitions", run.partitions, "Reduce partitions")->check(CLI::PositiveNumber);
    c_run->add_option("--output", run.output_dir, "Output directory for part files")->required();

    PigOptions pig;
    auto* c_pig = app.add_subcommand("pig", "Execute a Pig Latin script");
    c_pig->add_option("--input", pig.script, "Script file")->required();
    c_pig->add_option("--workdir", pig.working_dir, "Directory relative paths resolve against");

    ChartOptions chart;
    auto* c_chart = app.add_subcommand("chart", "Render counts (bar, pie) or a bench CSV (line) as SVG");
    c_chart->add_option("--input", chart.input, "Part file, directory of part files, or bench CSV")->required();
    c_chart->add_option("--tags,--tag", chart.tag, "Tag to chart, e.g. HitsCity");
    c_chart->add_option("--kind", chart.kind, "bar, pie or line")->check(CLI::IsMember({"bar", "pie", "line"}));
    c_chart->add_option("--output", chart.output, "SVG file")->required();
    c_chart->add_option("--width", chart.width, "Pixels");
    c_chart->add_option("--height", chart.height, "Pixels");

    BenchOptions bench;
    auto* c_bench = app.add_subcommand("bench", "Time the job over record and worker counts");
    c_bench->add_option("--records", bench.plan.record_counts, "Record counts")->delimiter(',');
    c_bench->add_option("--workers", bench.plan.worker_counts, "Worker counts")->delimiter(',');
    c_bench->add_option("--reps", bench.plan.repetitions, "Repetitions per cell")->check(CLI::PositiveNumber);
    c_bench->add_option("--seed", bench.plan.seed, "RNG seed");
    c_bench->add_option("--output", bench.csv, "CSV file")->required();
    c_bench->add_option("--svg", bench.svg, "Line chart SVG file");
    c_bench->add_option("--workdir", bench.work_dir, "Scratch directory");

    CLI11_PARSE(app, argc, argv);

    if (*c_pre) return cmd_preprocess(pre, std::cerr);
    if (*c_gen) return cmd_generate(gen, std::cerr);
    if (*c_split) return cmd_split(split, std::cerr);
    if (*c_run) return cmd_run(run, std::cerr);
    if (*c_pig) return cmd_pig(pig, std::cerr);
    if (*c_chart) return cmd_chart(chart, std::cerr);
    if (*c_bench) return cmd_bench(bench, std::cerr);
    return 1;
}
