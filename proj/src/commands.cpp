#include "hitlog/commands.hpp"

#include "hitlog/charting.hpp"
#include "hitlog/hitcount.hpp"
#include "hitlog/logmodel.hpp"
#include "hitlog/mrengine.hpp"
#include "hitlog/piglite.hpp"

#include <unistd.h>

#include <cstdio>
#include <memory>
#include <optional>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hitlog::cli {

namespace {

// Removes an output path on scope exit unless commit() was called, but only
// if the path did not exist beforehand.
class OutputGuard {
public:
    explicit OutputGuard(fs::path path) : path_(std::move(path)), existed_(fs::exists(path_)) {}
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    ~OutputGuard() {
        if (!committed_ && !existed_ && !path_.empty()) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
    }
    void commit() { committed_ = true; }

private:
    fs::path path_;
    bool existed_;
    bool committed_ = false;
};

template <typename Body>
int guarded(std::ostream& err, std::string_view command, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "hitlog " << command << ": " << e.what() << '\n';
        return 1;
    }
}

void require_input(const fs::path& p) {
    if (p.empty()) throw std::invalid_argument("missing --input");
    if (!fs::exists(p)) throw std::runtime_error("input not found: " + p.string());
}

void require_output(const fs::path& p) {
    if (p.empty()) throw std::invalid_argument("missing --output");
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

}  // namespace

int cmd_preprocess(const PreprocessOptions& o, std::ostream& err) {
    return guarded(err, "preprocess", [&] {
        require_input(o.input);
        require_output(o.output);
        std::ifstream in(o.input, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + o.input.string());
        ensure_parent(o.output);
        OutputGuard guard(o.output);
        std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create " + o.output.string());
        const auto& suffixes = o.noise_suffixes.empty() ? logmodel::default_noise_suffixes() : o.noise_suffixes;
        const auto report = logmodel::preprocess_to(in, out, suffixes);
        out.close();
        if (!out) throw std::runtime_error("write failure: " + o.output.string());
        guard.commit();
        err << report << '\n';
        return 0;
    });
}

int cmd_generate(const GenerateOptions& o, std::ostream& err) {
    return guarded(err, "generate", [&] {
        require_output(o.output);
        logmodel::GeneratorConfig config;
        config.record_count = o.records;
        config.seed = o.seed;
        const auto records = logmodel::generate(config);
        ensure_parent(o.output);
        OutputGuard guard(o.output);
        std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
        logmodel::write_records(out, records);
        out.close();
        if (!out) throw std::runtime_error("write failure: " + o.output.string());
        guard.commit();
        err << "generate: wrote " << records.size() << " records to " << o.output.string() << '\n';
        return 0;
    });
}

int cmd_split(const SplitOptions& o, std::ostream& err) {
    return guarded(err, "split", [&] {
        require_input(o.input);
        require_output(o.output_root);
        OutputGuard guard(o.output_root);
        const auto files = mr::distribute(o.input, o.nodes, o.output_root);
        guard.commit();
        for (const auto& f : files) err << "split: " << f.string() << '\n';
        return 0;
    });
}

int cmd_run(const RunOptions& o, std::ostream& err) {
    return guarded(err, "run", [&] {
        if (o.inputs.empty()) throw std::invalid_argument("missing --input");
        for (const auto& in : o.inputs) require_input(in);
        require_output(o.output_dir);
        const auto tags = hitcount::parse_tag_list(o.tags);
        hitcount::EngineOptions options;
        options.num_workers = o.workers;
        options.num_reduce_partitions = o.partitions;
        OutputGuard guard(o.output_dir);
        const auto result = hitcount::run_hitcount(o.inputs, tags, options, o.output_dir);
        guard.commit();
        auto counter = [&](std::string_view name) {
            const auto it = result.counters.find(name);
            return it == result.counters.end() ? std::int64_t{0} : it->second;
        };
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", result.wall_time_seconds);
        err << "run: records processed=" << counter(hitcount::kValidCounter)
            << " skipped=" << counter(hitcount::kSkippedCounter) << " part files=" << result.output_files.size()
            << " wall time=" << buf << "s\n";
        return 0;
    });
}

int cmd_pig(const PigOptions& o, std::ostream& err) {
    return guarded(err, "pig", [&] {
        require_input(o.script);
        std::ifstream in(o.script, std::ios::binary);
        std::ostringstream source;
        source << in.rdbuf();
        const auto script = pig::parse(source.str());
        const auto dir = o.working_dir.empty() ? fs::current_path() : o.working_dir;
        std::vector<std::unique_ptr<OutputGuard>> guards;
        for (const auto& st : script.statements) {
            if (const auto* s = std::get_if<pig::StoreStmt>(&st.op)) {
                const fs::path p(s->path);
                guards.push_back(std::make_unique<OutputGuard>(p.is_absolute() ? p : dir / p));
            }
        }
        const auto result = pig::execute(script, dir);
        for (auto& g : guards) g->commit();
        for (const auto& p : result.stored) err << "pig: stored " << p.string() << '\n';
        return 0;
    });
}

int cmd_chart(const ChartOptions& o, std::ostream& err) {
    return guarded(err, "chart", [&] {
        require_input(o.input);
        require_output(o.output);
        chart::ChartSpec spec;
        spec.kind = chart::parse_chart_kind(o.kind);
        spec.width = o.width;
        spec.height = o.height;
        if (spec.kind == chart::ChartKind::Line) {
            std::ifstream in(o.input, std::ios::binary);
            spec = bench::line_chart(bench::read_csv(in));
            spec.width = o.width;
            spec.height = o.height;
        } else {
            if (o.tag.empty()) throw std::invalid_argument("missing --tag");
            auto series = chart::series_from_counts(o.input, o.tag);
            spec.title = o.tag + " (" + std::string(chart::to_string(spec.kind)) + ")";
            spec.series.push_back(std::move(series));
        }
        const auto svg = chart::render(spec);
        OutputGuard guard(o.output);
        chart::write_svg(svg, o.output);
        guard.commit();
        err << "chart: wrote " << o.output.string() << '\n';
        return 0;
    });
}

int cmd_bench(const BenchOptions& o, std::ostream& err) {
    return guarded(err, "bench", [&] {
        require_output(o.csv);
        bench::validate(o.plan);
        const bool temp_dir = o.work_dir.empty();
        const auto work = temp_dir ? fs::temp_directory_path() / ("hitlog-bench-" + std::to_string(::getpid()))
                                   : o.work_dir;
        OutputGuard csv_guard(o.csv);
        std::optional<OutputGuard> svg_guard;
        if (!o.svg.empty()) svg_guard.emplace(o.svg);

        bench::BenchResult result;
        try {
            result = bench::run_bench(o.plan, work, &err);
        } catch (...) {
            if (temp_dir) fs::remove_all(work);
            throw;
        }
        if (temp_dir) fs::remove_all(work);

        ensure_parent(o.csv);
        {
            std::ofstream out(o.csv, std::ios::binary | std::ios::trunc);
            bench::write_csv(out, result);
            if (!out) throw std::runtime_error("write failure: " + o.csv.string());
        }
        if (!o.svg.empty()) chart::write_svg(chart::render(bench::line_chart(result)), o.svg);
        csv_guard.commit();
        if (svg_guard) svg_guard->commit();
        return 0;
    });
}

}  // namespace hitlog::cli
