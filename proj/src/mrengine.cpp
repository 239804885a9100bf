#include "hitlog/mrengine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

namespace hitlog::mr {

namespace {

// Runs task(i) for i in [0, task_count) on up to `workers` threads. If tasks
// throw, the exception of the lowest failing index is rethrown so that error
// reporting does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t task_count, std::size_t workers, Task&& task) {
    if (task_count == 0) return;
    workers = std::max<std::size_t>(1, std::min(workers, task_count));
    std::vector<std::exception_ptr> errors(task_count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < task_count; i = next.fetch_add(1)) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Delivers progress in order; fraction_complete is computed under the lock.
class ProgressSink {
public:
    ProgressSink(const ProgressCallback& cb, Phase phase, std::size_t total)
        : cb_(cb), phase_(phase), total_(total) {}

    void task_done(std::int64_t records) {
        if (!cb_) return;
        std::lock_guard lock(mu_);
        ++done_;
        records_ += records;
        cb_(ProgressReport{phase_, total_ == 0 ? 1.0 : static_cast<double>(done_) / static_cast<double>(total_),
                           records_});
    }

private:
    const ProgressCallback& cb_;
    Phase phase_;
    std::size_t total_;
    std::mutex mu_;
    std::size_t done_ = 0;
    std::int64_t records_ = 0;
};

void merge_counters(std::map<std::string, std::int64_t, std::less<>>& into,
                    const std::map<std::string, std::int64_t, std::less<>>& from) {
    for (const auto& [name, value] : from) into[name] += value;
}

std::string read_range(const fs::path& path, std::uint64_t offset, std::uint64_t length) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string buf(length, '\0');
    in.seekg(static_cast<std::streamoff>(offset));
    in.read(buf.data(), static_cast<std::streamsize>(length));
    if (static_cast<std::uint64_t>(in.gcount()) != length) {
        throw std::runtime_error("short read from " + path.string());
    }
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

// Position of the first '\n' at or after `pos`, or `size` if none.
std::uint64_t find_newline(std::ifstream& in, std::uint64_t pos, std::uint64_t size) {
    char chunk[4096];
    in.clear();
    in.seekg(static_cast<std::streamoff>(pos));
    while (pos < size) {
        const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(sizeof chunk, size - pos));
        in.read(chunk, want);
        const auto got = in.gcount();
        if (got <= 0) throw std::runtime_error("read failure while computing splits");
        if (const void* hit = std::memchr(chunk, '\n', static_cast<std::size_t>(got))) {
            return pos + static_cast<std::uint64_t>(static_cast<const char*>(hit) - chunk);
        }
        pos += static_cast<std::uint64_t>(got);
    }
    return size;
}

bool is_part_file_name(const std::string& name) {
    static const std::regex kPart("part-[0-9]{5}");
    return std::regex_match(name, kPart);
}

}  // namespace

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Map: return "map";
        case Phase::Shuffle: return "shuffle";
        case Phase::Reduce: return "reduce";
    }
    return "?";
}

void validate_pair(const KeyValuePair& kv) {
    if (kv.key.empty()) throw InvalidPair("empty key");
    if (kv.key.find_first_of("\t\n") != std::string::npos) throw InvalidPair("tab or newline in key '" + kv.key + "'");
    if (kv.value.find_first_of("\t\n") != std::string::npos) {
        throw InvalidPair("tab or newline in value for key '" + kv.key + "'");
    }
}

void Collector::emit(std::string key, std::string value) {
    KeyValuePair kv{std::move(key), std::move(value)};
    validate_pair(kv);
    pairs_.push_back(std::move(kv));
}

void Collector::increment(std::string_view counter, std::int64_t delta) {
    auto it = counters_.find(counter);
    if (it == counters_.end()) it = counters_.emplace(std::string(counter), 0).first;
    it->second += delta;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::size_t partition(std::string_view key, std::size_t num_partitions) {
    if (num_partitions == 0) throw std::invalid_argument("partition: num_partitions must be >= 1");
    return static_cast<std::size_t>(fnv1a64(key) % num_partitions);
}

std::vector<InputSplit> compute_splits(const fs::path& file_path, std::uint64_t target_split_bytes) {
    if (target_split_bytes == 0) throw std::invalid_argument("compute_splits: target_split_bytes must be >= 1");
    std::error_code ec;
    const auto size = fs::file_size(file_path, ec);
    if (ec) throw std::runtime_error("cannot stat " + file_path.string() + ": " + ec.message());
    if (size == 0) throw EmptyFile(file_path);

    std::ifstream in(file_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file_path.string());

    std::vector<InputSplit> splits;
    std::uint64_t start = 0;
    while (start < size) {
        std::uint64_t end = std::min<std::uint64_t>(start + target_split_bytes, size);
        if (end < size) {
            const auto nl = find_newline(in, end - 1, size);
            end = nl == size ? size : nl + 1;
        }
        splits.push_back(InputSplit{file_path, start, end - start, splits.size()});
        start = end;
    }
    return splits;
}

std::vector<fs::path> distribute(const fs::path& file_path, std::size_t node_count, const fs::path& out_root) {
    if (node_count == 0) throw std::invalid_argument("distribute: node_count must be >= 1");
    const std::string data = read_file(file_path);
    if (data.empty()) throw EmptyFile(file_path);

    std::vector<std::size_t> line_starts;
    for (std::size_t pos = 0; pos < data.size();) {
        line_starts.push_back(pos);
        const auto nl = data.find('\n', pos);
        pos = nl == std::string::npos ? data.size() : nl + 1;
    }
    line_starts.push_back(data.size());
    const std::size_t lines = line_starts.size() - 1;

    std::vector<fs::path> out;
    std::size_t line = 0;
    for (std::size_t node = 0; node < node_count; ++node) {
        const std::size_t count = lines / node_count + (node < lines % node_count ? 1 : 0);
        const auto dir = out_root / ("node-" + std::to_string(node + 1));
        fs::create_directories(dir);
        const auto target = dir / file_path.filename();
        std::ofstream os(target, std::ios::binary | std::ios::trunc);
        const auto begin = line_starts[line];
        const auto end = line_starts[line + count];
        os.write(data.data() + begin, static_cast<std::streamsize>(end - begin));
        if (!os) throw std::runtime_error("write failure: " + target.string());
        out.push_back(target);
        line += count;
    }
    return out;
}

std::size_t IntermediateStore::pair_count() const {
    std::size_t n = 0;
    for (const auto& p : partitions) n += p.size();
    return n;
}

IntermediateStore run_map_phase(std::span<const InputSplit> splits, const MapFn& map_fn, std::size_t num_workers,
                                std::size_t num_partitions, const ProgressCallback& on_progress) {
    if (num_workers == 0) throw std::invalid_argument("num_workers must be >= 1");
    if (num_partitions == 0) throw std::invalid_argument("num_reduce_partitions must be >= 1");

    struct TaskOutput {
        std::vector<std::vector<KeyValuePair>> partitions;
        std::map<std::string, std::int64_t, std::less<>> counters;
        std::int64_t records = 0;
    };
    std::vector<TaskOutput> outputs(splits.size());
    ProgressSink progress(on_progress, Phase::Map, splits.size());

    parallel_for(splits.size(), num_workers, [&](std::size_t i) {
        const auto& split = splits[i];
        std::string data;
        try {
            data = read_range(split.file_path, split.byte_offset, split.byte_length);
        } catch (const std::exception& e) {
            throw JobError(Phase::Map, "split " + std::to_string(split.split_index) + ": " + e.what());
        }
        TaskOutput& out = outputs[i];
        out.partitions.resize(num_partitions);
        Collector collector;
        std::size_t line_number = 0;
        std::size_t pos = 0;
        while (pos < data.size()) {
            const auto nl = data.find('\n', pos);
            const auto end = nl == std::string::npos ? data.size() : nl;
            ++line_number;
            try {
                map_fn(std::string_view(data).substr(pos, end - pos), collector);
            } catch (const std::exception& e) {
                throw JobError(Phase::Map, "split " + std::to_string(split.split_index) + " (" +
                                               split.file_path.string() + ") line " + std::to_string(line_number) +
                                               ": " + e.what());
            }
            for (auto& kv : collector.take_pairs()) {
                auto& bucket = out.partitions[partition(kv.key, num_partitions)];
                bucket.push_back(std::move(kv));
            }
            collector.clear_pairs();
            pos = end + 1;
        }
        out.counters = collector.counters();
        out.records = static_cast<std::int64_t>(line_number);
        progress.task_done(out.records);
    });

    IntermediateStore store;
    store.partitions.resize(num_partitions);
    for (std::size_t p = 0; p < num_partitions; ++p) {
        std::size_t n = 0;
        for (const auto& o : outputs) n += o.partitions[p].size();
        store.partitions[p].reserve(n);
    }
    for (auto& o : outputs) {
        for (std::size_t p = 0; p < num_partitions; ++p) {
            auto& src = o.partitions[p];
            std::move(src.begin(), src.end(), std::back_inserter(store.partitions[p]));
        }
        merge_counters(store.counters, o.counters);
        store.records_processed += o.records;
    }
    if (on_progress) on_progress(ProgressReport{Phase::Shuffle, 1.0, store.records_processed});
    return store;
}

fs::path part_file_name(std::size_t partition_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "part-%05zu", partition_index);
    return buf;
}

ReduceOutput run_reduce_phase(IntermediateStore store, const ReduceFn& reduce_fn, std::size_t num_workers,
                              const fs::path& output_dir, const ProgressCallback& on_progress) {
    if (num_workers == 0) throw std::invalid_argument("num_workers must be >= 1");
    const std::size_t num_partitions = store.partitions.size();

    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw JobError(Phase::Reduce, "cannot create " + output_dir.string() + ": " + ec.message());
    for (const auto& entry : fs::directory_iterator(output_dir)) {
        if (entry.is_regular_file() && is_part_file_name(entry.path().filename().string())) {
            fs::remove(entry.path());
        }
    }

    ReduceOutput result;
    result.files.resize(num_partitions);
    std::vector<std::map<std::string, std::int64_t, std::less<>>> counters(num_partitions);
    ProgressSink progress(on_progress, Phase::Reduce, num_partitions);

    parallel_for(num_partitions, num_workers, [&](std::size_t p) {
        auto& pairs = store.partitions[p];
        std::sort(pairs.begin(), pairs.end());

        const auto path = output_dir / part_file_name(p);
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw JobError(Phase::Reduce, "cannot open " + path.string());

        Collector collector;
        std::vector<std::string> values;
        std::int64_t groups = 0;
        for (std::size_t i = 0; i < pairs.size();) {
            std::size_t j = i;
            values.clear();
            while (j < pairs.size() && pairs[j].key == pairs[i].key) {
                values.push_back(std::move(pairs[j].value));
                ++j;
            }
            const std::string& key = pairs[i].key;
            try {
                reduce_fn(key, values, collector);
            } catch (const std::exception& e) {
                throw JobError(Phase::Reduce, "key '" + key + "': " + e.what());
            }
            for (const auto& kv : collector.pairs()) os << kv.key << '\t' << kv.value << '\n';
            collector.clear_pairs();
            ++groups;
            i = j;
        }
        pairs.clear();
        pairs.shrink_to_fit();
        os.flush();
        if (!os) throw JobError(Phase::Reduce, "write failure: " + path.string());
        result.files[p] = path;
        counters[p] = collector.counters();
        progress.task_done(groups);
    });

    for (const auto& c : counters) merge_counters(result.counters, c);
    return result;
}

JobResult run_job(std::span<const fs::path> inputs, const JobConfig& config) {
    if (!config.map_fn || !config.reduce_fn) throw std::invalid_argument("run_job: map_fn and reduce_fn required");
    if (config.num_workers == 0 || config.num_reduce_partitions == 0) {
        throw std::invalid_argument("run_job: num_workers and num_reduce_partitions must be >= 1");
    }
    const auto t0 = std::chrono::steady_clock::now();

    JobResult result;
    std::mutex log_mu;
    ProgressCallback record = [&](const ProgressReport& r) {
        {
            std::lock_guard lock(log_mu);
            result.progress.push_back(r);
        }
        if (config.on_progress) config.on_progress(r);
    };

    std::vector<InputSplit> splits;
    try {
        std::uint64_t total = 0;
        for (const auto& in : inputs) {
            if (!fs::exists(in)) throw std::runtime_error("no such input: " + in.string());
            total += fs::file_size(in);
        }
        std::uint64_t target = config.target_split_bytes;
        if (target == 0) target = std::max<std::uint64_t>(4096, total / (config.num_workers * 4) + 1);
        for (const auto& in : inputs) {
            if (fs::file_size(in) == 0) continue;
            for (auto& s : compute_splits(in, target)) {
                s.split_index = splits.size();
                splits.push_back(std::move(s));
            }
        }
    } catch (const JobError&) {
        throw;
    } catch (const std::exception& e) {
        throw JobError(Phase::Map, e.what());
    }

    auto store = run_map_phase(splits, config.map_fn, config.num_workers, config.num_reduce_partitions, record);
    result.records_processed = store.records_processed;
    result.counters = store.counters;
    auto reduced = run_reduce_phase(std::move(store), config.reduce_fn, config.num_workers, config.output_dir, record);
    merge_counters(result.counters, reduced.counters);
    result.output_files = std::move(reduced.files);
    result.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

JobResult run_job(const fs::path& input, const JobConfig& config) {
    return run_job(std::span<const fs::path>(&input, 1), config);
}

std::vector<KeyValuePair> read_part_files(std::span<const fs::path> paths) {
    std::vector<KeyValuePair> out;
    auto read_one = [&](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + p.string());
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw std::runtime_error(p.string() + ":" + std::to_string(n) + ": missing tab");
            }
            out.push_back(KeyValuePair{line.substr(0, tab), line.substr(tab + 1)});
        }
    };
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> parts;
            for (const auto& e : fs::directory_iterator(p)) {
                if (e.is_regular_file() && e.path().filename().string().rfind("part-", 0) == 0) {
                    parts.push_back(e.path());
                }
            }
            std::sort(parts.begin(), parts.end());
            for (const auto& part : parts) read_one(part);
        } else {
            read_one(p);
        }
    }
    return out;
}

std::vector<KeyValuePair> read_part_files(const fs::path& path) {
    return read_part_files(std::span<const fs::path>(&path, 1));
}

}  // namespace hitlog::mr
