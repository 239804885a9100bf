#pragma once

// In-process MapReduce runtime.
//
// A job reads one or more text files, cuts them into record-aligned splits,
// runs the map function over every line on a pool of worker threads, routes
// each emitted pair to a reduce partition by FNV-1a hash of the key, and
// finally sorts every partition by (key, value) and reduces it into
// <output_dir>/part-NNNNN. Output bytes do not depend on the worker count
// or on how the scheduler interleaves tasks.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hitlog::mr {

namespace fs = std::filesystem;

struct InputSplit {
    fs::path file_path;
    std::uint64_t byte_offset = 0;
    std::uint64_t byte_length = 0;
    std::size_t split_index = 0;

    friend bool operator==(const InputSplit&, const InputSplit&) = default;
};

struct KeyValuePair {
    std::string key;
    std::string value;

    friend auto operator<=>(const KeyValuePair&, const KeyValuePair&) = default;
};

/// Thrown when a pair violates the key/value invariants (empty key, tab or
/// newline in key or value).
class InvalidPair : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyFile : public std::runtime_error {
public:
    explicit EmptyFile(const fs::path& p) : std::runtime_error("empty input file: " + p.string()) {}
};

/// Append-only sink for emitted pairs plus named counters.
/// One collector serves one task invocation; it is not shared across threads.
class Collector {
public:
    void emit(std::string key, std::string value);
    void increment(std::string_view counter, std::int64_t delta = 1);

    const std::vector<KeyValuePair>& pairs() const { return pairs_; }
    std::vector<KeyValuePair> take_pairs() { return std::move(pairs_); }
    const std::map<std::string, std::int64_t, std::less<>>& counters() const { return counters_; }
    void clear_pairs() { pairs_.clear(); }

private:
    std::vector<KeyValuePair> pairs_;
    std::map<std::string, std::int64_t, std::less<>> counters_;
};

void validate_pair(const KeyValuePair& kv);

using MapFn = std::function<void(std::string_view line, Collector& out)>;
using ReduceFn = std::function<void(const std::string& key, std::span<const std::string> values, Collector& out)>;

enum class Phase { Map, Shuffle, Reduce };
const char* to_string(Phase phase);

struct ProgressReport {
    Phase phase = Phase::Map;
    double fraction_complete = 0.0;
    std::int64_t records_processed = 0;
};

/// May be invoked from worker threads; the engine serializes calls so that
/// fraction_complete is non-decreasing within each phase.
using ProgressCallback = std::function<void(const ProgressReport&)>;

struct JobConfig {
    MapFn map_fn;
    ReduceFn reduce_fn;
    std::size_t num_workers = 1;
    std::size_t num_reduce_partitions = 1;
    fs::path output_dir;
    /// 0 picks a size giving about four splits per worker.
    std::uint64_t target_split_bytes = 0;
    ProgressCallback on_progress;
};

class JobError : public std::runtime_error {
public:
    JobError(Phase phase, const std::string& message)
        : std::runtime_error(std::string(to_string(phase)) + " phase: " + message), phase_(phase) {}
    Phase phase() const { return phase_; }

private:
    Phase phase_;
};

/// Stable FNV-1a (64-bit) over the key bytes.
std::uint64_t fnv1a64(std::string_view bytes);
std::size_t partition(std::string_view key, std::size_t num_partitions);

std::vector<InputSplit> compute_splits(const fs::path& file_path, std::uint64_t target_split_bytes);

/// Copies `file_path` into out_root/node-<i>/<basename> for i = 1..node_count,
/// giving each node a contiguous run of whole lines whose counts differ by at
/// most one. Returns the node files in order.
std::vector<fs::path> distribute(const fs::path& file_path, std::size_t node_count, const fs::path& out_root);

/// Per-partition pairs in deterministic order (split order, then emission order).
struct IntermediateStore {
    std::vector<std::vector<KeyValuePair>> partitions;
    std::map<std::string, std::int64_t, std::less<>> counters;
    std::int64_t records_processed = 0;

    std::size_t pair_count() const;
};

IntermediateStore run_map_phase(std::span<const InputSplit> splits, const MapFn& map_fn, std::size_t num_workers,
                                std::size_t num_partitions, const ProgressCallback& on_progress = {});

struct ReduceOutput {
    std::vector<fs::path> files;
    std::map<std::string, std::int64_t, std::less<>> counters;
};

ReduceOutput run_reduce_phase(IntermediateStore store, const ReduceFn& reduce_fn, std::size_t num_workers,
                              const fs::path& output_dir, const ProgressCallback& on_progress = {});

fs::path part_file_name(std::size_t partition_index);

struct JobResult {
    std::vector<fs::path> output_files;
    double wall_time_seconds = 0.0;
    std::vector<ProgressReport> progress;
    std::map<std::string, std::int64_t, std::less<>> counters;
    std::int64_t records_processed = 0;
};

JobResult run_job(std::span<const fs::path> inputs, const JobConfig& config);
JobResult run_job(const fs::path& input, const JobConfig& config);

/// Reads `key<TAB>value` lines from part files (a directory means all of its
/// part-* files in name order).
std::vector<KeyValuePair> read_part_files(std::span<const fs::path> paths);
std::vector<KeyValuePair> read_part_files(const fs::path& path);

}  // namespace hitlog::mr
