#pragma once

// The hit-count job: every valid log line emits one `<Tag>-<value>` pair per
// enabled field tag, carrying the record's hit count; reduce sums them.

#include "hitlog/logmodel.hpp"
#include "hitlog/mrengine.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hitlog::hitcount {

enum class FieldTag { Page, City, State, Country, Age, Quarter, Date };

using TagSet = std::set<FieldTag>;

std::string_view tag_name(FieldTag tag);
std::optional<FieldTag> parse_tag_name(std::string_view name);
const TagSet& all_tags();

/// Parses a comma-separated tag list ("HitsCity,HitsPage" or "all").
TagSet parse_tag_list(std::string_view list);

/// The field value a tag selects from a record, as it appears in the key.
std::string field_value(const logmodel::LogRecord& r, FieldTag tag);

struct TaggedKey {
    FieldTag tag;
    std::string value;

    friend bool operator==(const TaggedKey&, const TaggedKey&) = default;
};

std::string serialize(const TaggedKey& key);
/// Splits on the first '-'; nullopt when there is no '-' or the tag is unknown.
std::optional<TaggedKey> parse_tagged_key(std::string_view key);

/// "Q1".."Q4".
std::string quarter_of(const logmodel::Date& date);

inline constexpr std::string_view kValidCounter = "hitcount.valid";
inline constexpr std::string_view kSkippedCounter = "hitcount.skipped";

void hit_map(std::string_view line, mr::Collector& out, const TagSet& tags = all_tags());

class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& key, const std::string& detail)
        : std::runtime_error("NumericError for key '" + key + "': " + detail), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

void hit_reduce(const std::string& key, std::span<const std::string> values, mr::Collector& out);

struct EngineOptions {
    std::size_t num_workers = 1;
    std::size_t num_reduce_partitions = 1;
    std::uint64_t target_split_bytes = 0;
    mr::ProgressCallback on_progress;
};

mr::JobConfig make_job_config(const TagSet& tags, const EngineOptions& options, const mr::fs::path& output_dir);

mr::JobResult run_hitcount(std::span<const mr::fs::path> inputs, const TagSet& tags, const EngineOptions& options,
                           const mr::fs::path& output_dir);
mr::JobResult run_hitcount(const mr::fs::path& input, const TagSet& tags, const EngineOptions& options,
                           const mr::fs::path& output_dir);

}  // namespace hitlog::hitcount
