#include "hitlog/hitcount.hpp"

#include <array>
#include <charconv>
#include <limits>
#include <utility>

namespace hitlog::hitcount {

namespace {

constexpr std::array<std::pair<FieldTag, std::string_view>, 7> kTagNames = {{
    {FieldTag::Page, "HitsPage"},
    {FieldTag::City, "HitsCity"},
    {FieldTag::State, "HitsState"},
    {FieldTag::Country, "HitsCountry"},
    {FieldTag::Age, "HitsAge"},
    {FieldTag::Quarter, "HitsQuarter"},
    {FieldTag::Date, "HitsDate"},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view tag_name(FieldTag tag) {
    for (const auto& [t, name] : kTagNames) {
        if (t == tag) return name;
    }
    return "?";
}

std::optional<FieldTag> parse_tag_name(std::string_view name) {
    for (const auto& [t, n] : kTagNames) {
        if (n == name) return t;
    }
    return std::nullopt;
}

const TagSet& all_tags() {
    static const TagSet kAll = [] {
        TagSet s;
        for (const auto& [t, name] : kTagNames) s.insert(t);
        return s;
    }();
    return kAll;
}

TagSet parse_tag_list(std::string_view list) {
    TagSet out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = trim(list.substr(0, comma));
        if (item == "all") {
            out.insert(all_tags().begin(), all_tags().end());
        } else if (auto tag = parse_tag_name(item)) {
            out.insert(*tag);
        } else if (!item.empty()) {
            throw std::invalid_argument("unknown tag '" + std::string(item) + "'");
        }
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw std::invalid_argument("tag list is empty");
    return out;
}

std::string quarter_of(const logmodel::Date& date) {
    return "Q" + std::to_string((date.month - 1) / 3 + 1);
}

std::string field_value(const logmodel::LogRecord& r, FieldTag tag) {
    switch (tag) {
        case FieldTag::Page: return r.url;
        case FieldTag::City: return r.city;
        case FieldTag::State: return r.state;
        case FieldTag::Country: return r.country;
        case FieldTag::Age: return std::to_string(r.age);
        case FieldTag::Quarter: return quarter_of(r.date);
        case FieldTag::Date: return logmodel::format_date(r.date);
    }
    return {};
}

std::string serialize(const TaggedKey& key) {
    std::string out(tag_name(key.tag));
    out += '-';
    out += key.value;
    return out;
}

std::optional<TaggedKey> parse_tagged_key(std::string_view key) {
    const auto dash = key.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    auto tag = parse_tag_name(key.substr(0, dash));
    if (!tag) return std::nullopt;
    return TaggedKey{*tag, std::string(key.substr(dash + 1))};
}

void hit_map(std::string_view line, mr::Collector& out, const TagSet& tags) {
    auto parsed = logmodel::try_parse_record(logmodel::RawLogLine{line, 0});
    const auto* record = std::get_if<logmodel::LogRecord>(&parsed);
    if (!record) {
        out.increment(kSkippedCounter);
        return;
    }
    out.increment(kValidCounter);
    const std::string hits = std::to_string(record->hit);
    for (FieldTag tag : tags) out.emit(serialize(TaggedKey{tag, field_value(*record, tag)}), hits);
}

void hit_reduce(const std::string& key, std::span<const std::string> values, mr::Collector& out) {
    std::int64_t sum = 0;
    for (const auto& v : values) {
        std::int64_t n = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || n < 0) {
            throw NumericError(key, "value '" + v + "' is not a non-negative integer");
        }
        if (sum > std::numeric_limits<std::int64_t>::max() - n) throw NumericError(key, "sum overflows int64");
        sum += n;
    }
    out.emit(key, std::to_string(sum));
}

mr::JobConfig make_job_config(const TagSet& tags, const EngineOptions& options, const mr::fs::path& output_dir) {
    if (tags.empty()) throw std::invalid_argument("run_hitcount: at least one tag required");
    mr::JobConfig config;
    config.map_fn = [tags](std::string_view line, mr::Collector& out) { hit_map(line, out, tags); };
    config.reduce_fn = hit_reduce;
    config.num_workers = options.num_workers;
    config.num_reduce_partitions = options.num_reduce_partitions;
    config.target_split_bytes = options.target_split_bytes;
    config.on_progress = options.on_progress;
    config.output_dir = output_dir;
    return config;
}

mr::JobResult run_hitcount(std::span<const mr::fs::path> inputs, const TagSet& tags, const EngineOptions& options,
                           const mr::fs::path& output_dir) {
    return mr::run_job(inputs, make_job_config(tags, options, output_dir));
}

mr::JobResult run_hitcount(const mr::fs::path& input, const TagSet& tags, const EngineOptions& options,
                           const mr::fs::path& output_dir) {
    return run_hitcount(std::span<const mr::fs::path>(&input, 1), tags, options, output_dir);
}

}  // namespace hitlog::hitcount
