#include "hitlog/logmodel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <limits>
#include <random>

namespace hitlog::logmodel {

namespace {

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool has_forbidden_char(std::string_view s) {
    return s.find_first_of("\t\r\n") != std::string_view::npos;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Uniform integer in [0, bound) from raw 64-bit engine output. The standard
// distributions are implementation-defined; this keeps the generator
// byte-identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int month, int year) {
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[static_cast<std::size_t>(month - 1)];
}

bool is_valid_date(const Date& d) {
    return d.year >= 1 && d.year <= 9999 && d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.month, d.year);
}

std::optional<Date> parse_date(std::string_view text) {
    const auto s1 = text.find('/');
    if (s1 == std::string_view::npos) return std::nullopt;
    const auto s2 = text.find('/', s1 + 1);
    if (s2 == std::string_view::npos) return std::nullopt;
    const auto day = text.substr(0, s1);
    const auto month = text.substr(s1 + 1, s2 - s1 - 1);
    const auto year = text.substr(s2 + 1);
    if (day.size() > 2 || month.size() > 2 || year.size() != 4) return std::nullopt;
    if (!all_digits(day) || !all_digits(month) || !all_digits(year)) return std::nullopt;
    Date d;
    if (!parse_int(day, d.day) || !parse_int(month, d.month) || !parse_int(year, d.year)) return std::nullopt;
    if (!is_valid_date(d)) return std::nullopt;
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d/%02d/%04d", d.day, d.month, d.year);
    return buf;
}

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::FieldCount: return "FieldCountError";
        case ParseErrorKind::Date: return "DateError";
        case ParseErrorKind::Numeric: return "NumericError";
        case ParseErrorKind::FieldText: return "FieldTextError";
    }
    return "ParseError";
}

ParseError::ParseError(ParseFailure failure)
    : std::runtime_error(std::string(to_string(failure.kind)) + " at line " +
                         std::to_string(failure.line_number) + ": " + failure.detail),
      failure_(std::move(failure)) {}

std::variant<LogRecord, ParseFailure> try_parse_record(RawLogLine line) {
    std::array<std::string_view, kFieldCount> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    const std::string_view text = line.text;
    while (true) {
        const auto pos = text.find(kFieldSeparator, start);
        if (count == kFieldCount) {
            return ParseFailure{ParseErrorKind::FieldCount, line.line_number, "more than 7 fields"};
        }
        fields[count++] = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (count != kFieldCount) {
        return ParseFailure{ParseErrorKind::FieldCount, line.line_number,
                            "expected 7 fields, found " + std::to_string(count)};
    }
    for (std::size_t i : {0u, 4u, 5u, 6u}) {
        if (has_forbidden_char(fields[i])) {
            return ParseFailure{ParseErrorKind::FieldText, line.line_number,
                                "field " + std::to_string(i + 1) + " contains a control character"};
        }
    }

    LogRecord r;
    auto date = parse_date(fields[1]);
    if (!date) {
        return ParseFailure{ParseErrorKind::Date, line.line_number, "bad date '" + std::string(fields[1]) + "'"};
    }
    r.date = *date;
    if (!all_digits(fields[2]) || !parse_int(fields[2], r.hit) || r.hit < 1) {
        return ParseFailure{ParseErrorKind::Numeric, line.line_number, "bad hit '" + std::string(fields[2]) + "'"};
    }
    if (!all_digits(fields[3]) || !parse_int(fields[3], r.age) || r.age < 1 || r.age > 120) {
        return ParseFailure{ParseErrorKind::Numeric, line.line_number, "bad age '" + std::string(fields[3]) + "'"};
    }
    r.url = fields[0];
    r.country = fields[4];
    r.state = fields[5];
    r.city = fields[6];
    return r;
}

LogRecord parse_record(RawLogLine line) {
    auto result = try_parse_record(line);
    if (auto* failure = std::get_if<ParseFailure>(&result)) throw ParseError(std::move(*failure));
    return std::get<LogRecord>(std::move(result));
}

std::string format_record(const LogRecord& r) {
    std::string out;
    out.reserve(r.url.size() + r.country.size() + r.state.size() + r.city.size() + 32);
    out += r.url;
    out += kFieldSeparator;
    out += format_date(r.date);
    out += kFieldSeparator;
    out += std::to_string(r.hit);
    out += kFieldSeparator;
    out += std::to_string(r.age);
    out += kFieldSeparator;
    out += r.country;
    out += kFieldSeparator;
    out += r.state;
    out += kFieldSeparator;
    out += r.city;
    return out;
}

const std::vector<std::string>& default_noise_suffixes() {
    static const std::vector<std::string> kSuffixes = {".jpg", ".jpeg", ".png", ".gif",
                                                       ".ico", ".css",  ".js",  ".swf"};
    return kSuffixes;
}

bool is_noise(RawLogLine line, const std::vector<std::string>& suffixes) {
    const auto path = to_lower(line.text.substr(0, line.text.find(kFieldSeparator)));
    return std::any_of(suffixes.begin(), suffixes.end(), [&](const std::string& suffix) {
        const auto s = to_lower(suffix);
        return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
    });
}

std::ostream& operator<<(std::ostream& os, const PreprocessReport& report) {
    os << "preprocess: total=" << report.total << " kept=" << report.kept << " noise=" << report.noise
       << " malformed=" << report.malformed;
    if (!report.first_malformed_lines.empty()) {
        os << " (first malformed lines:";
        for (auto n : report.first_malformed_lines) os << ' ' << n;
        os << ')';
    }
    return os;
}

namespace {

template <typename OnRecord>
PreprocessReport preprocess_impl(std::istream& in, const std::vector<std::string>& suffixes, OnRecord&& on_record) {
    PreprocessReport report;
    std::string text;
    while (std::getline(in, text)) {
        ++report.total;
        const RawLogLine line{text, report.total};
        if (is_noise(line, suffixes)) {
            ++report.noise;
            continue;
        }
        auto parsed = try_parse_record(line);
        if (auto* record = std::get_if<LogRecord>(&parsed)) {
            ++report.kept;
            on_record(std::move(*record));
        } else {
            ++report.malformed;
            if (report.first_malformed_lines.size() < PreprocessReport::kMaxReportedLines) {
                report.first_malformed_lines.push_back(report.total);
            }
        }
    }
    if (in.bad()) throw std::runtime_error("preprocess: read failure");
    return report;
}

}  // namespace

PreprocessResult preprocess(std::istream& in, const std::vector<std::string>& noise_suffixes,
                            std::ostream* canonical_out) {
    PreprocessResult result;
    result.report = preprocess_impl(in, noise_suffixes, [&](LogRecord&& r) {
        if (canonical_out) *canonical_out << format_record(r) << '\n';
        result.records.push_back(std::move(r));
    });
    return result;
}

PreprocessReport preprocess_to(std::istream& in, std::ostream& canonical_out,
                               const std::vector<std::string>& noise_suffixes) {
    auto report = preprocess_impl(in, noise_suffixes,
                                  [&](LogRecord&& r) { canonical_out << format_record(r) << '\n'; });
    if (!canonical_out) throw std::runtime_error("preprocess: write failure");
    return report;
}

std::vector<LogRecord> generate(const GeneratorConfig& config) {
    if (config.record_count == 0) throw std::invalid_argument("generate: record_count must be >= 1");
    if (config.page_catalog.empty() || config.city_catalog.empty()) {
        throw std::invalid_argument("generate: catalogs must be non-empty");
    }
    if (config.year < 1 || config.year > 9999) throw std::invalid_argument("generate: year out of range");

    std::mt19937_64 rng(config.seed);
    const int year_days = is_leap_year(config.year) ? 366 : 365;
    std::vector<LogRecord> out;
    out.reserve(config.record_count);
    for (std::size_t i = 0; i < config.record_count; ++i) {
        LogRecord r;
        r.url = config.page_catalog[uniform_below(rng, config.page_catalog.size())];
        int doy = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(year_days)));
        int month = 1;
        while (doy >= days_in_month(month, config.year)) {
            doy -= days_in_month(month, config.year);
            ++month;
        }
        r.date = Date{doy + 1, month, config.year};
        r.hit = 1;
        r.age = 1 + static_cast<int>(uniform_below(rng, 80));
        r.country = config.country;
        r.state = config.state;
        r.city = config.city_catalog[uniform_below(rng, config.city_catalog.size())];
        out.push_back(std::move(r));
    }
    return out;
}

void write_records(std::ostream& out, const std::vector<LogRecord>& records) {
    for (const auto& r : records) out << format_record(r) << '\n';
}

}  // namespace hitlog::logmodel
