#pragma once

// Web log record model: the '#'-separated 7-field line format, noise
// filtering, preprocessing and a seeded synthetic generator.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hitlog::logmodel {

inline constexpr char kFieldSeparator = '#';
inline constexpr std::size_t kFieldCount = 7;

struct Date {
    int day = 1;
    int month = 1;
    int year = 1970;

    friend auto operator<=>(const Date&, const Date&) = default;
};

bool is_leap_year(int year);
int days_in_month(int month, int year);
bool is_valid_date(const Date& d);

/// Parses dd/mm/yyyy (day and month may be one or two digits, year four).
std::optional<Date> parse_date(std::string_view text);
/// Renders zero-padded dd/mm/yyyy.
std::string format_date(const Date& d);

struct LogRecord {
    std::string url;
    Date date;
    std::int64_t hit = 1;
    int age = 1;
    std::string country;
    std::string state;
    std::string city;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct RawLogLine {
    std::string_view text;
    std::size_t line_number = 1;
};

enum class ParseErrorKind {
    FieldCount,  // not exactly 7 fields
    Date,        // invalid dd/mm/yyyy
    Numeric,     // hit or age not an integer, or out of range
    FieldText,   // a text field carries a tab or carriage return
};

const char* to_string(ParseErrorKind kind);

struct ParseFailure {
    ParseErrorKind kind;
    std::size_t line_number;
    std::string detail;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(ParseFailure failure);

    ParseErrorKind kind() const { return failure_.kind; }
    std::size_t line_number() const { return failure_.line_number; }
    const ParseFailure& failure() const { return failure_; }

private:
    ParseFailure failure_;
};

/// Non-throwing parse used on hot paths.
std::variant<LogRecord, ParseFailure> try_parse_record(RawLogLine line);

/// Throws ParseError on any malformed line.
LogRecord parse_record(RawLogLine line);

std::string format_record(const LogRecord& r);

const std::vector<std::string>& default_noise_suffixes();

/// True iff the first field, lowercased, ends in one of `suffixes`
/// (suffixes are compared lowercased too). A line without '#' is judged whole.
bool is_noise(RawLogLine line, const std::vector<std::string>& suffixes = default_noise_suffixes());

struct PreprocessReport {
    std::size_t total = 0;
    std::size_t kept = 0;
    std::size_t noise = 0;
    std::size_t malformed = 0;
    std::vector<std::size_t> first_malformed_lines;  // at most kMaxReportedLines

    static constexpr std::size_t kMaxReportedLines = 10;
};

std::ostream& operator<<(std::ostream& os, const PreprocessReport& report);

struct PreprocessResult {
    std::vector<LogRecord> records;
    PreprocessReport report;
};

/// Streams `in` line by line. Kept records are appended to the result and,
/// when `canonical_out` is non-null, written to it in canonical form.
PreprocessResult preprocess(std::istream& in,
                            const std::vector<std::string>& noise_suffixes = default_noise_suffixes(),
                            std::ostream* canonical_out = nullptr);

/// Same as above but only counts and writes; records are not retained.
PreprocessReport preprocess_to(std::istream& in, std::ostream& canonical_out,
                               const std::vector<std::string>& noise_suffixes = default_noise_suffixes());

struct GeneratorConfig {
    std::size_t record_count = 1;
    std::uint64_t seed = 42;
    std::vector<std::string> page_catalog = {"pizza/index.html", "/pizza/anywhere-banking.html",
                                             "/pizza/cosmos-e-solutions-pvt-ltd.html"};
    std::vector<std::string> city_catalog = {"pune", "nashik", "bombay"};
    std::string country = "india";
    std::string state = "mh";
    int year = 2012;
};

/// Deterministic in (config, seed). Throws std::invalid_argument when
/// record_count is 0 or a catalog is empty.
std::vector<LogRecord> generate(const GeneratorConfig& config);

void write_records(std::ostream& out, const std::vector<LogRecord>& records);

}  // namespace hitlog::logmodel
