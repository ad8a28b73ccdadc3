#pragma once
// Trace parsing and data cleaning.
//
// Trace format: UTF-8 text, one record per line, four TAB-separated
// columns in order user, item, tag, timestamp (epoch seconds, base-10
// integer).  Lines that are empty (after trimming) or start with '#' are
// ignored.  Labels must not contain TAB or newline; there is no quoting.
//
// Cleaning removes, in order:
//   1. records older than min_timestamp (when set),
//   2. every assignment of users whose tag vocabulary is a subset of the
//      reserved set ("no-tag", "bibtex-import" by default),
//   3. every assignment of users with >= burst_count assignments inside
//      any sliding window of burst_window seconds (robot heuristic).
// Rule 3 runs on the timestamp-filtered stream, so a window is judged on
// the data that survives rule 1.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "folkstat/community.hpp"
#include "folkstat/errors.hpp"

namespace folkstat {

struct RawRecord {
    std::string user;
    std::string item;
    std::string tag;
    std::int64_t timestamp = 0;
    std::size_t source_line = 0;
};

enum class ParseMode { strict, lenient };

struct ParseIssue {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<ParseIssue> skipped; // populated in lenient mode only
};

struct CleaningConfig {
    std::set<std::string> reserved_tags = {"no-tag", "bibtex-import"};
    std::size_t burst_count = 3000;
    std::int64_t burst_window = 300;
    std::optional<std::int64_t> min_timestamp;

    void validate() const {
        if (burst_count < 1)
            throw validation_error("burst_count must be >= 1");
        if (burst_window <= 0)
            throw validation_error("burst_window must be positive");
    }
};

struct CleaningReport {
    std::size_t users_removed_reserved = 0;
    std::size_t users_removed_robot = 0;
    std::size_t records_dropped_timestamp = 0;
    std::size_t assignments_removed = 0; // via user removal (rules 2 and 3)
    double fraction_users_removed = 0.0; // removed users / distinct users in input

    friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

struct CleanResult {
    std::vector<Assignment> assignments;
    CleaningReport report;
};

namespace detail {

inline std::optional<std::int64_t> parse_epoch_seconds(std::string_view text) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || value < 0)
        return std::nullopt;
    return value;
}

} // namespace detail

inline ParseResult parse_trace(std::istream& in, ParseMode mode = ParseMode::strict) {
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](std::size_t no, std::string reason) {
        if (mode == ParseMode::strict)
            throw malformed_line_error(no, reason);
        result.skipped.push_back({no, std::move(reason)});
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty() || line.front() == '#')
            continue;

        std::array<std::string_view, 4> cols;
        std::size_t ncols = 0;
        std::size_t start = 0;
        bool too_many = false;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                if (ncols == 4) {
                    too_many = true;
                    break;
                }
                cols[ncols++] = std::string_view(line).substr(start, i - start);
                start = i + 1;
            }
        }
        if (too_many || ncols != 4) {
            fail(line_no, "expected 4 tab-separated columns");
            continue;
        }

        RawRecord rec;
        rec.user = std::string(trim(cols[0]));
        rec.item = std::string(trim(cols[1]));
        rec.tag = std::string(trim(cols[2]));
        rec.source_line = line_no;
        if (rec.user.empty() || rec.item.empty() || rec.tag.empty()) {
            fail(line_no, "empty label");
            continue;
        }
        auto ts = detail::parse_epoch_seconds(trim(cols[3]));
        if (!ts) {
            fail(line_no, "unparseable timestamp '" + std::string(trim(cols[3])) + "'");
            continue;
        }
        rec.timestamp = *ts;
        result.records.push_back(std::move(rec));
    }
    return result;
}

inline CleanResult clean(const std::vector<RawRecord>& records, const CleaningConfig& config) {
    config.validate();
    CleanResult out;

    std::unordered_set<std::string> raw_users;
    for (const RawRecord& r : records)
        raw_users.insert(r.user);

    // Rule 1: timestamp floor.
    std::vector<const RawRecord*> kept;
    kept.reserve(records.size());
    for (const RawRecord& r : records) {
        if (config.min_timestamp && r.timestamp < *config.min_timestamp) {
            ++out.report.records_dropped_timestamp;
        } else {
            kept.push_back(&r);
        }
    }

    // Rule 2: users tagging exclusively with reserved tags.
    std::unordered_map<std::string, bool> only_reserved; // user -> vocab subset of reserved
    for (const RawRecord* r : kept) {
        auto [it, inserted] = only_reserved.try_emplace(r->user, true);
        if (it->second && !config.reserved_tags.count(r->tag))
            it->second = false;
    }
    std::unordered_set<std::string> removed_users;
    for (const auto& [user, reserved_only] : only_reserved) {
        if (reserved_only) {
            removed_users.insert(user);
            ++out.report.users_removed_reserved;
        }
    }

    // Rule 3: robot bursts, judged on survivors of rules 1 and 2.
    std::unordered_map<std::string, std::vector<std::int64_t>> stamps;
    for (const RawRecord* r : kept) {
        if (!removed_users.count(r->user))
            stamps[r->user].push_back(r->timestamp);
    }
    for (auto& [user, ts] : stamps) {
        if (ts.size() < config.burst_count)
            continue;
        std::sort(ts.begin(), ts.end());
        std::size_t lo = 0;
        bool robot = false;
        for (std::size_t hi = 0; hi < ts.size(); ++hi) {
            while (ts[hi] - ts[lo] > config.burst_window)
                ++lo;
            if (hi - lo + 1 >= config.burst_count) {
                robot = true;
                break;
            }
        }
        if (robot) {
            removed_users.insert(user);
            ++out.report.users_removed_robot;
        }
    }

    for (const RawRecord* r : kept) {
        if (removed_users.count(r->user)) {
            ++out.report.assignments_removed;
        } else {
            out.assignments.push_back(Assignment{r->user, r->tag, r->item, r->timestamp});
        }
    }
    out.report.fraction_users_removed =
        raw_users.empty() ? 0.0
                          : static_cast<double>(removed_users.size()) /
                                static_cast<double>(raw_users.size());
    return out;
}

// Cleaned assignments serialize back to the same TSV contract.
inline void write_trace_line(std::ostream& os, const Assignment& a) {
    os << a.user << '\t' << a.item << '\t' << a.tag << '\t' << a.timestamp << '\n';
}

} // namespace folkstat
