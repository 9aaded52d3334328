#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "laas/allocation.hpp"

namespace laas {

/// One line of the transaction log.
///
///     ADD <id> <t> H:<h,...> L1:<leaf.port,...> L2:<sw.port,...> [N:<requested>]
///     REM <id> <t>
///
/// Lists are comma separated and sorted; an empty list is written as "H:".
/// Lines starting with '#' are comments; "# alg <name>" names the algorithm
/// that produced the log.
struct LogRecord {
    enum class Kind { Add, Rem };
    Kind kind = Kind::Add;
    TenantId id{};
    std::int64_t time = 0;
    std::vector<int> hosts;
    std::vector<UpLink> l1;
    std::vector<UpLink> l2;
    int requested = 0;  ///< 0 when absent (taken as the host count)

    static LogRecord add(const TenantAllocation& a, std::int64_t time);
    static LogRecord rem(TenantId id, std::int64_t time);

    /// The allocation an ADD record describes (shape left unset).
    TenantAllocation allocation() const;
};

std::string format_record(const LogRecord& r);

/// Parses one non-comment line. Throws ValidationError with `line_no`.
LogRecord parse_record(const std::string& line, int line_no);

struct ParsedLog {
    std::optional<std::string> algorithm;
    std::vector<std::pair<int, LogRecord>> records;  ///< (line number, record)
};

ParsedLog read_log(std::istream& in);
void write_log(std::ostream& out, const std::vector<LogRecord>& records, const std::string& algorithm);

}  // namespace laas
