#include "laas/transaction_log.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "laas/error.hpp"

namespace laas {

std::string to_string(const LinkRef& ref) {
    return "L" + std::to_string(ref.level) + " " + std::to_string(ref.link.sw) + "." + std::to_string(ref.link.port);
}

void TenantAllocation::canonicalize() {
    std::sort(hosts.begin(), hosts.end());
    std::sort(l1_links.begin(), l1_links.end());
    std::sort(l2_links.begin(), l2_links.end());
}

LogRecord LogRecord::add(const TenantAllocation& a, std::int64_t time) {
    LogRecord r;
    r.kind = Kind::Add;
    r.id = a.id;
    r.time = time;
    r.hosts = a.hosts;
    r.l1 = a.l1_links;
    r.l2 = a.l2_links;
    std::sort(r.hosts.begin(), r.hosts.end());
    std::sort(r.l1.begin(), r.l1.end());
    std::sort(r.l2.begin(), r.l2.end());
    r.requested = a.requested;
    return r;
}

LogRecord LogRecord::rem(TenantId id, std::int64_t time) {
    LogRecord r;
    r.kind = Kind::Rem;
    r.id = id;
    r.time = time;
    return r;
}

TenantAllocation LogRecord::allocation() const {
    TenantAllocation a;
    a.id = id;
    a.requested = requested > 0 ? requested : static_cast<int>(hosts.size());
    a.hosts = hosts;
    a.l1_links = l1;
    a.l2_links = l2;
    return a;
}

namespace {

void write_links(std::ostream& os, const char* tag, const std::vector<UpLink>& links) {
    os << ' ' << tag << ':';
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (i) os << ',';
        os << links[i].sw << '.' << links[i].port;
    }
}

[[noreturn]] void bad(int line_no, const std::string& line, const std::string& why) {
    throw ValidationError("log line " + std::to_string(line_no) + " (\"" + line + "\"): " + why);
}

long long to_int(const std::string& s, int line_no, const std::string& line) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad(line_no, line, "bad integer '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    return out;
}

}  // namespace

std::string format_record(const LogRecord& r) {
    std::ostringstream os;
    if (r.kind == LogRecord::Kind::Rem) {
        os << "REM " << static_cast<std::uint64_t>(r.id) << ' ' << r.time;
        return os.str();
    }
    os << "ADD " << static_cast<std::uint64_t>(r.id) << ' ' << r.time << " H:";
    for (std::size_t i = 0; i < r.hosts.size(); ++i) {
        if (i) os << ',';
        os << r.hosts[i];
    }
    write_links(os, "L1", r.l1);
    write_links(os, "L2", r.l2);
    if (r.requested > 0 && r.requested != static_cast<int>(r.hosts.size())) os << " N:" << r.requested;
    return os.str();
}

LogRecord parse_record(const std::string& line, int line_no) {
    std::istringstream is(line);
    std::vector<std::string> tok;
    std::string t;
    while (is >> t) tok.push_back(t);
    if (tok.size() < 3) bad(line_no, line, "expected at least kind, id and time");

    LogRecord r;
    long long id = to_int(tok[1], line_no, line);
    if (id < 0) bad(line_no, line, "negative tenant id");
    r.id = tenant_id(static_cast<std::uint64_t>(id));
    r.time = to_int(tok[2], line_no, line);

    if (tok[0] == "REM") {
        if (tok.size() != 3) bad(line_no, line, "REM takes exactly an id and a time");
        r.kind = LogRecord::Kind::Rem;
        return r;
    }
    if (tok[0] != "ADD") bad(line_no, line, "unknown record kind '" + tok[0] + "'");
    r.kind = LogRecord::Kind::Add;

    bool have_h = false, have_l1 = false, have_l2 = false;
    for (std::size_t i = 3; i < tok.size(); ++i) {
        const std::string& f = tok[i];
        auto colon = f.find(':');
        if (colon == std::string::npos) bad(line_no, line, "field without ':' ('" + f + "')");
        std::string tag = f.substr(0, colon);
        std::string body = f.substr(colon + 1);
        if (tag == "H") {
            have_h = true;
            for (const auto& h : split(body, ',')) r.hosts.push_back(static_cast<int>(to_int(h, line_no, line)));
        } else if (tag == "L1" || tag == "L2") {
            (tag == "L1" ? have_l1 : have_l2) = true;
            auto& dst = tag == "L1" ? r.l1 : r.l2;
            for (const auto& item : split(body, ',')) {
                auto dot = item.find('.');
                if (dot == std::string::npos) bad(line_no, line, "link '" + item + "' is not sw.port");
                dst.push_back(UpLink{static_cast<int>(to_int(item.substr(0, dot), line_no, line)),
                                     static_cast<int>(to_int(item.substr(dot + 1), line_no, line))});
            }
        } else if (tag == "N") {
            r.requested = static_cast<int>(to_int(body, line_no, line));
        } else {
            bad(line_no, line, "unknown field '" + tag + "'");
        }
    }
    if (!have_h || !have_l1 || !have_l2) bad(line_no, line, "ADD needs H:, L1: and L2: fields");
    return r;
}

ParsedLog read_log(std::istream& in) {
    ParsedLog out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream is(line.substr(first + 1));
            std::string key, value;
            if (is >> key >> value && key == "alg") out.algorithm = value;
            continue;
        }
        out.records.emplace_back(line_no, parse_record(line, line_no));
    }
    return out;
}

void write_log(std::ostream& out, const std::vector<LogRecord>& records, const std::string& algorithm) {
    out << "# alg " << algorithm << '\n';
    for (const auto& r : records) out << format_record(r) << '\n';
}

}  // namespace laas
