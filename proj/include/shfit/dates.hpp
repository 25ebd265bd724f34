#pragma once
#include <chrono>
#include <cstdio>
#include <string>

#include "shfit/errors.hpp"

namespace shfit {

// Calendar day. Thin wrapper over chrono's sys_days so day arithmetic is
// plain integer arithmetic.
struct Date {
    std::chrono::sys_days day{};

    Date() = default;
    explicit Date(std::chrono::sys_days d) : day(d) {}
    Date(int y, unsigned m, unsigned d)
        : day(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}}) {}

    Date plus_days(long n) const { return Date{day + std::chrono::days{n}}; }
    long operator-(const Date& o) const { return (day - o.day).count(); }
    bool operator==(const Date&) const = default;
    auto operator<=>(const Date&) const = default;
};

// Strict YYYY-MM-DD; any other shape is rejected.
inline Date parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw InputError("bad date '" + s + "' (want YYYY-MM-DD)");
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[i] < '0' || s[i] > '9') throw InputError("bad date '" + s + "'");
    int y = std::stoi(s.substr(0, 4));
    unsigned m = unsigned(std::stoi(s.substr(5, 2)));
    unsigned d = unsigned(std::stoi(s.substr(8, 2)));
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) throw InputError("bad date '" + s + "' (not a calendar day)");
    return Date{std::chrono::sys_days{ymd}};
}

inline std::string format_date(const Date& d) {
    std::chrono::year_month_day ymd{d.day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

}  // namespace shfit
