#include "shfit/data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "shfit/errors.hpp"

namespace shfit {

std::string format_double(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\"");
    size_t b = s.find_last_not_of(" \t\r\"");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double parse_count(const std::string& field, long line) {
    std::string f = trim(field);
    if (f.empty()) throw ParseError("empty numeric field", line);
    double v = 0;
    auto r = std::from_chars(f.data(), f.data() + f.size(), v);
    if (r.ec != std::errc{} || r.ptr != f.data() + f.size() || !std::isfinite(v))
        throw ParseError("bad numeric field '" + f + "'", line);
    return v;
}

char detect_delim(const std::string& header) {
    size_t commas = std::count(header.begin(), header.end(), ',');
    size_t semis = std::count(header.begin(), header.end(), ';');
    return semis > commas ? ';' : ',';
}

long find_col(const std::vector<std::string>& header, const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == name) return long(i);
    return -1;
}

}  // namespace

RawRecordSet parse_belgium_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input, no header");
    char delim = detect_delim(line);
    auto header = split(line, delim);
    long c_date = find_col(header, "DATE");
    long c_prov = find_col(header, "PROVINCE");
    long c_in = find_col(header, "TOTAL_IN");
    long c_new_in = find_col(header, "NEW_IN");
    long c_new_out = find_col(header, "NEW_OUT");
    if (c_date < 0 || c_in < 0 || c_new_in < 0 || c_new_out < 0)
        throw InputError("belgium schema needs columns DATE, TOTAL_IN, NEW_IN, NEW_OUT");

    RawRecordSet out;
    out.schema = Schema::belgium;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, delim);
        long need = std::max({c_date, c_in, c_new_in, c_new_out});
        if (long(f.size()) <= need) throw ParseError("too few fields", lineno);
        RawRecord r;
        try {
            r.date = parse_date(trim(f[c_date]));
        } catch (const InputError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (c_prov >= 0 && c_prov < long(f.size())) r.region = trim(f[c_prov]);
        r.c1 = parse_count(f[c_in], lineno);
        r.c2 = parse_count(f[c_new_in], lineno);
        r.c3 = parse_count(f[c_new_out], lineno);
        out.rows.push_back(std::move(r));
    }
    return out;
}

RawRecordSet parse_france_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input, no header");
    char delim = detect_delim(line);
    auto header = split(line, delim);
    long c_dep = find_col(header, "dep");
    long c_sexe = find_col(header, "sexe");
    long c_jour = find_col(header, "jour");
    long c_hosp = find_col(header, "hosp");
    long c_rad = find_col(header, "rad");
    long c_dc = find_col(header, "dc");
    if (c_dep < 0 || c_sexe < 0 || c_jour < 0 || c_hosp < 0 || c_rad < 0 || c_dc < 0)
        throw InputError("france schema needs columns dep, sexe, jour, hosp, rad, dc");

    RawRecordSet out;
    out.schema = Schema::france;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, delim);
        long need = std::max({c_dep, c_sexe, c_jour, c_hosp, c_rad, c_dc});
        if (long(f.size()) <= need) throw ParseError("too few fields", lineno);
        if (trim(f[c_sexe]) != "0") continue;  // keep the all-sexes stratum only
        RawRecord r;
        try {
            r.date = parse_date(trim(f[c_jour]));
        } catch (const InputError& e) {
            throw ParseError(e.what(), lineno);
        }
        r.region = trim(f[c_dep]);
        r.c1 = parse_count(f[c_hosp], lineno);
        r.c2 = parse_count(f[c_rad], lineno);
        r.c3 = parse_count(f[c_dc], lineno);
        out.rows.push_back(std::move(r));
    }
    return out;
}

ObservedSeries aggregate_national(const RawRecordSet& records) {
    if (records.rows.empty()) throw InputError("no records to aggregate");
    std::map<Date, std::array<double, 3>> by_date;
    for (const auto& r : records.rows) {
        auto& acc = by_date[r.date];
        acc[0] += r.c1;
        acc[1] += r.c2;
        acc[2] += r.c3;
    }
    Date first = by_date.begin()->first;
    Date last = by_date.rbegin()->first;
    long n = last - first + 1;
    if (long(by_date.size()) != n) {
        for (long t = 0; t < n; ++t)
            if (!by_date.count(first.plus_days(t)))
                throw InputError("date gap at " + format_date(first.plus_days(t)));
    }

    ObservedSeries s;
    if (records.schema == Schema::belgium) {
        s.start_date = first;
        s.label = "belgium national";
        for (long t = 0; t < n; ++t) {
            const auto& a = by_date.at(first.plus_days(t));
            s.h.push_back(a[0]);
            s.e.push_back(a[1]);
            s.l.push_back(a[2]);
        }
    } else {
        // Daily l = first difference of cumulative rad + dc; the first day's
        // difference is undefined, so the series starts one day later.
        if (n < 2) throw InputError("france schema needs at least 2 dates to difference");
        s.start_date = first.plus_days(1);
        s.label = "france national";
        double prev_cum = by_date.at(first)[1] + by_date.at(first)[2];
        for (long t = 1; t < n; ++t) {
            const auto& a = by_date.at(first.plus_days(t));
            double cum = a[1] + a[2];
            s.h.push_back(a[0]);
            s.e.push_back(0.0);
            s.l.push_back(cum - prev_cum);
            prev_cum = cum;
        }
    }
    return s;
}

ObservedSeries reconcile_flows(const ObservedSeries& series, Schema schema) {
    if (series.size() < 2) throw InputError("reconciliation needs a series of length >= 2");
    ObservedSeries out = series;
    out.e[0] = 0.0;
    out.l[0] = 0.0;
    for (long t = 1; t < out.size(); ++t) {
        if (schema == Schema::belgium)
            out.l[t] = -out.h[t] + out.h[t - 1] + out.e[t];
        else
            out.e[t] = out.h[t] - out.h[t - 1] + out.l[t];
    }
    return out;
}

std::string series_to_csv(const ObservedSeries& series) {
    std::string out = "date,H,E,L\n";
    for (long t = 0; t < series.size(); ++t) {
        out += format_date(series.date_at(t));
        out += ',';
        out += format_double(series.h[t]);
        out += ',';
        out += format_double(series.e[t]);
        out += ',';
        out += format_double(series.l[t]);
        out += '\n';
    }
    return out;
}

ObservedSeries series_from_csv(std::istream& in, const std::string& label) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input, no header");
    auto header = split(line, ',');
    if (find_col(header, "date") != 0 || find_col(header, "H") != 1 ||
        find_col(header, "E") != 2 || find_col(header, "L") != 3)
        throw InputError("series CSV needs header date,H,E,L");
    ObservedSeries s;
    s.label = label;
    long lineno = 1;
    Date prev;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 4) throw ParseError("want 4 fields", lineno);
        Date d;
        try {
            d = parse_date(trim(f[0]));
        } catch (const InputError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (s.h.empty())
            s.start_date = d;
        else if (d - prev != 1)
            throw ParseError("dates not contiguous", lineno);
        prev = d;
        s.h.push_back(parse_count(f[1], lineno));
        s.e.push_back(parse_count(f[2], lineno));
        s.l.push_back(parse_count(f[3], lineno));
    }
    if (s.size() < 2) throw InputError("series too short (need >= 2 days)");
    return s;
}

}  // namespace shfit
