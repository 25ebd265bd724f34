#include "shfit/model.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include "shfit/errors.hpp"

namespace shfit {

SHState euler_step(const SHState& state, const SHParams& params) {
    if (!std::isfinite(state.s_bar) || !std::isfinite(state.h))
        throw InputError("euler_step: non-finite state");
    double e = params.beta_bar * state.s_bar * state.h;
    return {state.s_bar - e, state.h + e - params.gamma * state.h};
}

Trajectory simulate(const SHState& initial, const SHParams& params, long n_days,
                    long start_index) {
    if (n_days < 1) throw InputError("simulate: n_days must be >= 1");
    Trajectory traj;
    traj.start_index = start_index;
    traj.states.reserve(n_days + 1);
    traj.e.reserve(n_days + 1);
    traj.l.reserve(n_days + 1);
    SHState s = initial;
    if (!std::isfinite(s.s_bar) || !std::isfinite(s.h))
        throw InputError("simulate: non-finite initial state");
    for (long t = 0; t <= n_days; ++t) {
        double e = params.beta_bar * s.s_bar * s.h;
        double l = params.gamma * s.h;
        traj.states.push_back(s);
        traj.e.push_back(e);
        traj.l.push_back(l);
        if (t == n_days) break;
        s = SHState{s.s_bar - e, s.h + e - l};
        if (!std::isfinite(s.s_bar) || !std::isfinite(s.h))
            throw DivergenceError("simulate: state diverged", start_index + t + 1);
    }
    return traj;
}

std::vector<int> threshold_diagnostic(const Trajectory& traj, const SHParams& params) {
    if (traj.states.empty()) throw InputError("threshold_diagnostic: empty trajectory");
    std::vector<int> out;
    out.reserve(traj.states.size());
    for (const auto& st : traj.states) {
        double d = params.beta_bar * st.s_bar - params.gamma;
        out.push_back(d > 0 ? 1 : d < 0 ? -1 : 0);
    }
    return out;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "day,S_bar,H,E,L\n";
    for (size_t k = 0; k < traj.states.size(); ++k) {
        out += std::to_string(traj.start_index + long(k));
        out += ',';
        out += format_double(traj.states[k].s_bar);
        out += ',';
        out += format_double(traj.states[k].h);
        out += ',';
        out += format_double(traj.e[k]);
        out += ',';
        out += format_double(traj.l[k]);
        out += '\n';
    }
    return out;
}

namespace {
double parse_field(const std::string& s, long lineno) {
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ParseError("bad numeric field '" + s + "'", lineno);
    return v;
}
}  // namespace

Trajectory trajectory_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input, no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "day,S_bar,H,E,L") throw InputError("trajectory CSV needs header day,S_bar,H,E,L");
    Trajectory traj;
    long lineno = 1;
    bool first = true;
    long prev_day = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else
                cur += c;
        }
        f.push_back(cur);
        if (f.size() != 5) throw ParseError("want 5 fields", lineno);
        long day = std::strtol(f[0].c_str(), nullptr, 10);
        if (first) {
            traj.start_index = day;
            first = false;
        } else if (day != prev_day + 1) {
            throw ParseError("day column not contiguous", lineno);
        }
        prev_day = day;
        traj.states.push_back({parse_field(f[1], lineno), parse_field(f[2], lineno)});
        traj.e.push_back(parse_field(f[3], lineno));
        traj.l.push_back(parse_field(f[4], lineno));
    }
    if (traj.states.size() < 2) throw InputError("trajectory too short (need >= 2 days)");
    return traj;
}

ObservedSeries observed_from_trajectory(const Trajectory& traj, const Date& start_date,
                                        FlowDating dating) {
    ObservedSeries s;
    s.start_date = start_date;
    s.label = "synthetic trajectory";
    long n = long(traj.states.size());
    s.h.resize(n);
    s.e.assign(n, 0.0);
    s.l.assign(n, 0.0);
    for (long t = 0; t < n; ++t) s.h[t] = traj.states[t].h;
    if (dating == FlowDating::sampled) {
        for (long t = 0; t < n; ++t) {
            s.e[t] = traj.e[t];
            s.l[t] = traj.l[t];
        }
    } else {
        for (long t = 1; t < n; ++t) {
            s.e[t] = traj.e[t - 1];
            s.l[t] = traj.l[t - 1];
        }
    }
    return s;
}

}  // namespace shfit
