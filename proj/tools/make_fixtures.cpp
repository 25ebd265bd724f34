// Generates the bundled synthetic hospitalization snapshots. The national
// series come from the SH recursion with a two-regime transmission rate
// (pre/post intervention, linear ramp between), observation noise, weekday
// reporting artifacts, and — for Belgium — deaths withheld from NEW_OUT so the
// raw file genuinely violates the stock-flow identity. Constants were
// calibrated so the sweep near the peak behaves like the reference results
// (clean post-ramp windows, gamma plateau, pre-peak degradation).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "shfit/dates.hpp"

using shfit::Date;

namespace {

struct NationalSeries {
    std::vector<double> h;       // true census
    std::vector<double> h_obs;   // noisy integer census
};

// two-regime beta with a linear ramp over [r0, r1]
double beta_at(double t, double b1, double b2, double r0, double r1) {
    if (t <= r0) return b1;
    if (t >= r1) return b2;
    double w = (t - r0) / (r1 - r0);
    return b1 * (1 - w) + b2 * w;
}

std::vector<double> simulate_census(double b1, double b2, double r0, double r1, double s0,
                                    double h0, double gamma, long n_days) {
    std::vector<double> h(n_days + 1);
    double s = s0, hc = h0;
    h[0] = hc;
    for (long t = 0; t < n_days; ++t) {
        double e = beta_at(double(t), b1, b2, r0, r1) * s * hc;
        double l = gamma * hc;
        s -= e;
        hc += e - l;
        h[t + 1] = hc;
    }
    return h;
}

// split a non-negative integer across shares, exactly (largest remainder)
std::vector<long> split_exact(long v, const std::vector<double>& shares) {
    std::vector<long> out(shares.size());
    std::vector<std::pair<double, size_t>> rems;
    long assigned = 0;
    for (size_t i = 0; i < shares.size(); ++i) {
        double exact = shares[i] * double(v);
        out[i] = long(std::floor(exact));
        assigned += out[i];
        rems.push_back({exact - std::floor(exact), i});
    }
    std::stable_sort(rems.begin(), rems.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (long k = 0; k < v - assigned; ++k) out[rems[size_t(k) % rems.size()].second]++;
    return out;
}

void write_belgium(const std::filesystem::path& path, unsigned seed) {
    const long n = 122;  // 123 dates, 2020-03-15 .. 2020-07-15
    const double b1 = 1.0e-5, b2 = 7.0e-6, r0 = 2, r1 = 9;
    const double s0 = 17000, h0 = 1200, gamma = 0.08;
    const Date start(2020, 3, 15);

    std::vector<double> h = simulate_census(b1, b2, r0, r1, s0, h0, gamma, n);
    // completion-dated true flows: the intake/exit reported on day t happened
    // during the step t-1 -> t
    std::vector<double> e_true(n + 1, 0.0), l_true(n + 1, 0.0);
    {
        double s = s0, hc = h0;
        for (long t = 0; t < n; ++t) {
            double e = beta_at(double(t), b1, b2, r0, r1) * s * hc;
            double l = gamma * hc;
            e_true[t + 1] = e;
            l_true[t + 1] = l;
            s -= e;
            hc += e - l;
        }
    }

    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] { return normal(rng); };

    const double weekday_shape[7] = {0.8, 1.0, 0.4, 0.0, -0.2, -1.4, -2.0};
    auto weekday = [&](long t) { return 1.0 + 0.05 * weekday_shape[(t + 6) % 7] / 2.0; };

    std::vector<long> h_obs(n + 1), e_obs(n + 1, 0), l_obs(n + 1, 0);
    for (long t = 0; t <= n; ++t) {
        double sigma = 0.020 * std::exp(-double(t) / 22.0) + 0.005;
        double wobble = 0.007 * std::sin(2 * M_PI * double(t) / 31.0 + 0.9);
        h_obs[t] = std::max(1L, std::lround(h[t] * (1.0 + wobble + sigma * draw())));
    }
    for (long t = 1; t <= n; ++t)
        e_obs[t] = std::max(0L, std::lround(e_true[t] * weekday(t) * (1.0 + 0.03 * draw())));
    for (long t = 1; t <= n; ++t)  // 16% of exits (deaths) never reach NEW_OUT
        l_obs[t] = std::max(0L, std::lround(0.84 * l_true[t] * weekday(t) * (1.0 + 0.04 * draw())));

    const char* provinces[3] = {"Antwerpen", "Liege", "WestVlaanderen"};
    const char* regions[3] = {"Flanders", "Wallonia", "Flanders"};
    const std::vector<double> shares = {0.45, 0.35, 0.20};

    std::ofstream out(path);
    out << "DATE,PROVINCE,REGION,TOTAL_IN,TOTAL_IN_ICU,NEW_IN,NEW_OUT\n";
    for (long t = 0; t <= n; ++t) {
        auto hs = split_exact(h_obs[t], shares);
        auto es = split_exact(e_obs[t], shares);
        auto ls = split_exact(l_obs[t], shares);
        for (int p = 0; p < 3; ++p) {
            out << shfit::format_date(start.plus_days(t)) << ',' << provinces[p] << ','
                << regions[p] << ',' << hs[p] << ',' << hs[p] / 5 << ',' << es[p] << ','
                << ls[p] << '\n';
        }
    }
    std::printf("belgium: %ld dates, peak H_obs day %ld\n", n + 1,
                long(std::max_element(h_obs.begin(), h_obs.end()) - h_obs.begin()));
}

void write_france(const std::filesystem::path& path, unsigned seed) {
    const long n = 121;  // 122 dates, 2020-03-18 .. 2020-07-17 (the first date
                         // drops out when rad+dc is differenced)
    const double b1 = 7.5e-6, b2 = 6.2e-6, r0 = 2, r1 = 10;
    const double s0 = 16000, h0 = 2600, gamma_census = 0.055;
    const Date first(2020, 3, 18);

    std::vector<double> h = simulate_census(b1, b2, r0, r1, s0, h0, gamma_census, n);

    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<long> h_obs(n + 1), rad_daily(n + 1, 0), dc_daily(n + 1, 0);
    for (long t = 0; t <= n; ++t)
        h_obs[t] = std::max(1L, std::lround(h[t] * (1.0 + 0.008 * normal(rng))));
    for (long t = 0; t <= n; ++t) {
        // reported exits follow their own drifting rate, decoupled from the census
        double gamma_fr = 0.040 + 0.028 * std::exp(-double(t) / 50.0);
        long l = std::max(0L, std::lround(gamma_fr * h[t]));
        rad_daily[t] = std::lround(0.75 * double(l));
        dc_daily[t] = l - rad_daily[t];
    }

    const char* deps[4] = {"01", "02", "03", "04"};
    const std::vector<double> shares = {0.35, 0.30, 0.20, 0.15};

    // per-department daily integers, then cumulative sums (monotone by construction)
    std::vector<std::vector<long>> rad_cum(4, std::vector<long>(n + 1, 0));
    std::vector<std::vector<long>> dc_cum(4, std::vector<long>(n + 1, 0));
    std::vector<std::vector<long>> hosp(4, std::vector<long>(n + 1, 0));
    for (long t = 0; t <= n; ++t) {
        auto hs = split_exact(h_obs[t], shares);
        auto rs = split_exact(rad_daily[t], shares);
        auto ds = split_exact(dc_daily[t], shares);
        for (int d = 0; d < 4; ++d) {
            hosp[d][t] = hs[d];
            rad_cum[d][t] = (t ? rad_cum[d][t - 1] : 0) + rs[d];
            dc_cum[d][t] = (t ? dc_cum[d][t - 1] : 0) + ds[d];
        }
    }

    std::ofstream out(path);
    out << "\"dep\";\"sexe\";\"jour\";\"hosp\";\"rea\";\"rad\";\"dc\"\n";
    for (long t = 0; t <= n; ++t) {
        for (int d = 0; d < 4; ++d) {
            long v[4] = {hosp[d][t], hosp[d][t] / 5, rad_cum[d][t], dc_cum[d][t]};
            long male[4];
            for (int k = 0; k < 4; ++k) male[k] = long(std::floor(0.48 * double(v[k])));
            for (int sexe = 0; sexe <= 2; ++sexe) {
                out << '"' << deps[d] << "\";\"" << sexe << "\";\""
                    << shfit::format_date(first.plus_days(t)) << "\";";
                for (int k = 0; k < 4; ++k) {
                    long val = sexe == 0 ? v[k] : sexe == 1 ? male[k] : v[k] - male[k];
                    out << val << (k < 3 ? ";" : "");
                }
                out << '\n';
            }
        }
    }
    std::printf("france: %ld dates, peak H_obs day %ld\n", n + 1,
                long(std::max_element(h_obs.begin(), h_obs.end()) - h_obs.begin()));
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    unsigned belgium_seed = argc > 2 ? unsigned(std::stoul(argv[2])) : 42u;
    unsigned france_seed = argc > 3 ? unsigned(std::stoul(argv[3])) : 777u;
    std::filesystem::create_directories(dir);
    write_belgium(dir / "belgium_hosp.csv", belgium_seed);
    write_france(dir / "france_hosp.csv", france_seed);
    return 0;
}
