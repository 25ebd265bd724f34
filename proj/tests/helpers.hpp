#pragma once
#include <fstream>
#include <sstream>
#include <string>

#include "shfit/backtest.hpp"
#include "shfit/data.hpp"
#include "shfit/estimation.hpp"
#include "shfit/model.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(SHFIT_DATA_DIR) + "/" + name;
}

inline shfit::ObservedSeries load_belgium() {
    std::ifstream in(data_path("belgium_hosp.csv"));
    auto series = shfit::aggregate_national(shfit::parse_belgium_csv(in));
    return shfit::reconcile_flows(series, shfit::Schema::belgium);
}

inline shfit::ObservedSeries load_france() {
    std::ifstream in(data_path("france_hosp.csv"));
    auto series = shfit::aggregate_national(shfit::parse_france_csv(in));
    return shfit::reconcile_flows(series, shfit::Schema::france);
}

// noiseless SH series, both flow datings available
inline shfit::ObservedSeries synthetic_series(const shfit::SHParams& params,
                                              const shfit::SHState& initial, long days,
                                              shfit::FlowDating dating) {
    auto traj = shfit::simulate(initial, params, days);
    return shfit::observed_from_trajectory(traj, shfit::Date(2020, 1, 1), dating);
}

inline long argmax_h(const shfit::ObservedSeries& s) {
    long best = 0;
    for (long t = 1; t < s.size(); ++t)
        if (s.h[t] > s.h[best]) best = t;
    return best;
}

inline double rel_err(double got, double want) {
    return want == 0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

}  // namespace testutil
