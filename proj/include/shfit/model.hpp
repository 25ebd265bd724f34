#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "shfit/data.hpp"

namespace shfit {

// The pair (beta_bar, gamma). beta_bar = beta / (N * alpha) folds the case
// hospitalization ratio into the transmission rate.
struct SHParams {
    double beta_bar = 0;
    double gamma = 0;
};

struct SHState {
    double s_bar = 0;
    double h = 0;
};

// Simulated states plus the flows e(t) = beta_bar*s_bar(t)*h(t) and
// l(t) = gamma*h(t), evaluated pointwise for every stored day. Euler steps
// consume flows at the left endpoint: state t+1 = state t + (e[t], ...).
// The last entry of e/l is the flow the *next* step would use.
struct Trajectory {
    long start_index = 0;
    std::vector<SHState> states;
    std::vector<double> e, l;

    long days() const { return long(states.size()) - 1; }
};

// One census step: (s - b*s*h, h + b*s*h - g*h), evaluated as written.
SHState euler_step(const SHState& state, const SHParams& params);

// n_days repeated euler_steps; throws DivergenceError naming the first day a
// state goes non-finite.
Trajectory simulate(const SHState& initial, const SHParams& params, long n_days,
                    long start_index = 0);

// Per-day sign of beta_bar*s_bar(t) - gamma; positive iff h strictly grows at t.
std::vector<int> threshold_diagnostic(const Trajectory& traj, const SHParams& params);

// Trajectory CSV `day,S_bar,H,E,L`.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(std::istream& in);

// How flows are dated when a trajectory is sampled into an observed series:
//   sampled          e_o(t) = e(t), l_o(t) = l(t)        (what the CSV holds;
//                    makes l_o = gamma*h_o hold pointwise, so the gamma
//                    estimators are exact on noiseless data)
//   step_completion  e_o(t+1) = e(t), l_o(t+1) = l(t), flows at start = 0
//                    (the stock-flow identity holds and phi = 0 at the
//                    generator estimands)
enum class FlowDating { sampled, step_completion };

ObservedSeries observed_from_trajectory(const Trajectory& traj, const Date& start_date,
                                        FlowDating dating);

}  // namespace shfit
