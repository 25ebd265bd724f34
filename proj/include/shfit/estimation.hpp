#pragma once
#include <array>
#include <optional>
#include <string>

#include "shfit/data.hpp"
#include "shfit/model.hpp"
#include "shfit/nelder_mead.hpp"

namespace shfit {

// Train window [t_i, t_c], both inclusive, day indices relative to the
// series start. Whole-period fits use t_c = last index.
struct Window {
    long t_i = 0;
    long t_c = 0;

    long length() const { return t_c - t_i + 1; }
    void validate(const ObservedSeries& series) const;
};

struct LossWeights {
    double c_h = 1, c_e = 1, c_l = 1;
};

enum class FitMethod { sequential, joint4d, closed_form };
enum class GammaEstimator { ratio_of_means, least_squares };

std::string to_string(FitMethod m);
std::string to_string(GammaEstimator g);

struct FitResult {
    SHParams params;
    SHState initial;  // state at t_i
    double phi_star = 0;
    FitMethod method = FitMethod::sequential;
    GammaEstimator gamma_estimator = GammaEstimator::ratio_of_means;
    SolveReport solver;
    Trajectory fitted;  // over the train window
    Window window;
};

// H(t_i) := H_o(t_i), read verbatim from the (reconciled) series.
double estimate_h0(const ObservedSeries& series, const Window& window);

// gamma = (sum l) / (sum h), both sums over [t_i, t_c].
double estimate_gamma_ratio_of_means(const ObservedSeries& series, const Window& window);

// gamma = (sum l*h) / (sum h^2): least-squares slope of l on h through 0.
double estimate_gamma_least_squares(const ObservedSeries& series, const Window& window);

// phi = c_h * sum_{t=t_i}^{t_c} (H(t)-h_o(t))^2
//     + c_e * sum_{t=t_i}^{t_c-1} (E(t)-e_o(t+1))^2
//     + c_l * sum_{t=t_i}^{t_c-1} (L(t)-l_o(t+1))^2,
// simulating the census recursion from (s_bar_0, h0). The model flow of
// the step t -> t+1 is paired with the observation dated t+1 (the day the
// transition completes). Non-finite simulation gives +infinity.
double objective_phi(double beta_bar, double s_bar_0, double gamma, double h0,
                     const ObservedSeries& series, const Window& window,
                     const LossWeights& weights);

struct FitOptions {
    LossWeights weights{};
    GammaEstimator gamma_estimator = GammaEstimator::ratio_of_means;
    double guess_beta = 1e-5;
    double guess_s_bar = 1e4;
    SimplexConfig simplex{};
};

// h0 verbatim, gamma by the selected estimator, then Nelder-Mead over
// (beta_bar, s_bar_0). Non-convergence is reported, not thrown.
FitResult fit_sequential(const ObservedSeries& series, const Window& window,
                         const FitOptions& options = {});

// Nelder-Mead over all four estimands. Without an explicit guess the
// sequential fit's output seeds the solver.
FitResult fit_joint4d(const ObservedSeries& series, const Window& window,
                      const FitOptions& options = {},
                      std::optional<std::array<double, 4>> guess = std::nullopt);

struct ClosedFormEstimate {
    double beta_bar = 0;
    double s_bar = 0;
    bool sign_warning = false;  // beta_bar_hat <= 0
};

// Two-day algebraic identification from (h, e) differences; a quick
// diagnostic, not the fitting pipeline. Needs e(t) > 0 and h(t) > 0.
ClosedFormEstimate estimate_closed_form(const ObservedSeries& series, long t);

// FitResult JSON (field layout per the external interface).
std::string fit_result_to_json(const FitResult& fit, const ObservedSeries& series);

}  // namespace shfit
