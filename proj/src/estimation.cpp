#include "shfit/estimation.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "shfit/errors.hpp"

namespace shfit {

void Window::validate(const ObservedSeries& series) const {
    if (t_i < 0 || t_c <= t_i || t_c >= series.size())
        throw InputError("window [" + std::to_string(t_i) + "," + std::to_string(t_c) +
                         "] invalid for series of length " + std::to_string(series.size()));
}

std::string to_string(FitMethod m) {
    switch (m) {
        case FitMethod::sequential: return "sequential";
        case FitMethod::joint4d: return "joint4d";
        default: return "closed_form";
    }
}

std::string to_string(GammaEstimator g) {
    return g == GammaEstimator::ratio_of_means ? "ratio_of_means" : "least_squares";
}

double estimate_h0(const ObservedSeries& series, const Window& window) {
    window.validate(series);
    return series.h[window.t_i];
}

double estimate_gamma_ratio_of_means(const ObservedSeries& series, const Window& window) {
    window.validate(series);
    double num = 0, den = 0;
    for (long t = window.t_i; t <= window.t_c; ++t) {
        num += series.l[t];
        den += series.h[t];
    }
    if (den <= 0) throw InputError("degenerate window: sum of h is not positive");
    return num / den;
}

double estimate_gamma_least_squares(const ObservedSeries& series, const Window& window) {
    window.validate(series);
    double num = 0, den = 0;
    for (long t = window.t_i; t <= window.t_c; ++t) {
        num += series.l[t] * series.h[t];
        den += series.h[t] * series.h[t];
    }
    if (den <= 0) throw InputError("degenerate window: sum of h^2 is not positive");
    return num / den;
}

double objective_phi(double beta_bar, double s_bar_0, double gamma, double h0,
                     const ObservedSeries& series, const Window& window,
                     const LossWeights& weights) {
    window.validate(series);
    const double inf = std::numeric_limits<double>::infinity();
    double s = s_bar_0, h = h0;
    double acc = weights.c_h * (h - series.h[window.t_i]) * (h - series.h[window.t_i]);
    for (long t = window.t_i; t < window.t_c; ++t) {
        double e = beta_bar * s * h;
        double l = gamma * h;
        double re = e - series.e[t + 1];
        double rl = l - series.l[t + 1];
        acc += weights.c_e * re * re + weights.c_l * rl * rl;
        s = s - e;
        h = h + e - l;
        double rh = h - series.h[t + 1];
        acc += weights.c_h * rh * rh;
        if (!std::isfinite(acc)) return inf;
    }
    return std::isfinite(acc) ? acc : inf;
}

namespace {

Trajectory window_trajectory(const FitResult& fit) {
    return simulate(fit.initial, fit.params, fit.window.t_c - fit.window.t_i, fit.window.t_i);
}

}  // namespace

FitResult fit_sequential(const ObservedSeries& series, const Window& window,
                         const FitOptions& options) {
    window.validate(series);
    const double inf = std::numeric_limits<double>::infinity();
    double h0 = estimate_h0(series, window);
    double gamma = options.gamma_estimator == GammaEstimator::ratio_of_means
                       ? estimate_gamma_ratio_of_means(series, window)
                       : estimate_gamma_least_squares(series, window);

    auto obj = [&](const std::vector<double>& x) {
        if (x[0] < 0 || x[1] < 0) return inf;
        return objective_phi(x[0], x[1], gamma, h0, series, window, options.weights);
    };
    SolveReport rep = nelder_mead(obj, {options.guess_beta, options.guess_s_bar}, options.simplex);

    FitResult fit;
    fit.params = {rep.x_min[0], gamma};
    fit.initial = {rep.x_min[1], h0};
    fit.phi_star = rep.f_min;
    fit.method = FitMethod::sequential;
    fit.gamma_estimator = options.gamma_estimator;
    fit.solver = std::move(rep);
    fit.window = window;
    fit.fitted = window_trajectory(fit);
    return fit;
}

FitResult fit_joint4d(const ObservedSeries& series, const Window& window,
                      const FitOptions& options, std::optional<std::array<double, 4>> guess) {
    window.validate(series);
    const double inf = std::numeric_limits<double>::infinity();
    std::array<double, 4> x0{};
    GammaEstimator seed_estimator = options.gamma_estimator;
    if (guess) {
        x0 = *guess;
    } else {
        FitResult seed = fit_sequential(series, window, options);
        x0 = {seed.params.beta_bar, seed.initial.s_bar, seed.params.gamma, seed.initial.h};
    }

    auto obj = [&](const std::vector<double>& x) {
        if (x[0] < 0 || x[1] < 0 || x[2] < 0 || x[2] > 1 || x[3] < 0) return inf;
        return objective_phi(x[0], x[1], x[2], x[3], series, window, options.weights);
    };
    SolveReport rep =
        nelder_mead(obj, {x0[0], x0[1], x0[2], x0[3]}, options.simplex);

    FitResult fit;
    fit.params = {rep.x_min[0], rep.x_min[2]};
    fit.initial = {rep.x_min[1], rep.x_min[3]};
    fit.phi_star = rep.f_min;
    fit.method = FitMethod::joint4d;
    fit.gamma_estimator = seed_estimator;
    fit.solver = std::move(rep);
    fit.window = window;
    fit.fitted = window_trajectory(fit);
    return fit;
}

ClosedFormEstimate estimate_closed_form(const ObservedSeries& series, long t) {
    if (t < 0 || t + 1 >= series.size())
        throw InputError("closed-form estimator needs t and t+1 inside the series");
    double h = series.h[t], h1 = series.h[t + 1];
    double e = series.e[t], e1 = series.e[t + 1];
    if (e <= 0 || h <= 0) throw InputError("closed-form estimator needs e(t) > 0 and h(t) > 0");
    ClosedFormEstimate out;
    out.beta_bar = (h1 - h) / (h * h) - (e1 - e) / (e * h);
    out.s_bar = e / (out.beta_bar * h);
    out.sign_warning = !(out.beta_bar > 0);
    return out;
}

std::string fit_result_to_json(const FitResult& fit, const ObservedSeries& series) {
    nlohmann::ordered_json j;
    j["method"] = to_string(fit.method);
    j["window"] = {{"start_date", format_date(series.date_at(fit.window.t_i))},
                   {"end_date", format_date(series.date_at(fit.window.t_c))}};
    j["params"] = {{"beta_bar", fit.params.beta_bar}, {"gamma", fit.params.gamma}};
    j["initial"] = {{"s_bar", fit.initial.s_bar}, {"h", fit.initial.h}};
    j["phi_star"] = fit.phi_star;
    j["solver"] = {{"iterations", fit.solver.iterations},
                   {"evaluations", fit.solver.evaluations},
                   {"converged", fit.solver.converged},
                   {"termination_reason", to_string(fit.solver.termination_reason)}};
    j["gamma_estimator"] = to_string(fit.gamma_estimator);
    return j.dump(2) + "\n";
}

}  // namespace shfit
