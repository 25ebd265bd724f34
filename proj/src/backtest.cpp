#include "shfit/backtest.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "shfit/errors.hpp"

namespace shfit {

MapeResult mape(const std::vector<double>& predicted, const std::vector<double>& observed) {
    if (predicted.size() != observed.size() || predicted.empty())
        throw InputError("mape: arrays must have equal length >= 1");
    MapeResult r;
    double acc = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (observed[i] > 0) {
            acc += std::abs(predicted[i] - observed[i]) / observed[i];
            ++r.used;
        } else {
            ++r.excluded;
        }
    }
    if (r.used == 0) throw InputError("mape: all observations are zero, metric undefined");
    r.value = 100.0 * acc / double(r.used);
    return r;
}

ForecastResult forecast(const ObservedSeries& series, const FitResult& fit, long until) {
    if (until <= fit.window.t_c)
        throw InputError("forecast: until must exceed the window end");
    long t_i = fit.window.t_i, t_c = fit.window.t_c;
    Trajectory traj = simulate(fit.initial, fit.params, until - t_i, t_i);

    ForecastResult out;
    out.fit = fit;
    out.horizon = until - t_c;
    for (long t = t_c + 1; t <= until; ++t) {
        out.predicted_h.push_back(traj.states[t - t_i].h);
        out.predicted_s_bar.push_back(traj.states[t - t_i].s_bar);
    }

    std::vector<double> train_pred, train_obs;
    for (long t = t_i; t <= t_c; ++t) {
        train_pred.push_back(traj.states[t - t_i].h);
        train_obs.push_back(series.h[t]);
    }
    out.train_mape = mape(train_pred, train_obs);

    long test_end = std::min(until, series.size() - 1);
    if (test_end > t_c) {
        std::vector<double> test_pred, test_obs;
        for (long t = t_c + 1; t <= test_end; ++t) {
            test_pred.push_back(traj.states[t - t_i].h);
            test_obs.push_back(series.h[t]);
        }
        out.test_mape = mape(test_pred, test_obs);
    }
    return out;
}

namespace {

template <typename F>
void run_indexed(long n, Exec exec, F&& body) {
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) body(i);
        return;
#endif
    }
    for (long i = 0; i < n; ++i) body(i);
}

}  // namespace

BacktestReport backtest_sweep(const ObservedSeries& series, const SweepOptions& options) {
    const long T = series.size();
    const long w = options.window_length;
    if (w < 2) throw InputError("backtest_sweep: window_length must be >= 2");
    if (options.stride < 1) throw InputError("backtest_sweep: stride must be >= 1");
    // last admissible start leaves at least one test day: t_c = t_i + w - 1 <= T - 2
    const long last_start = T - w - 1;
    if (last_start < 0) throw InputError("backtest_sweep: series too short for any window");
    const long n = last_start / options.stride + 1;

    BacktestReport report;
    report.window_length = w;
    report.stride = options.stride;
    report.records.resize(n);

    run_indexed(n, options.exec, [&](long i) {
        Window win{i * options.stride, i * options.stride + w - 1};
        BacktestRecord rec;
        rec.window = win;
        rec.fit.window = win;
        try {
            rec.fit = options.method == FitMethod::joint4d
                          ? fit_joint4d(series, win, options.fit)
                          : fit_sequential(series, win, options.fit);
            ForecastResult fc = forecast(series, rec.fit, T - 1);
            rec.train_mape = fc.train_mape;
            rec.test_mape = fc.test_mape;
        } catch (const std::exception&) {
            // degenerate window or divergent forecast: flag, keep the record
            rec.fit.solver.converged = false;
        }
        report.records[i] = std::move(rec);
    });
    return report;
}

ContourGrid contour_grid(const ObservedSeries& series, const Window& window,
                         const ContourOptions& options) {
    window.validate(series);
    if (options.beta_axis.size() < 2 || options.s_axis.size() < 2)
        throw InputError("contour_grid: axes need at least 2 points");
    for (size_t i = 1; i < options.beta_axis.size(); ++i)
        if (options.beta_axis[i] <= options.beta_axis[i - 1])
            throw InputError("contour_grid: beta axis must be strictly increasing");
    for (size_t i = 1; i < options.s_axis.size(); ++i)
        if (options.s_axis[i] <= options.s_axis[i - 1])
            throw InputError("contour_grid: s axis must be strictly increasing");

    const double gamma = options.gamma_estimator == GammaEstimator::ratio_of_means
                             ? estimate_gamma_ratio_of_means(series, window)
                             : estimate_gamma_least_squares(series, window);
    const double h0 = estimate_h0(series, window);

    const long nb = long(options.beta_axis.size()), ns = long(options.s_axis.size());
    std::vector<std::vector<double>> phi(nb, std::vector<double>(ns));
    run_indexed(nb * ns, options.exec, [&](long idx) {
        long i = idx / ns, j = idx % ns;
        phi[i][j] = objective_phi(options.beta_axis[i], options.s_axis[j], gamma, h0, series,
                                  window, options.weights);
    });

    double phi_star = std::numeric_limits<double>::infinity();
    for (const auto& row : phi)
        for (double v : row)
            if (std::isfinite(v)) phi_star = std::min(phi_star, v);
    if (options.phi_star_hint && std::isfinite(*options.phi_star_hint))
        phi_star = std::min(phi_star, *options.phi_star_hint);

    ContourGrid grid;
    grid.beta_axis = options.beta_axis;
    grid.s_axis = options.s_axis;
    grid.phi_star = phi_star;
    grid.values.assign(nb, std::vector<double>(ns, 0.0));
    grid.mask.assign(nb, std::vector<bool>(ns, true));
    if (!std::isfinite(phi_star)) return grid;  // every cell overflowed: all masked

    const double shift = options.shift_factor * phi_star;
    for (long i = 0; i < nb; ++i)
        for (long j = 0; j < ns; ++j) {
            double p = phi[i][j];
            if (!std::isfinite(p) || p <= shift) continue;
            grid.values[i][j] = std::log(p - shift);
            grid.mask[i][j] = false;
        }
    return grid;
}

std::string contour_to_csv(const ContourGrid& grid) {
    std::string out;
    for (double s : grid.s_axis) {
        out += ',';
        out += format_double(s);
    }
    out += '\n';
    for (size_t i = 0; i < grid.beta_axis.size(); ++i) {
        out += format_double(grid.beta_axis[i]);
        for (size_t j = 0; j < grid.s_axis.size(); ++j) {
            out += ',';
            if (!grid.mask[i][j]) out += format_double(grid.values[i][j]);
        }
        out += '\n';
    }
    return out;
}

std::string backtest_to_csv(const BacktestReport& report, const ObservedSeries& series) {
    std::string out =
        "window_start,window_end,beta_bar,gamma,s_bar_0,h_0,phi_star,train_mape,test_mape,"
        "converged\n";
    for (const auto& r : report.records) {
        out += format_date(series.date_at(r.window.t_i));
        out += ',';
        out += format_date(series.date_at(r.window.t_c));
        out += ',';
        out += format_double(r.fit.params.beta_bar);
        out += ',';
        out += format_double(r.fit.params.gamma);
        out += ',';
        out += format_double(r.fit.initial.s_bar);
        out += ',';
        out += format_double(r.fit.initial.h);
        out += ',';
        out += format_double(r.fit.phi_star);
        out += ',';
        out += format_double(r.train_mape.value);
        out += ',';
        if (r.test_mape) out += format_double(r.test_mape->value);
        out += ',';
        out += r.fit.solver.converged ? "true" : "false";
        out += '\n';
    }
    return out;
}

namespace {

nlohmann::ordered_json mape_json(const MapeResult& m) {
    return {{"value", m.value}, {"used", m.used}, {"excluded", m.excluded}};
}

nlohmann::ordered_json record_json(const BacktestRecord& r, const ObservedSeries& series) {
    nlohmann::ordered_json j;
    j["window"] = {{"start_date", format_date(series.date_at(r.window.t_i))},
                   {"end_date", format_date(series.date_at(r.window.t_c))}};
    j["params"] = {{"beta_bar", r.fit.params.beta_bar}, {"gamma", r.fit.params.gamma}};
    j["initial"] = {{"s_bar", r.fit.initial.s_bar}, {"h", r.fit.initial.h}};
    j["phi_star"] = r.fit.phi_star;
    j["train_mape"] = mape_json(r.train_mape);
    j["test_mape"] = r.test_mape ? mape_json(*r.test_mape) : nlohmann::ordered_json(nullptr);
    j["converged"] = r.fit.solver.converged;
    return j;
}

}  // namespace

std::string backtest_to_json(const BacktestReport& report, const ObservedSeries& series) {
    nlohmann::ordered_json j;
    j["window_length"] = report.window_length;
    j["stride"] = report.stride;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : report.records) j["records"].push_back(record_json(r, series));
    return j.dump(2) + "\n";
}

std::string forecast_to_json(const ForecastResult& fc, const ObservedSeries& series) {
    nlohmann::ordered_json j;
    j["fit"] = nlohmann::ordered_json::parse(fit_result_to_json(fc.fit, series));
    j["horizon"] = fc.horizon;
    j["horizon_end"] = format_date(series.date_at(fc.fit.window.t_c + fc.horizon));
    j["train_mape"] = mape_json(fc.train_mape);
    j["test_mape"] = fc.test_mape ? mape_json(*fc.test_mape) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string forecast_to_csv(const ForecastResult& fc, const ObservedSeries& series) {
    std::string out = "date,H_observed,H_model,phase\n";
    long t_i = fc.fit.window.t_i, t_c = fc.fit.window.t_c;
    for (long t = t_i; t <= t_c + fc.horizon; ++t) {
        out += format_date(series.date_at(t));
        out += ',';
        const char* phase;
        double model;
        if (t <= t_c) {
            phase = "train";
            model = fc.fit.fitted.states[t - t_i].h;
        } else {
            model = fc.predicted_h[t - t_c - 1];
            phase = t < series.size() ? "test" : "beyond";
        }
        if (t < series.size()) out += format_double(series.h[t]);
        out += ',';
        out += format_double(model);
        out += ',';
        out += phase;
        out += '\n';
    }
    return out;
}

}  // namespace shfit
