#pragma once
#include <optional>
#include <string>
#include <vector>

#include "shfit/estimation.hpp"
#include "shfit/exec.hpp"

namespace shfit {

struct MapeResult {
    double value = 0;
    long used = 0;
    long excluded = 0;  // observations <= 0, left out of the mean
};

// 100/n' * sum |pred - obs| / obs over the n' observations > 0.
MapeResult mape(const std::vector<double>& predicted, const std::vector<double>& observed);

struct ForecastResult {
    FitResult fit;
    long horizon = 0;                    // days past t_c
    std::vector<double> predicted_h;     // over [t_c+1, t_c+horizon]
    std::vector<double> predicted_s_bar; // same span
    MapeResult train_mape;
    std::optional<MapeResult> test_mape; // absent when no observed day is held out
};

// Simulate from the fitted initial state at t_i through `until` (a day index,
// may lie beyond the series end). Throws DivergenceError on overflow.
ForecastResult forecast(const ObservedSeries& series, const FitResult& fit, long until);

struct BacktestRecord {
    Window window;
    FitResult fit;
    MapeResult train_mape;
    std::optional<MapeResult> test_mape;
};

struct BacktestReport {
    long window_length = 14;
    long stride = 1;
    std::vector<BacktestRecord> records;  // in window order
};

struct SweepOptions {
    long window_length = 14;
    long stride = 1;
    FitOptions fit{};
    FitMethod method = FitMethod::sequential;
    Exec exec = Exec::serial;
};

// Slide windows of window_length by stride; fit each, forecast to the series
// end, record estimands and MAPEs. Failed windows are recorded (converged =
// false), never dropped.
BacktestReport backtest_sweep(const ObservedSeries& series, const SweepOptions& options);

struct ContourGrid {
    std::vector<double> beta_axis, s_axis;
    std::vector<std::vector<double>> values;  // [i_beta][j_s], log(phi - 0.99 phi*)
    std::vector<std::vector<bool>> mask;      // true -> cell masked
    double phi_star = 0;
};

struct ContourOptions {
    std::vector<double> beta_axis, s_axis;
    LossWeights weights{};
    GammaEstimator gamma_estimator = GammaEstimator::ratio_of_means;
    std::optional<double> phi_star_hint;  // e.g. a fit's phi*
    double shift_factor = 0.99;
    Exec exec = Exec::serial;
};

// Evaluate phi over the grid with gamma and h0 pre-estimated as in the
// sequential path; emit log(phi - factor*phi*), masking cells where
// phi <= factor*phi* or phi is non-finite.
ContourGrid contour_grid(const ObservedSeries& series, const Window& window,
                         const ContourOptions& options);

// CSV: first row the s-axis, first column the beta-axis, masked cells empty.
std::string contour_to_csv(const ContourGrid& grid);

// Flat CSV: window_start,window_end,beta_bar,gamma,s_bar_0,h_0,phi_star,
// train_mape,test_mape,converged. Dates ISO; absent test MAPE is empty.
std::string backtest_to_csv(const BacktestReport& report, const ObservedSeries& series);
std::string backtest_to_json(const BacktestReport& report, const ObservedSeries& series);

std::string forecast_to_json(const ForecastResult& fc, const ObservedSeries& series);

// Forecast series CSV `date,H_observed,H_model,phase`, phase in
// {train, test, beyond}; H_observed empty on `beyond` rows.
std::string forecast_to_csv(const ForecastResult& fc, const ObservedSeries& series);

}  // namespace shfit
