// shfit: fit / forecast / backtest / contour / simulate for the SH model.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shfit/backtest.hpp"
#include "shfit/data.hpp"
#include "shfit/errors.hpp"
#include "shfit/estimation.hpp"
#include "shfit/model.hpp"

namespace fs = std::filesystem;
using namespace shfit;

namespace {

// Inputs the CLI can ingest. belgium/france are raw national files and get the
// full parse -> aggregate -> reconcile pipeline; series/trajectory are this
// tool's own exports and are trusted as-is (reconciling a trajectory would
// rewrite its sampled flows).
enum class InputSchema { belgium, france, series, trajectory };

ObservedSeries load_series(const std::string& path, InputSchema schema) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    switch (schema) {
        case InputSchema::belgium: {
            auto series = aggregate_national(parse_belgium_csv(in));
            return reconcile_flows(series, Schema::belgium);
        }
        case InputSchema::france: {
            auto series = aggregate_national(parse_france_csv(in));
            return reconcile_flows(series, Schema::france);
        }
        case InputSchema::series:
            return series_from_csv(in, path);
        default: {
            Trajectory traj = trajectory_from_csv(in);
            // day k maps to a nominal calendar starting 2020-01-01
            return observed_from_trajectory(traj, Date(2020, 1, 1).plus_days(traj.start_index),
                                            FlowDating::sampled);
        }
    }
}

// An ISO date or a plain day index. Dates may lie outside the series (the
// forecast horizon usually does); window bounds are range-checked later.
long resolve_day(const std::string& value, const ObservedSeries& series, const char* what) {
    if (value.find('-') != std::string::npos) {
        try {
            return parse_date(value) - series.start_date;
        } catch (const InputError&) {
            throw InputError(std::string(what) + ": bad value '" + value + "'");
        }
    }
    try {
        size_t pos = 0;
        long idx = std::stol(value, &pos);
        if (pos != value.size()) throw InputError("trailing junk");
        return idx;
    } catch (const std::exception&) {
        throw InputError(std::string(what) + ": bad value '" + value + "'");
    }
}

std::vector<double> parse_axis(const std::string& spec, const char* what) {
    double lo, hi;
    long n;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ',' || c2 != ',' || ss.rdbuf()->in_avail() > 0)
        throw InputError(std::string(what) + ": want min,max,n");
    if (n < 2 || hi <= lo) throw InputError(std::string(what) + ": need n >= 2 and max > min");
    std::vector<double> axis(n);
    for (long i = 0; i < n; ++i) axis[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return axis;
}

LossWeights parse_weights(const std::string& spec) {
    LossWeights w;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> w.c_h >> c1 >> w.c_e >> c2 >> w.c_l) || c1 != ',' || c2 != ',')
        throw InputError("--weights: want cH,cE,cL");
    if (w.c_h < 0 || w.c_e < 0 || w.c_l < 0 || (w.c_h == 0 && w.c_e == 0 && w.c_l == 0))
        throw InputError("--weights: weights must be >= 0 with at least one > 0");
    return w;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
}

struct CommonArgs {
    std::string input, schema = "belgium", train_start, train_end;
    std::string weights = "1,1,1", method = "sequential", gamma_estimator = "ratio-of-means";
    std::string guess = "1e-5,1e4", out_dir = ".";
};

InputSchema schema_of(const std::string& s) {
    if (s == "belgium") return InputSchema::belgium;
    if (s == "france") return InputSchema::france;
    if (s == "series") return InputSchema::series;
    if (s == "trajectory") return InputSchema::trajectory;
    throw InputError("--schema: unknown value '" + s + "'");
}

FitOptions fit_options(const CommonArgs& a) {
    FitOptions o;
    o.weights = parse_weights(a.weights);
    if (a.gamma_estimator == "ratio-of-means")
        o.gamma_estimator = GammaEstimator::ratio_of_means;
    else if (a.gamma_estimator == "least-squares")
        o.gamma_estimator = GammaEstimator::least_squares;
    else
        throw InputError("--gamma-estimator: unknown value '" + a.gamma_estimator + "'");
    char c;
    std::istringstream ss(a.guess);
    if (!(ss >> o.guess_beta >> c >> o.guess_s_bar) || c != ',')
        throw InputError("--guess: want beta,sbar");
    return o;
}

Window resolve_window(const CommonArgs& a, const ObservedSeries& series) {
    Window w;
    w.t_i = a.train_start.empty() ? 0 : resolve_day(a.train_start, series, "--train-start");
    w.t_c = a.train_end.empty() ? series.size() - 1 : resolve_day(a.train_end, series, "--train-end");
    w.validate(series);
    return w;
}

FitResult run_fit(const CommonArgs& a, const ObservedSeries& series, const Window& window) {
    FitOptions opts = fit_options(a);
    if (a.method == "sequential") return fit_sequential(series, window, opts);
    if (a.method == "joint4d") return fit_joint4d(series, window, opts);
    throw InputError("--method: unknown value '" + a.method + "'");
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_window = true) {
    cmd->add_option("--input", a.input, "input CSV path")->required();
    cmd->add_option("--schema", a.schema, "belgium|france|series|trajectory");
    if (with_window) {
        cmd->add_option("--train-start", a.train_start, "window start (ISO date or day index)");
        cmd->add_option("--train-end", a.train_end, "window end (ISO date or day index)");
    }
    cmd->add_option("--weights", a.weights, "objective weights cH,cE,cL");
    cmd->add_option("--method", a.method, "sequential|joint4d");
    cmd->add_option("--gamma-estimator", a.gamma_estimator, "ratio-of-means|least-squares");
    cmd->add_option("--guess", a.guess, "initial guess beta,sbar");
    cmd->add_option("--out-dir", a.out_dir, "output directory");
}

int cmd_fit(const CommonArgs& a) {
    ObservedSeries series = load_series(a.input, schema_of(a.schema));
    Window window = resolve_window(a, series);
    FitResult fit = run_fit(a, series, window);

    std::vector<double> pred, obs;
    for (long t = window.t_i; t <= window.t_c; ++t) {
        pred.push_back(fit.fitted.states[t - window.t_i].h);
        obs.push_back(series.h[t]);
    }
    MapeResult m = mape(pred, obs);

    fs::create_directories(a.out_dir);
    write_file(fs::path(a.out_dir) / "fit.json", fit_result_to_json(fit, series));
    std::string csv = "date,H_observed,H_model\n";
    for (long t = window.t_i; t <= window.t_c; ++t) {
        csv += format_date(series.date_at(t)) + ',' + format_double(series.h[t]) + ',' +
               format_double(fit.fitted.states[t - window.t_i].h) + '\n';
    }
    write_file(fs::path(a.out_dir) / "fit_series.csv", csv);
    std::cout << "fit MAPE " << format_double(m.value) << " (" << m.used << " days, "
              << m.excluded << " zero-valued excluded)\n";
    return fit.solver.converged ? 0 : 2;
}

int cmd_forecast(const CommonArgs& a, const std::string& horizon_end) {
    ObservedSeries series = load_series(a.input, schema_of(a.schema));
    Window window = resolve_window(a, series);
    if (horizon_end.empty()) throw InputError("--horizon-end is required");
    long until = resolve_day(horizon_end, series, "--horizon-end");
    if (until <= window.t_c) throw InputError("--horizon-end must lie past the train window");

    FitResult fit = run_fit(a, series, window);
    ForecastResult fc = forecast(series, fit, until);

    fs::create_directories(a.out_dir);
    write_file(fs::path(a.out_dir) / "forecast.json", forecast_to_json(fc, series));
    write_file(fs::path(a.out_dir) / "forecast_series.csv", forecast_to_csv(fc, series));
    if (fc.test_mape)
        std::cout << "test MAPE " << format_double(fc.test_mape->value) << " ("
                  << fc.test_mape->used << " days, " << fc.test_mape->excluded
                  << " zero-valued excluded)\n";
    else
        std::cout << "no held-out observations; train MAPE " << format_double(fc.train_mape.value)
                  << "\n";
    return fit.solver.converged ? 0 : 2;
}

int cmd_backtest(const CommonArgs& a, long window_length, long stride) {
    ObservedSeries series = load_series(a.input, schema_of(a.schema));
    if (stride > series.size())
        throw InputError("--stride exceeds the series length");
    SweepOptions opts;
    opts.window_length = window_length;
    opts.stride = stride;
    opts.fit = fit_options(a);
    if (a.method == "joint4d")
        opts.method = FitMethod::joint4d;
    else if (a.method != "sequential")
        throw InputError("--method: unknown value '" + a.method + "'");
    opts.exec = Exec::parallel;

    BacktestReport report = backtest_sweep(series, opts);
    fs::create_directories(a.out_dir);
    write_file(fs::path(a.out_dir) / "backtest.json", backtest_to_json(report, series));
    write_file(fs::path(a.out_dir) / "backtest.csv", backtest_to_csv(report, series));
    long converged = 0;
    for (const auto& r : report.records) converged += r.fit.solver.converged;
    std::cout << report.records.size() << " windows, " << converged << " converged\n";
    return converged > 0 ? 0 : 2;
}

int cmd_contour(const CommonArgs& a, const std::string& grid_beta, const std::string& grid_s) {
    ObservedSeries series = load_series(a.input, schema_of(a.schema));
    Window window = resolve_window(a, series);
    ContourOptions opts;
    opts.beta_axis = parse_axis(grid_beta, "--grid-beta");
    opts.s_axis = parse_axis(grid_s, "--grid-s");
    opts.weights = parse_weights(a.weights);
    opts.gamma_estimator = fit_options(a).gamma_estimator;
    opts.exec = Exec::parallel;

    ContourGrid grid = contour_grid(series, window, opts);
    fs::create_directories(a.out_dir);
    write_file(fs::path(a.out_dir) / "contour.csv", contour_to_csv(grid));
    bool any = false;
    for (const auto& row : grid.mask)
        for (bool m : row) any |= !m;
    if (!any) std::cerr << "warning: every grid cell is masked (phi overflowed everywhere)\n";
    return 0;
}

int cmd_simulate(double beta, double gamma, double sbar0, double h0, long days,
                 const std::string& out_dir) {
    Trajectory traj = simulate({sbar0, h0}, {beta, gamma}, days);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "trajectory.csv", trajectory_to_csv(traj));
    std::cout << "simulated " << days << " days\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SH hospitalization model: fit, forecast, backtest"};
    app.require_subcommand(1);

    CommonArgs fit_args, fc_args, bt_args, ct_args;
    std::string horizon_end, grid_beta = "1e-6,2e-5,41", grid_s = "1e3,3e4,41";
    long window_length = 14, stride = 7;
    double sim_beta = 0, sim_gamma = 0, sim_sbar0 = 0, sim_h0 = 0;
    long sim_days = 0;
    std::string sim_out = ".";

    auto* fit = app.add_subcommand("fit", "fit the model on a train window");
    add_common(fit, fit_args);

    auto* fc = app.add_subcommand("forecast", "fit, then forecast past the window");
    add_common(fc, fc_args);
    fc->add_option("--horizon-end", horizon_end, "forecast end (ISO date or day index)");

    auto* bt = app.add_subcommand("backtest", "sliding-window sweep");
    add_common(bt, bt_args, false);
    bt->add_option("--window-length", window_length, "train window length in days");
    bt->add_option("--stride", stride, "window start step in days");

    auto* ct = app.add_subcommand("contour", "objective landscape grid");
    add_common(ct, ct_args);
    ct->add_option("--grid-beta", grid_beta, "beta axis min,max,n");
    ct->add_option("--grid-s", grid_s, "s axis min,max,n");

    auto* sim = app.add_subcommand("simulate", "integrate the model, write a trajectory CSV");
    sim->add_option("--beta", sim_beta, "beta_bar")->required();
    sim->add_option("--gamma", sim_gamma, "gamma")->required();
    sim->add_option("--sbar0", sim_sbar0, "initial scaled susceptibles")->required();
    sim->add_option("--h0", sim_h0, "initial hospital census")->required();
    sim->add_option("--days", sim_days, "number of days to integrate")->required();
    sim->add_option("--out-dir", sim_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; every usage problem is an input error (1)
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_args);
        if (fc->parsed()) return cmd_forecast(fc_args, horizon_end);
        if (bt->parsed()) return cmd_backtest(bt_args, window_length, stride);
        if (ct->parsed()) return cmd_contour(ct_args, grid_beta, grid_s);
        if (sim->parsed()) return cmd_simulate(sim_beta, sim_gamma, sim_sbar0, sim_h0, sim_days, sim_out);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
