#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <set>

using namespace shfit;
using testutil::rel_err;
using testutil::synthetic_series;

TEST_CASE("mape worked examples") {
    CHECK(mape({100, 200}, {100, 200}).value == 0.0);
    CHECK(mape({110}, {100}).value == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(mape({110, 90}, {100, 100}).value == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("mape excludes non-positive observations and reports the split") {
    auto r = mape({110, 50, 90}, {100, 0, 100});
    CHECK(r.value == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(r.used == 2);
    CHECK(r.excluded == 1);
    CHECK_THROWS_AS(mape({1, 2}, {0, 0}), InputError);
    CHECK_THROWS_AS(mape({1}, {1, 2}), InputError);
    CHECK_THROWS_AS(mape({}, {}), InputError);
}

TEST_CASE("mape is scale invariant") {
    std::vector<double> pred{110, 95, 130}, obs{100, 100, 120};
    double base = mape(pred, obs).value;
    for (auto& v : pred) v *= 7.5;
    for (auto& v : obs) v *= 7.5;
    CHECK(mape(pred, obs).value == doctest::Approx(base).epsilon(1e-12));
}

static FitResult exact_fit(const SHParams& p, const SHState& init, const ObservedSeries& obs,
                           Window w) {
    // a fit result pinned at the generator, bypassing the solver
    FitResult fit;
    fit.method = FitMethod::sequential;
    fit.gamma_estimator = GammaEstimator::ratio_of_means;
    fit.params = p;
    fit.initial = w.t_i == 0 ? init : simulate(init, p, w.t_i).states[w.t_i];
    fit.window = w;
    fit.phi_star = 0.0;
    fit.solver.converged = true;
    fit.solver.termination_reason = Termination::tolerance;
    fit.fitted = simulate(fit.initial, p, w.t_c - w.t_i);
    fit.fitted.start_index = w.t_i;
    (void)obs;
    return fit;
}

TEST_CASE("forecast from exact parameters reproduces the future to round-off") {
    SHParams p{1e-5, 0.08};
    SHState init{2e4, 50};
    auto obs = synthetic_series(p, init, 120, FlowDating::sampled);
    long pk = testutil::argmax_h(obs);
    Window w{pk - 7, pk + 6};
    auto fit = exact_fit(p, init, obs, w);

    auto fc = forecast(obs, fit, obs.size() - 1);
    REQUIRE(fc.predicted_h.size() == (size_t)(obs.size() - 1 - w.t_c));
    for (long t = w.t_c + 1; t < obs.size(); ++t)
        CHECK(rel_err(fc.predicted_h[t - w.t_c - 1], obs.h[t]) <= 1e-9);
    REQUIRE(fc.test_mape.has_value());
    CHECK(fc.test_mape->value <= 1e-9);
    CHECK(fc.train_mape.value <= 1e-9);
}

TEST_CASE("forecast after a real fit on noiseless data stays sharp") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 120, FlowDating::sampled);
    long pk = testutil::argmax_h(obs);
    FitOptions opt;
    opt.weights = LossWeights{1, 0, 0};
    auto fit = fit_sequential(obs, {pk - 7, pk + 6}, opt);
    auto fc = forecast(obs, fit, obs.size() - 1);
    REQUIRE(fc.test_mape.has_value());
    CHECK(fc.test_mape->value < 0.5);
}

TEST_CASE("forecast horizon rules") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 60, FlowDating::sampled);
    auto fit = exact_fit({1e-5, 0.08}, {2e4, 50}, obs, Window{40, 60});

    SUBCASE("horizon must extend past the training window") {
        CHECK_THROWS_AS(forecast(obs, fit, 60), InputError);
        CHECK_THROWS_AS(forecast(obs, fit, 50), InputError);
    }
    SUBCASE("beyond the series end there is nothing to score") {
        auto fc = forecast(obs, fit, 90);
        CHECK(fc.predicted_h.size() == 30);  // (t_c, 90] = days 61..90
        CHECK(!fc.test_mape.has_value());    // window already covered all observations
        CHECK(fc.horizon == 30);
    }
}

TEST_CASE("forecast surfaces divergence with a day number") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 60, FlowDating::sampled);
    auto fit = exact_fit({1e-5, 0.08}, {2e4, 50}, obs, Window{0, 20});
    fit.params.beta_bar = 1.0;  // explosive
    fit.initial = {1e8, 1e8};
    CHECK_THROWS_AS(forecast(obs, fit, 59), DivergenceError);
}

TEST_CASE("sweep window count follows the schedule formula") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 29, FlowDating::sampled);  // 30 days
    REQUIRE(obs.size() == 30);
    SweepOptions so;
    so.window_length = 14;
    so.fit.weights = LossWeights{1, 0, 0};

    so.stride = 1;  // last start = 30 - 14 - 1 = 15 -> 16 windows
    CHECK(backtest_sweep(obs, so).records.size() == 16);
    so.stride = 7;  // floor(15/7) + 1 = 3
    CHECK(backtest_sweep(obs, so).records.size() == 3);
    so.stride = 30;  // only the origin window
    CHECK(backtest_sweep(obs, so).records.size() == 1);
}

TEST_CASE("sweep windows are ordered, labelled, and always leave a test day") {
    auto obs = testutil::load_belgium();
    SweepOptions so;
    so.window_length = 14;
    so.stride = 7;
    auto rep = backtest_sweep(obs, so);
    REQUIRE(rep.records.size() >= 10);  // 123-day snapshot, stride 7
    long prev = -1;
    for (const auto& rec : rep.records) {
        CHECK(rec.fit.window.t_i == (prev == -1 ? 0 : prev + 7));
        prev = rec.fit.window.t_i;
        CHECK(rec.fit.window.length() == 14);
        CHECK(rec.fit.window.t_c < obs.size() - 1);
        if (rec.fit.solver.converged) {
            REQUIRE(rec.test_mape.has_value());
            CHECK(rec.test_mape->value >= 0.0);
        }
    }
}

TEST_CASE("parallel sweep is bit-identical to the serial one") {
    auto obs = testutil::load_belgium();
    SweepOptions so;
    so.window_length = 14;
    so.stride = 3;
    so.exec = Exec::serial;
    auto a = backtest_sweep(obs, so);
    so.exec = Exec::parallel;
    auto b = backtest_sweep(obs, so);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(backtest_to_csv(a, obs) == backtest_to_csv(b, obs));
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].fit.params.beta_bar == b.records[i].fit.params.beta_bar);
        CHECK(a.records[i].fit.phi_star == b.records[i].fit.phi_star);
    }
}

TEST_CASE("sweep failures are recorded, not dropped") {
    // two days of zeros inside one window make gamma estimation impossible there
    ObservedSeries obs;
    obs.start_date = Date(2020, 3, 1);
    obs.h.assign(20, 100.0);
    obs.e.assign(20, 8.0);
    obs.l.assign(20, 8.0);
    for (int t = 0; t < 6; ++t) obs.h[t] = obs.e[t] = obs.l[t] = 0.0;
    SweepOptions so;
    so.window_length = 5;
    so.stride = 1;
    auto rep = backtest_sweep(obs, so);
    CHECK(rep.records.size() == 15);  // (20 - 5 - 1) + 1
    CHECK(!rep.records.front().fit.solver.converged);
    bool any_ok = false;
    for (const auto& rec : rep.records) any_ok = any_ok || rec.fit.solver.converged;
    CHECK(any_ok);
}

TEST_CASE("backtest CSV carries the pinned header and blank missing fields") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 40, FlowDating::sampled);
    SweepOptions so;
    so.window_length = 10;
    so.stride = 10;
    so.fit.weights = LossWeights{1, 0, 0};
    auto rep = backtest_sweep(obs, so);
    std::string csv = backtest_to_csv(rep, obs);
    CHECK(csv.rfind("window_start,window_end,beta_bar,gamma,s_bar_0,h_0,phi_star,train_mape,"
                    "test_mape,converged\n",
                    0) == 0);
    auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == (long)rep.records.size() + 1);
    CHECK(csv.find("true") != std::string::npos);
}

TEST_CASE("contour grid localizes the minimum and masks the floor") {
    SHParams p{1e-5, 0.08};
    SHState init{2e4, 50};
    auto obs = synthetic_series(p, init, 120, FlowDating::step_completion);
    long pk = testutil::argmax_h(obs);
    Window w{pk - 7, pk + 6};
    auto lead = simulate(init, p, w.t_i);
    double s_true = lead.states[w.t_i].s_bar;

    ContourOptions co;
    co.weights = LossWeights{1, 1, 1};
    co.beta_axis = {};
    co.s_axis = {};
    for (int i = 0; i < 21; ++i) co.beta_axis.push_back(0.5e-5 + i * (1.5e-5 - 0.5e-5) / 20);
    for (int i = 0; i < 21; ++i) co.s_axis.push_back(0.5 * s_true + i * s_true / 20);
    auto grid = contour_grid(obs, w, co);

    REQUIRE(grid.values.size() == 21);
    REQUIRE(grid.values[0].size() == 21);
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0, bj = 0;
    long masked = 0;
    for (size_t i = 0; i < 21; ++i)
        for (size_t j = 0; j < 21; ++j) {
            if (grid.mask[i][j]) {
                ++masked;
                continue;
            }
            CHECK(std::isfinite(grid.values[i][j]));
            if (grid.values[i][j] < best) {
                best = grid.values[i][j];
                bi = i;
                bj = j;
            }
        }
    // the unmasked argmin sits within one cell of the generator
    CHECK(std::abs(grid.beta_axis[bi] - p.beta_bar) <= 1.1e-6 / 2 * 2);
    CHECK(std::abs(grid.s_axis[bj] - s_true) <= 1.1 * s_true / 20);
    CHECK(masked < 21 * 21 / 4);
    // every unmasked value exceeds the shifted floor
    for (size_t i = 0; i < 21; ++i)
        for (size_t j = 0; j < 21; ++j)
            if (!grid.mask[i][j]) CHECK(grid.values[i][j] >= std::log(0.01 * grid.phi_star) - 1e-9);
}

TEST_CASE("contour cells that overflow are masked, never NaN") {
    auto obs = synthetic_series({1e-5, 0.08}, {2e4, 50}, 60, FlowDating::step_completion);
    ContourOptions co;
    co.beta_axis = {1e-5, 1e10};
    co.s_axis = {1e4, 1e300};
    auto grid = contour_grid(obs, {10, 40}, co);
    bool any_masked = false;
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            if (grid.mask[i][j])
                any_masked = true;
            else
                CHECK(std::isfinite(grid.values[i][j]));
        }
    CHECK(any_masked);
}

TEST_CASE("contour respects a tighter external floor hint") {
    auto obs = testutil::load_belgium();
    Window w{20, 40};
    ContourOptions co;
    for (int i = 0; i < 5; ++i) co.beta_axis.push_back(5e-6 + i * 1e-6);
    for (int i = 0; i < 5; ++i) co.s_axis.push_back(5e3 + i * 2e3);
    auto plain = contour_grid(obs, w, co);
    co.phi_star_hint = plain.phi_star * 0.5;
    auto hinted = contour_grid(obs, w, co);
    CHECK(hinted.phi_star == plain.phi_star * 0.5);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j)
            if (!hinted.mask[i][j] && !plain.mask[i][j])
                CHECK(hinted.values[i][j] > plain.values[i][j]);
}

TEST_CASE("scaling all weights shifts contour values but not the argmin") {
    auto obs = testutil::load_belgium();
    Window w{20, 40};
    ContourOptions co;
    for (int i = 0; i < 9; ++i) co.beta_axis.push_back(4e-6 + i * 1e-6);
    for (int i = 0; i < 9; ++i) co.s_axis.push_back(4e3 + i * 2e3);
    auto a = contour_grid(obs, w, co);
    co.weights = LossWeights{3, 3, 3};
    auto b = contour_grid(obs, w, co);
    auto argmin = [](const ContourGrid& g) {
        std::pair<size_t, size_t> loc{0, 0};
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < g.values.size(); ++i)
            for (size_t j = 0; j < g.values[i].size(); ++j)
                if (!g.mask[i][j] && g.values[i][j] < best) {
                    best = g.values[i][j];
                    loc = {i, j};
                }
        return loc;
    };
    CHECK(argmin(a) == argmin(b));
    CHECK(rel_err(b.phi_star, 3 * a.phi_star) <= 1e-12);
}

TEST_CASE("contour grid runs identically in serial and parallel") {
    auto obs = testutil::load_belgium();
    Window w{15, 45};
    ContourOptions co;
    for (int i = 0; i < 17; ++i) co.beta_axis.push_back(2e-6 + i * 1e-6);
    for (int i = 0; i < 17; ++i) co.s_axis.push_back(2e3 + i * 1.5e3);
    co.exec = Exec::serial;
    auto a = contour_grid(obs, w, co);
    co.exec = Exec::parallel;
    auto b = contour_grid(obs, w, co);
    CHECK(a.phi_star == b.phi_star);
    CHECK(contour_to_csv(a) == contour_to_csv(b));
}

TEST_CASE("contour CSV layout: s axis across, beta axis down, masked cells empty") {
    ContourGrid g;
    g.beta_axis = {1e-6, 2e-6};
    g.s_axis = {100, 200};
    g.values = {{1.5, 2.5}, {3.5, 4.5}};
    g.mask = {{false, true}, {false, false}};
    g.phi_star = 1.0;
    std::string csv = contour_to_csv(g);
    CHECK(csv == ",100,200\n1e-06,1.5,\n2e-06,3.5,4.5\n");
}

TEST_CASE("axes must be strictly increasing and have at least two points") {
    auto obs = testutil::load_belgium();
    ContourOptions co;
    co.beta_axis = {1e-5};
    co.s_axis = {1e3, 2e3};
    CHECK_THROWS_AS(contour_grid(obs, {20, 40}, co), InputError);
    co.beta_axis = {2e-5, 1e-5};
    CHECK_THROWS_AS(contour_grid(obs, {20, 40}, co), InputError);
}
