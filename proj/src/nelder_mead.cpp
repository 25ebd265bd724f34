#include "shfit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "shfit/errors.hpp"

namespace shfit {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::tolerance: return "tolerance";
        case Termination::max_iterations: return "max_iterations";
        default: return "max_evaluations";
    }
}

SolveReport nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                        const std::vector<double>& x0, const SimplexConfig& config) {
    const size_t n = x0.size();
    if (n < 1) throw InputError("nelder_mead: dimension must be >= 1");
    const long max_iter = config.max_iterations > 0 ? config.max_iterations : 200 * long(n);
    const long max_eval = config.max_evaluations > 0 ? config.max_evaluations : 200 * long(n);
    const double inf = std::numeric_limits<double>::infinity();

    long evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        double v = objective(x);
        return std::isfinite(v) ? v : inf;
    };

    {
        double f0 = objective(x0);
        if (!std::isfinite(f0)) throw InputError("nelder_mead: objective non-finite at x0");
    }

    // simplex: n+1 vertices; vertex 0 is x0, vertex k+1 perturbs coordinate k.
    std::vector<std::vector<double>> sim(n + 1, x0);
    std::vector<double> fsim(n + 1);
    for (size_t k = 0; k < n; ++k) {
        double& c = sim[k + 1][k];
        c = c != 0.0 ? 1.05 * c : 0.00025;
    }
    for (size_t i = 0; i <= n; ++i) fsim[i] = eval(sim[i]);

    auto order = [&] {
        std::vector<size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fsim[a] < fsim[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (size_t i = 0; i <= n; ++i) {
            s2[i] = std::move(sim[idx[i]]);
            f2[i] = fsim[idx[i]];
        }
        sim = std::move(s2);
        fsim = std::move(f2);
    };
    order();

    SolveReport rep;
    long iter = 0;
    const double rho = config.reflection, chi = config.expansion;
    const double psi = config.contraction, sigma = config.shrink;

    while (true) {
        // convergence: simplex spread AND function spread, both against vertex 0
        double xspread = 0, fspread = 0;
        for (size_t i = 1; i <= n; ++i) {
            for (size_t k = 0; k < n; ++k)
                xspread = std::max(xspread, std::abs(sim[i][k] - sim[0][k]));
            fspread = std::max(fspread, std::abs(fsim[i] - fsim[0]));
        }
        if (xspread <= config.x_tolerance && fspread <= config.f_tolerance) {
            rep.converged = true;
            rep.termination_reason = Termination::tolerance;
            break;
        }
        if (iter >= max_iter) {
            rep.termination_reason = Termination::max_iterations;
            break;
        }
        if (evals >= max_eval) {
            rep.termination_reason = Termination::max_evaluations;
            break;
        }

        // centroid of all vertices but the worst
        std::vector<double> xbar(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) xbar[k] += sim[i][k];
        for (size_t k = 0; k < n; ++k) xbar[k] /= double(n);

        auto affine = [&](double coef) {
            std::vector<double> x(n);
            for (size_t k = 0; k < n; ++k) x[k] = (1 + coef) * xbar[k] - coef * sim[n][k];
            return x;
        };

        std::vector<double> xr = affine(rho);
        double fr = eval(xr);
        bool shrink_step = false;

        if (fr < fsim[0]) {
            std::vector<double> xe = affine(rho * chi);
            double fe = eval(xe);
            if (fe < fr) {
                sim[n] = std::move(xe);
                fsim[n] = fe;
            } else {
                sim[n] = std::move(xr);
                fsim[n] = fr;
            }
        } else if (fr < fsim[n - 1]) {
            sim[n] = std::move(xr);
            fsim[n] = fr;
        } else if (fr < fsim[n]) {
            // outside contraction
            std::vector<double> xc = affine(psi * rho);
            double fc = eval(xc);
            if (fc <= fr) {
                sim[n] = std::move(xc);
                fsim[n] = fc;
            } else {
                shrink_step = true;
            }
        } else {
            // inside contraction
            std::vector<double> xcc(n);
            for (size_t k = 0; k < n; ++k) xcc[k] = (1 - psi) * xbar[k] + psi * sim[n][k];
            double fcc = eval(xcc);
            if (fcc < fsim[n]) {
                sim[n] = std::move(xcc);
                fsim[n] = fcc;
            } else {
                shrink_step = true;
            }
        }
        if (shrink_step) {
            for (size_t i = 1; i <= n; ++i) {
                for (size_t k = 0; k < n; ++k)
                    sim[i][k] = sim[0][k] + sigma * (sim[i][k] - sim[0][k]);
                fsim[i] = eval(sim[i]);
            }
        }
        order();
        ++iter;
        rep.best_history.push_back(fsim[0]);
    }

    rep.x_min = sim[0];
    rep.f_min = fsim[0];
    rep.iterations = iter;
    rep.evaluations = evals;
    return rep;
}

}  // namespace shfit
