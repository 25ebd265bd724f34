#pragma once
#include <functional>
#include <string>
#include <vector>

namespace shfit {

// Defaults match scipy.optimize.fmin: absolute tolerances 1e-4 on both the
// simplex spread and the function spread, caps of 200 x dimension, standard
// reflection/expansion/contraction/shrink coefficients.
struct SimplexConfig {
    double x_tolerance = 1e-4;
    double f_tolerance = 1e-4;
    long max_iterations = 0;   // 0 -> 200 * dimension
    long max_evaluations = 0;  // 0 -> 200 * dimension
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

enum class Termination { tolerance, max_iterations, max_evaluations };

struct SolveReport {
    std::vector<double> x_min;
    double f_min = 0;
    long iterations = 0;
    long evaluations = 0;
    bool converged = false;
    Termination termination_reason = Termination::tolerance;
    std::vector<double> best_history;  // best vertex value after each iteration
};

std::string to_string(Termination t);

// Initial simplex perturbs each coordinate by 5% of its value, 0.00025
// absolute when the coordinate is 0. Convergence needs BOTH tolerances.
// Non-finite objective values after initialization are treated as +infinity.
SolveReport nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                        const std::vector<double>& x0, const SimplexConfig& config = {});

}  // namespace shfit
