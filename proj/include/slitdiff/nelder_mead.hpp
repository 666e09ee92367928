#pragma once

#include <functional>
#include <vector>

namespace slitdiff
{
struct NelderMeadOptions
{
    int max_iterations = 1000;
    // Stop when the spread of objective values and the simplex extent both fall below these.
    double f_tolerance = 1e-14;
    double x_tolerance = 1e-10;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult
{
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free minimization inside the box [lower, upper]. Trial points
// are projected onto the box. The initial simplex is x0 plus one step per
// coordinate; the run is deterministic.
NelderMeadResult minimize_nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                                      std::vector<double> x0, const std::vector<double>& step,
                                      const std::vector<double>& lower, const std::vector<double>& upper,
                                      const NelderMeadOptions& options = {});

} // namespace slitdiff
