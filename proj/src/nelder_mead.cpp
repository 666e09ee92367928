#include "slitdiff/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slitdiff
{
NelderMeadResult minimize_nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                                      std::vector<double> x0, const std::vector<double>& step,
                                      const std::vector<double>& lower, const std::vector<double>& upper,
                                      const NelderMeadOptions& options)
{
    const std::size_t dim = x0.size();
    if (dim == 0 || step.size() != dim || lower.size() != dim || upper.size() != dim)
        throw std::invalid_argument("nelder-mead: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(lower[i] <= upper[i]))
            throw std::invalid_argument("nelder-mead: lower bound above upper bound");

    auto project = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i)
            x[i] = std::clamp(x[i], lower[i], upper[i]);
    };

    project(x0);
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) {
        auto& vertex = simplex[i + 1];
        vertex[i] += step[i];
        // Step away from a bound the start point sits on.
        if (vertex[i] > upper[i])
            vertex[i] = x0[i] - step[i];
        project(vertex);
    }
    std::vector<double> values(dim + 1);
    for (std::size_t j = 0; j <= dim; ++j)
        values[j] = objective(simplex[j]);

    std::vector<std::size_t> order(dim + 1);
    auto affine = [&](const std::vector<double>& base, const std::vector<double>& toward, double t) {
        std::vector<double> p(dim);
        for (std::size_t i = 0; i < dim; ++i)
            p[i] = base[i] + t * (toward[i] - base[i]);
        project(p);
        return p;
    };

    NelderMeadResult result;
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        double extent = 0.0;
        for (std::size_t j = 0; j <= dim; ++j)
            for (std::size_t i = 0; i < dim; ++i)
                extent = std::max(extent, std::abs(simplex[j][i] - simplex[best][i]));
        if (values[worst] - values[best] <= options.f_tolerance && extent <= options.x_tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t j = 0; j <= dim; ++j) {
            if (j == worst)
                continue;
            for (std::size_t i = 0; i < dim; ++i)
                centroid[i] += simplex[j][i] / static_cast<double>(dim);
        }

        const auto reflected = affine(centroid, simplex[worst], -options.reflection);
        const double f_reflected = objective(reflected);
        if (f_reflected < values[best]) {
            const auto expanded = affine(centroid, simplex[worst], -options.reflection * options.expansion);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        const bool outside = f_reflected < values[worst];
        const auto contracted = outside ? affine(centroid, reflected, options.contraction)
                                        : affine(centroid, simplex[worst], options.contraction);
        const double f_contracted = objective(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }

        for (std::size_t j = 0; j <= dim; ++j) {
            if (j == best)
                continue;
            simplex[j] = affine(simplex[best], simplex[j], options.shrink);
            values[j] = objective(simplex[j]);
        }
    }

    const auto best = static_cast<std::size_t>(std::distance(values.begin(), std::min_element(values.begin(), values.end())));
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

} // namespace slitdiff
