#include "approx.hpp"

#include "slitdiff/experiment.hpp"
#include "slitdiff/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace slitdiff;

namespace
{
const ModelParameters nominal = reference_parameters();

IntensityCurve reference_curve(IntensityModel model, double step = 1e-5)
{
    return scan_curve(model, nominal, beta_grid(-0.01, 0.01, step), {}, Normalization::peak_one);
}

// Every tenth sample of the curve.
ExperimentDataset thinned(const IntensityCurve& curve, double scale = 1.0)
{
    std::vector<DataPoint> pts;
    for (std::size_t i = 0; i < curve.size(); i += 10)
        pts.push_back({curve.samples()[i].sin_beta, scale * curve.samples()[i].intensity});
    return ExperimentDataset(pts, "thinned");
}
} // namespace

TEST_CASE("load a small table")
{
    std::istringstream in("0,4.0\n0.001,3.1\n0.002,1.2");
    const auto d = load_dataset(in);
    REQUIRE(d.points().size() == 3);
    CHECK(d.points()[0].sin_beta == 0.0);
    CHECK(d.points()[2].intensity == 1.2);

    std::istringstream messy("sin_beta;intensity\n# digitized\n0.002;1.2\n\n-0.001;3.1\n0.0\t4\n");
    const auto m = load_dataset(messy, "fig3");
    REQUIRE(m.points().size() == 3);
    CHECK(m.points()[0].sin_beta == -0.001);
    CHECK(m.points()[1].sin_beta == 0.0);
    CHECK(m.label() == "fig3");
}

TEST_CASE("malformed tables")
{
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            load_dataset(in, "data.csv");
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string{};
    };
    CHECK(message("0,1\n0.1,2\n0.2,abc\n0.3,1\n").find("data.csv:3") != std::string::npos);
    CHECK(message("0,1\n0.1,2,3\n0.2,1\n").find("data.csv:2") != std::string::npos);
    CHECK(message("0,1\n0.1,2\n") != "");
    CHECK(message("0,1\n0.1,-2\n0.2,1\n") != "");
    CHECK(message("0,1\n0.1,2\n0.1,1\n") != "");
    CHECK_THROWS_AS(load_dataset(std::filesystem::path("/nonexistent/fig3.csv")), DataError);
    try {
        load_dataset(std::filesystem::path("/nonexistent/fig3.csv"));
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/fig3.csv") != std::string::npos);
    }
}

TEST_CASE("compare against the generating curve")
{
    const auto curve = reference_curve(IntensityModel::quantum_decoherent);
    const auto r = compare(curve, synthesize_dataset(curve));
    CHECK(r.rmse < 1e-15);
    CHECK(r.max_abs_residual < 1e-15);
    CHECK(r.points == curve.size());
}

TEST_CASE("constant offset residuals")
{
    const auto curve = reference_curve(IntensityModel::quantum_decoherent);
    std::vector<DataPoint> pts;
    for (std::size_t i = 0; i < curve.size(); i += 7)
        pts.push_back({curve.samples()[i].sin_beta, curve.samples()[i].intensity + 0.1});
    const auto r = compare(curve, ExperimentDataset(pts, "offset"));

    double peak = 0.0;
    for (const auto& p : pts)
        peak = std::max(peak, p.intensity);
    double sum = 0.0;
    double worst = 0.0;
    for (const auto& p : pts) {
        const double model = p.intensity - 0.1;
        const double res = p.intensity / peak - model;
        sum += res * res;
        worst = std::max(worst, std::abs(res));
    }
    CHECK(r.rmse == rel(std::sqrt(sum / pts.size()), 1e-12));
    CHECK(r.max_abs_residual == rel(worst, 1e-12));
    CHECK(r.rmse <= r.max_abs_residual);
}

TEST_CASE("classical curve misses the lifted minima")
{
    const auto quantum = reference_curve(IntensityModel::quantum_decoherent);
    const auto classical = reference_curve(IntensityModel::classical);
    const auto data = thinned(quantum);
    const auto rq = compare(quantum, data);
    const auto rc = compare(classical, data);
    CHECK(rc.rmse > 100 * rq.rmse);
    const auto v = fringe_visibility(quantum);
    CHECK(rc.max_abs_residual >= v.i_min * 0.9);
}

TEST_CASE("normalization order does not matter")
{
    const auto raw = scan_curve(IntensityModel::quantum_decoherent, nominal, beta_grid(-0.01, 0.01, 1e-5), {},
                                Normalization::raw);
    std::vector<DataPoint> pts;
    for (double s = -0.0099; s < 0.0099; s += 3.3e-5)
        pts.push_back({s, 7.0 * raw.at(s) * (1.0 + 0.05 * std::sin(1e3 * s))});
    const ExperimentDataset data(pts, "wavy");

    // interpolate the raw curve first, normalize afterwards
    double model_peak = raw.peak();
    double data_peak = 0.0;
    for (const auto& p : pts)
        data_peak = std::max(data_peak, p.intensity);
    double sum = 0.0;
    for (const auto& p : pts) {
        const double res = p.intensity / data_peak - raw.at(p.sin_beta) / model_peak;
        sum += res * res;
    }
    const double after = std::sqrt(sum / pts.size());
    CHECK(std::abs(compare(raw, data).rmse - after) < 1e-9);
    CHECK(std::abs(compare(raw.normalized(), data).rmse - after) < 1e-9);
}

TEST_CASE("compare rejects data outside the curve")
{
    const auto curve = scan_curve(IntensityModel::classical, nominal, beta_grid(-1e-3, 1e-3, 1e-5), {},
                                  Normalization::peak_one);
    const ExperimentDataset wide({{-2e-3, 0.1}, {0.0, 1.0}, {1e-3, 0.2}}, "wide");
    CHECK_THROWS_AS(compare(curve, wide), DataError);
}

TEST_CASE("fit parameter names")
{
    CHECK(parse_fit_parameter("lambda_t") == FitParameter::coherence_lambda);
    CHECK(parse_fit_parameter("coherence_lambda") == FitParameter::coherence_lambda);
    CHECK(parse_fit_parameter("A1") == FitParameter::amplitude_a1);
    CHECK(parse_fit_parameter("amplitude_a2") == FitParameter::amplitude_a2);
    CHECK(parse_fit_parameter("c2") == FitParameter::weight_c2);
    CHECK_THROWS_AS(parse_fit_parameter("d"), ConfigError);
}

TEST_CASE("identifiability")
{
    using enum FitParameter;
    const std::vector<FitParameter> lam{coherence_lambda};
    CHECK(classify_identifiability(IntensityModel::quantum_decoherent, lam).at("lambda_t") ==
          Identifiability::identifiable);
    CHECK(classify_identifiability(IntensityModel::quantum_coherent, lam).at("lambda_t") ==
          Identifiability::unidentifiable);
    CHECK(classify_identifiability(IntensityModel::classical, lam).at("lambda_t") == Identifiability::unidentifiable);

    const std::vector<FitParameter> a1{amplitude_a1};
    CHECK(classify_identifiability(IntensityModel::quantum_decoherent, a1).at("A1") == Identifiability::ratio_only);
    const std::vector<FitParameter> both{amplitude_a1, amplitude_a2};
    const auto r = classify_identifiability(IntensityModel::quantum_decoherent, both);
    CHECK(r.at("A1") == Identifiability::unidentifiable);
    CHECK(r.at("A2") == Identifiability::unidentifiable);
}

TEST_CASE("fit recovers the coherence degree")
{
    const auto data = thinned(reference_curve(IntensityModel::quantum_decoherent));
    ModelParameters start = nominal;
    start.coherence = CoherenceModel(0.5);
    const std::vector<FitParameter> free{FitParameter::coherence_lambda};
    const auto fit = fit_parameters(data, free, start);
    CHECK(std::abs(fit.parameters.coherence.lambda_t() - 0.873) < 0.01);
    CHECK(fit.report.fitted_params.at("lambda_t") == fit.parameters.coherence.lambda_t());
    CHECK(fit.report.rmse < 1e-6);
    CHECK(fit.report.iterations > 0);
}

TEST_CASE("single free weight stays normalized")
{
    const auto data = thinned(reference_curve(IntensityModel::quantum_decoherent));
    ModelParameters start = nominal;
    start.weights = SuperpositionWeights(0.6, 0.8);
    const std::vector<FitParameter> free{FitParameter::weight_c1};
    const auto fit = fit_parameters(data, free, start);
    const double c1 = fit.parameters.weights.c1();
    const double c2 = fit.parameters.weights.c2();
    CHECK(std::abs(c1 * c1 + c2 * c2 - 1.0) < 1e-12);
    CHECK(fit.report.identifiability.at("c1") == Identifiability::ratio_only);
}

TEST_CASE("amplitude scale is invisible after normalization")
{
    const auto curve = reference_curve(IntensityModel::quantum_decoherent);
    const std::vector<FitParameter> free{FitParameter::amplitude_a1};
    const auto once = fit_parameters(thinned(curve), free, nominal);
    const auto twice = fit_parameters(thinned(curve, 2.0), free, nominal);
    CHECK(twice.parameters.optics.amplitude_a1() == rel(once.parameters.optics.amplitude_a1(), 1e-9));
    CHECK(twice.report.identifiability.at("A1") != Identifiability::identifiable);

    const std::vector<FitParameter> pair{FitParameter::amplitude_a1, FitParameter::amplitude_a2};
    const auto both = fit_parameters(thinned(curve, 2.0), pair, nominal);
    CHECK(both.report.identifiability.at("A1") == Identifiability::unidentifiable);
    CHECK(both.report.identifiability.at("A2") == Identifiability::unidentifiable);
}

TEST_CASE("empty free set")
{
    const auto data = thinned(reference_curve(IntensityModel::classical, 1e-4));
    CHECK_THROWS_AS(fit_parameters(data, {}, nominal), ConfigError);
}

TEST_CASE("nelder-mead")
{
    auto rosenbrock = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.max_iterations = 5000;
    const auto r = minimize_nelder_mead(rosenbrock, {-1.2, 1.0}, {0.5, 0.5}, {-5, -5}, {5, 5}, opt);
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-4);

    auto bowl = [](const std::vector<double>& x) { return std::pow(x[0] + 3.0, 2); };
    const auto b = minimize_nelder_mead(bowl, {0.5}, {0.2}, {0.0}, {1.0}, opt);
    CHECK(b.x[0] == 0.0);

    opt.max_iterations = 3;
    const auto capped = minimize_nelder_mead(rosenbrock, {-1.2, 1.0}, {0.5, 0.5}, {-5, -5}, {5, 5}, opt);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 3);
    CHECK_THROWS_AS(minimize_nelder_mead(bowl, {0.5}, {0.2, 0.1}, {0.0}, {1.0}), std::invalid_argument);
}
