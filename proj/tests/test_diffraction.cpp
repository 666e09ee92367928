#include "approx.hpp"

#include "oracles/kirchhoff.hpp"
#include "oracles/quadrature.hpp"
#include "slitdiff/diffraction.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace slitdiff;
using std::numbers::pi;
using oracle::relative_error;

namespace
{
const ModelParameters nominal = reference_parameters();
}

TEST_CASE("x integral at normal incidence")
{
    const double b = 4.4e-3;
    const auto v = aperture_integral_x(b, 1, 0.0);
    CHECK(v.real() == rel(0.0028011269984173579, 1e-14));
    CHECK(std::abs(v.imag()) < 1e-15 * v.real());
    for (int N = 3; N < 200; N += 2)
        CHECK(aperture_integral_x(b, N, 0.0).real() == rel(2 * b / (N * pi), 1e-13));
    for (int N = 2; N < 40; N += 2)
        CHECK(std::abs(sine_transform(b, N, 0.0)) < 1e-18);
}

TEST_CASE("x integral against quadrature")
{
    const double b = nominal.geometry.length();
    const double q = 0.5 * 3 * pi / b;
    CHECK(relative_error(aperture_integral_x(b, 3, q), oracle::sine_transform(b, 3, q)) < 1e-10);

    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> un(0, 150);
    std::uniform_real_distribution<double> uq(-2e5, 2e5);
    for (int i = 0; i < 40; ++i) {
        const int N = 2 * un(rng) + 1;
        const double qq = uq(rng);
        const auto v = aperture_integral_x(b, N, qq);
        CHECK(relative_error(v, oracle::sine_transform(b, N, qq)) < 1e-8);
        CHECK(std::abs(v) <= b);
    }
}

TEST_CASE("resonance is continuous")
{
    const double b = nominal.geometry.length();
    for (int N : {1, 7, 63, 255}) {
        const double kappa = N * pi / b;
        for (double sign : {1.0, -1.0}) {
            const auto at = aperture_integral_x(b, N, sign * kappa);
            // analytic limit: -i b/2 at +kappa, its conjugate at -kappa
            CHECK(relative_error(at, {0.0, -sign * b / 2}) < 1e-14);
            CHECK(relative_error(at, oracle::sine_transform(b, N, sign * kappa)) < 1e-10);
            for (double eps : {1e-9, -1e-9, 1e-7, -1e-7, 1e-6, -1e-6, 1.5e-6}) {
                const double q = sign * kappa + eps * pi / b;
                if (std::abs(eps) <= 1e-7)
                    CHECK(relative_error(aperture_integral_x(b, N, q), at) < 1e-6);
                CHECK(relative_error(aperture_integral_x(b, N, q), oracle::sine_transform(b, N, q)) < 1e-10);
            }
        }
    }
}

TEST_CASE("y integral orientation and symmetry")
{
    const auto& g = nominal.geometry;
    const double a = g.width();
    const double d = g.separation();

    const auto left = aperture_integral_y(g, 1, 0.0, Slit::left);
    const auto left_oracle = oracle::slit_integral_y(a, d, 1, 0.0, true);
    CHECK(left_oracle.real() == rel(-2 * a / pi, 1e-12));
    CHECK(left.real() == rel(-8.27605704077855746e-5, 1e-13));
    CHECK(std::abs(left.imag()) < 1e-15 * a);

    const auto right = aperture_integral_y(g, 1, 0.0, Slit::right);
    CHECK(relative_error(right, oracle::slit_integral_y(a, d, 1, 0.0, false)) < 1e-12);
    CHECK(relative_error(right, left) < 1e-14);

    const double far = std::abs(aperture_integral_y(g, 1, 1e9, Slit::left));
    CHECK(far < 1e-2 * std::abs(left));

    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> um(0, 150);
    std::uniform_real_distribution<double> up(-1e6, 1e6);
    for (int i = 0; i < 40; ++i) {
        const int M = 2 * um(rng) + 1;
        const double p = up(rng);
        const auto l = aperture_integral_y(g, M, p, Slit::left);
        const auto r = aperture_integral_y(g, M, p, Slit::right);
        const auto lo = oracle::slit_integral_y(a, d, M, p, true);
        const auto ro = oracle::slit_integral_y(a, d, M, p, false);
        CHECK(relative_error(l, lo) < 1e-8);
        CHECK(relative_error(r, ro) < 1e-8);
        // mirror pair: the right integral is the conjugate of the left one
        CHECK(relative_error(ro, std::conj(lo)) < 1e-9);
        CHECK(std::abs(l) <= a);
    }
}

TEST_CASE("invalid transform arguments")
{
    CHECK_THROWS_AS(sine_transform(1.0, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sine_transform(0.0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("slit amplitude is linear in the incident amplitude")
{
    const auto& g = nominal.geometry;
    const OpticalSetup dark(nominal.optics.wavelength(), 0.0, 0.0, nominal.optics.screen_distance());
    const auto p = DiffractionPoint::from_sin_beta(2e-3, dark);
    CHECK(slit_amplitude(g, dark, Slit::left, p, {8, 8}).value == std::complex<double>{});

    const DiffractionModel model(g, nominal.optics, {64, 64});
    const auto axis = DiffractionPoint::from_sin_beta(0.0, nominal.optics);
    const auto phi1 = model.amplitude(Slit::left, axis);
    const auto phi2 = model.amplitude(Slit::right, axis);
    CHECK(std::abs(phi1.value) == rel(std::abs(phi2.value) * 160.9 / 159.3, 1e-12));
    CHECK(phi1.value == model.unit_amplitude(Slit::left, axis) * 160.9);
    CHECK(phi1.slit == Slit::left);
    CHECK(phi2.point == axis);
}

TEST_CASE("closed form matches the surface integral")
{
    const auto& g = nominal.geometry;
    const Truncation t{16, 16};
    const DiffractionModel model(g, nominal.optics, t);
    for (Slit s : {Slit::left, Slit::right}) {
        const oracle::KirchhoffSurface surface(g, nominal.optics, s, t, 12, 8);
        for (double sb : {-4.1e-3, 3e-3, 5.3e-3}) {
            const auto point = DiffractionPoint::from_sin_beta(sb, nominal.optics, 1e-4);
            // the closed form carries the opposite overall sign of the surface integral
            CHECK(relative_error(model.amplitude(s, point).value, -surface.amplitude(point)) < 1e-4);
        }
    }
}

TEST_CASE("evanescent tail stays finite")
{
    const DiffractionModel model(nominal.geometry, nominal.optics, {300, 8});
    CHECK(model.active_m_count() > 142);
    CHECK(model.active_m_count() < 300);
    const auto p = DiffractionPoint::from_sin_beta(1e-3, nominal.optics);
    const auto v = model.unit_amplitude(Slit::left, p);
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));

    const DiffractionModel propagating_only(nominal.geometry, nominal.optics, {142, 8});
    CHECK(relative_error(v, propagating_only.unit_amplitude(Slit::left, p)) < 1e-12);
}

TEST_CASE("superposition")
{
    const auto point = DiffractionPoint::from_sin_beta(0.0, nominal.optics);
    const SlitAmplitude one{{1.0, 0.0}, Slit::left, point};
    const SlitAmplitude other{{1.0, 0.0}, Slit::right, point};
    CHECK(superpose(one, other, nominal.weights) == std::complex<double>(0.715 + 0.699, 0.0));

    const SlitAmplitude phi1{{0.3, -1.2}, Slit::left, point};
    const SlitAmplitude phi2{{2.0, 0.5}, Slit::right, point};
    CHECK(superpose(phi1, phi2, SuperpositionWeights(1.0, 0.0)) == phi1.value);
    const SuperpositionWeights w(0.6, 0.8);
    const SlitAmplitude cancel{-(0.8 / 0.6) * phi2.value, Slit::left, point};
    CHECK(std::abs(superpose(cancel, phi2, w)) < 1e-15);

    const SlitAmplitude elsewhere{{1.0, 0.0}, Slit::right, DiffractionPoint::from_sin_beta(1e-3, nominal.optics)};
    CHECK_THROWS_AS(superpose(one, elsewhere, w), std::invalid_argument);
}

TEST_CASE("symmetric pattern for equal slits")
{
    const OpticalSetup equal(nominal.optics.wavelength(), 1.0, 1.0, nominal.optics.screen_distance());
    const SuperpositionWeights w(std::sqrt(0.5), std::sqrt(0.5));
    const DiffractionModel model(nominal.geometry, equal, {64, 64});
    for (double sb = 1e-4; sb < 1e-2; sb += 7.3e-4) {
        const auto plus = DiffractionPoint::from_sin_beta(sb, equal);
        const auto minus = DiffractionPoint::from_sin_beta(-sb, equal);
        const double ip = std::abs(superpose(model.amplitude(Slit::left, plus), model.amplitude(Slit::right, plus), w));
        const double im =
            std::abs(superpose(model.amplitude(Slit::left, minus), model.amplitude(Slit::right, minus), w));
        CHECK(ip == rel(im, 1e-10));
    }
}
