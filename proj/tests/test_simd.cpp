#include <doctest.h>

#include <vector>

#include "diracbands/simd.hpp"
#include "oracles.hpp"

using diracbands::simd::active;
using diracbands::simd::scalar_kernels;
using Complex = std::complex<double>;

namespace {

std::vector<double> random_reals(std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = oracles::uniform(lo, hi);
    return v;
}

std::vector<Complex> random_cplx(std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& x : v) x = {oracles::uniform(-2.0, 2.0), oracles::uniform(-2.0, 2.0)};
    return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 5, 8, 33, 256, 1001};

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
    const auto& ref = scalar_kernels();
    const auto& hot = active();
    INFO("active kernel set: ", hot.name);

    for (std::size_t n : kSizes) {
        CAPTURE(n);
        const auto x = random_reals(n);
        const auto x2 = random_reals(n);
        const double a = oracles::uniform(-1.5, 1.5);

        SUBCASE("") {}  // keep data fresh per size

        {
            auto y1 = random_reals(n), y2 = y1;
            ref.daxpy(n, a, x.data(), y1.data());
            hot.daxpy(n, a, x.data(), y2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
        }
        {
            auto y1 = random_reals(n), y2 = y1;
            ref.daxpy_prod(n, a, x.data(), x2.data(), y1.data());
            hot.daxpy_prod(n, a, x.data(), x2.data(), y2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
        }
        {
            const auto cx = random_cplx(n);
            const Complex ca{oracles::uniform(-1, 1), oracles::uniform(-1, 1)};
            auto y1 = random_cplx(n), y2 = y1;
            ref.zaxpy(n, ca, cx.data(), y1.data());
            hot.zaxpy(n, ca, cx.data(), y2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
            auto z1 = random_cplx(n), z2 = z1;
            ref.zaxpy_conj(n, ca, cx.data(), z1.data());
            hot.zaxpy_conj(n, ca, cx.data(), z2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(z1[i] - z2[i]) < 1e-13);
        }
        {
            const auto cx = random_cplx(n);
            const auto cy = random_cplx(n);
            const Complex d1 = ref.zdotu(n, cx.data(), cy.data());
            const Complex d2 = hot.zdotu(n, cx.data(), cy.data());
            CHECK(std::abs(d1 - d2) < 1e-12 * (1.0 + std::abs(d1)));
        }
        {
            const auto dx = random_reals(n);
            const auto dy = random_reals(n);
            std::vector<double> z1(n), z2(n);
            ref.dist2_scaled(n, dx.data(), dy.data(), 0.37, -1.2, 3.6, z1.data());
            hot.dist2_scaled(n, dx.data(), dy.data(), 0.37, -1.2, 3.6, z2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-14));
        }
        {
            const auto z = random_reals(n, 0.1, 4.0);
            std::vector<double> emz(n);
            for (std::size_t i = 0; i < n; ++i) emz[i] = std::exp(-z[i]);
            auto e1 = random_reals(n, 0.0, 1.0), e2 = e1;
            ref.expint_step(n, 1.0 / 3.0, emz.data(), z.data(), e1.data());
            hot.expint_step(n, 1.0 / 3.0, emz.data(), z.data(), e2.data());
            for (std::size_t i = 0; i < n; ++i)
                CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("zaxpy semantics") {
    // spot-check the complex arithmetic itself, not just cross-agreement
    const Complex a{2.0, -1.0};
    std::vector<Complex> x = {{1.0, 1.0}, {0.0, -3.0}};
    std::vector<Complex> y = {{0.5, 0.0}, {1.0, 2.0}};
    active().zaxpy(2, a, x.data(), y.data());
    CHECK(std::abs(y[0] - Complex(3.5, 1.0)) < 1e-15);
    CHECK(std::abs(y[1] - Complex(-2.0, -4.0)) < 1e-15);

    std::vector<Complex> y2 = {{0.0, 0.0}};
    std::vector<Complex> x2 = {{1.0, 1.0}};
    active().zaxpy_conj(1, a, x2.data(), y2.data());
    CHECK(std::abs(y2[0] - a * std::conj(x2[0])) < 1e-15);
}
