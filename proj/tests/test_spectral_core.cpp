#include <catch_amalgamated.hpp>

#include "ddmx/littlewood_paley.hpp"
#include "ddmx/norms.hpp"
#include "ddmx/operators.hpp"
#include "ddmx/random_fields.hpp"

using namespace ddmx;

namespace {

constexpr double pi = Grid::pi;

ScalarField sample(const Grid& g, double (*f)(double, double)) {
    std::vector<double> v(static_cast<size_t>(g.size_physical()));
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            v[static_cast<size_t>(ix) * g.n() + iy] = f(g.x1(ix), g.x2(iy));
    return ScalarField::from_physical(g, std::move(v));
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    const auto va = a.values(), vb = b.values();
    double m = 0.0;
    for (size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

double max_abs_diff(const VectorField3& a, const VectorField3& b) {
    return std::max({max_abs_diff(a.c1(), b.c1()), max_abs_diff(a.c2(), b.c2()),
                     max_abs_diff(a.c3(), b.c3())});
}

} // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(7, 1.0), config_error);
    CHECK_THROWS_AS(Grid(6, 1.0), config_error);
    CHECK_THROWS_AS(Grid(16, -1.0), config_error);

    Grid g(16, 2 * pi);
    Grid g2(16, 2 * pi);
    for (int ix = 0; ix < g.n(); ++ix) CHECK(g.k1(ix) == g2.k1(ix));
    CHECK(g.k1_deriv(8) == 0.0);
    CHECK(g.k1(8) == 8.0);
    CHECK(g.k1(9) == -7.0);
}

TEST_CASE("transform round trip and Hermitian symmetry") {
    Grid g(32, 2 * pi);
    ScalarField f = random_band_limited(g, 0, 10, 17, 1.0, false);
    ScalarField back = ScalarField::from_spectral(g, {f.spectral().begin(), f.spectral().end()});
    const double scale = linf_norm(f);
    CHECK(max_abs_diff(f, back) <= 1e-12 * scale);

    // real field: coefficient at (-m1, 0) must be conj of (m1, 0)
    for (int ix = 1; ix < g.n() / 2; ++ix) {
        const auto a = f.coeff(ix, 0);
        const auto b = f.coeff(g.n() - ix, 0);
        CHECK(std::abs(a - std::conj(b)) < 1e-15);
    }
    CHECK(f.coeff(0, 0).imag() == 0.0);
    CHECK(f.coeff(g.n() / 2, 0).imag() == 0.0);

    std::vector<double> bad(static_cast<size_t>(g.size_physical()), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField::from_physical(g, std::move(bad)), numeric_error);
}

TEST_CASE("parseval consistency") {
    Grid g(32, 5.0);
    ScalarField f = random_band_limited(g, 0, 10, 3, 2.0, false);
    const double phys = lp_norm(f, 2.0);
    const double spec = l2_norm(f);
    CHECK(std::abs(phys - spec) <= 1e-12 * spec);
}

TEST_CASE("gradient3 analytic and oracle cases") {
    Grid g(32, 2 * pi);
    ScalarField f = sample(g, [](double x, double) { return std::sin(x); });
    VectorField3 grad = gradient3(f);
    ScalarField expected = sample(g, [](double x, double) { return std::cos(x); });
    CHECK(max_abs_diff(grad.c1(), expected) < 1e-12);
    CHECK(linf_norm(grad.c2()) < 1e-13);
    CHECK(grad.c3().is_zero());

    ScalarField c = ScalarField::from_physical(
        g, std::vector<double>(static_cast<size_t>(g.size_physical()), 3.5));
    CHECK(linf_norm(gradient3(c).c1()) < 1e-13);
    CHECK(linf_norm(gradient3(c).c2()) < 1e-13);
}

TEST_CASE("gradient3 matches centered finite differences at O(1/N^2)") {
    auto fd_error = [](int n) {
        Grid g(n, 2 * pi);
        ScalarField f = sample(g, [](double x, double y) { return std::sin(x) * std::sin(y); });
        VectorField3 grad = gradient3(f);
        const auto v = f.values();
        const auto g1 = grad.c1().values();
        const double h = g.dx();
        double worst = 0.0;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy) {
                const int ip = (ix + 1) % n, im = (ix + n - 1) % n;
                const double fd =
                    (v[static_cast<size_t>(ip) * n + iy] - v[static_cast<size_t>(im) * n + iy]) /
                    (2 * h);
                worst = std::max(worst,
                                 std::abs(fd - g1[static_cast<size_t>(ix) * n + iy]));
            }
        return worst;
    };
    const double e16 = fd_error(16), e32 = fd_error(32);
    CHECK(e16 / e32 > 3.0); // centered differences converge at second order
    CHECK(e16 / e32 < 5.0);
}

TEST_CASE("divergence2 cases") {
    Grid g(32, 2 * pi);
    ScalarField mc = sample(g, [](double x, double) { return -std::cos(x); });
    VectorField3 v(mc, ScalarField::zero(g), ScalarField::zero(g));
    ScalarField expected = sample(g, [](double x, double) { return std::sin(x); });
    CHECK(max_abs_diff(divergence2(v), expected) < 1e-12);

    ScalarField anything = random_band_limited(g, 0, 8, 5, 1.0, false);
    VectorField3 third(ScalarField::zero(g), ScalarField::zero(g), anything);
    CHECK(divergence2(third).is_zero());

    VectorField3 b(random_band_limited(g, 1, 9, 11, 1.0), random_band_limited(g, 1, 9, 12, 1.0),
                   random_band_limited(g, 1, 9, 13, 1.0));
    const double h2 = sobolev_norm(b, 2.0);
    CHECK(l2_norm(divergence2(curl3(b))) <= 1e-12 * h2);
}

TEST_CASE("curl3 cases and double-curl identity") {
    Grid g(32, 2 * pi);
    ScalarField s = sample(g, [](double, double y) { return std::sin(y); });
    VectorField3 v(ScalarField::zero(g), ScalarField::zero(g), s);
    VectorField3 c = curl3(v);
    ScalarField expected = sample(g, [](double, double y) { return std::cos(y); });
    CHECK(max_abs_diff(c.c1(), expected) < 1e-12);
    CHECK(linf_norm(c.c2()) < 1e-13);
    CHECK(linf_norm(c.c3()) < 1e-13);

    ScalarField f = random_band_limited(g, 1, 9, 21, 1.0);
    CHECK(linf_norm(curl3(gradient3(f)).c3()) < 1e-12);

    // curl curl v = grad div v - lap v, componentwise (div here is the 2D one
    // acting on (v1, v2); the identity holds with the embedded conventions)
    VectorField3 w(random_band_limited(g, 1, 9, 31, 1.0), random_band_limited(g, 1, 9, 32, 1.0),
                   random_band_limited(g, 1, 9, 33, 1.0));
    VectorField3 lhs = curl3(curl3(w));
    VectorField3 lap_w(laplacian(w.c1()), laplacian(w.c2()), laplacian(w.c3()));
    VectorField3 rhs = axpy(gradient3(divergence2(w)), -1.0, lap_w);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * sobolev_norm(w, 2.0));
}

TEST_CASE("laplacian cases") {
    Grid g(32, 2 * pi);
    ScalarField f = sample(g, [](double x, double) { return std::sin(x); });
    ScalarField expected = sample(g, [](double x, double) { return -std::sin(x); });
    CHECK(max_abs_diff(laplacian(f), expected) < 1e-12);

    ScalarField c = ScalarField::from_physical(
        g, std::vector<double>(static_cast<size_t>(g.size_physical()), 2.0));
    CHECK(linf_norm(laplacian(c)) < 1e-13);

    ScalarField u = random_band_limited(g, 1, 9, 41, 1.0);
    CHECK(max_abs_diff(laplacian(u), divergence2(gradient3(u))) <= 1e-12 * sobolev_norm(u, 2.0));
}

TEST_CASE("sobolev norms") {
    Grid g(32, 2 * pi);
    ScalarField f = sample(g, [](double x, double) { return std::sin(x); });
    CHECK(l2_norm(f) == Catch::Approx(std::sqrt(2.0) * pi).epsilon(1e-12));
    CHECK(sobolev_norm(f, 1.0) == Catch::Approx(2 * pi).epsilon(1e-12));

    CHECK(sobolev_norm(ScalarField::zero(g), 1.5) == 0.0);
    CHECK(sobolev_norm(ScalarField::zero(g), -1.0, true) == 0.0);

    ScalarField u = random_band_limited(g, 1, 10, 51, 1.0);
    const double h1_sq = sobolev_norm_sq(u, 1.0);
    const double split = sobolev_norm_sq(u, 0.0) + sobolev_norm_sq(gradient3(u).c1(), 0.0) +
                         sobolev_norm_sq(gradient3(u).c2(), 0.0);
    CHECK(std::abs(h1_sq - split) <= 1e-12 * h1_sq);

    CHECK_THROWS_AS(sobolev_norm(u, -3.0), std::invalid_argument);
    ScalarField with_mean = random_band_limited(g, 0, 4, 53, 1.0, false);
    if (std::abs(with_mean.mean()) > 0)
        CHECK_THROWS_AS(sobolev_norm(with_mean, -1.0, true), constraint_error);
}

TEST_CASE("lp norms") {
    Grid g(32, 2 * pi);
    ScalarField c = ScalarField::from_physical(
        g, std::vector<double>(static_cast<size_t>(g.size_physical()), -1.5));
    CHECK(lp_norm(c, 2.0) == Catch::Approx(1.5 * 2 * pi).epsilon(1e-13));
    CHECK(lp_norm(c, 4.0) == Catch::Approx(1.5 * std::sqrt(2 * pi)).epsilon(1e-13));
    CHECK(linf_norm(c) == 1.5);

    // ||sin x1||_L4^4 = int sin^4 = 3 pi^2 / 2; confirmed by an independent
    // 1D trapezoid quadrature of the analytic integrand
    ScalarField f = sample(g, [](double x, double) { return std::sin(x); });
    const double closed = std::pow(1.5 * pi * pi, 0.25);
    CHECK(lp_norm(f, 4.0) == Catch::Approx(closed).epsilon(1e-12));
    const int m = 200000;
    double quad = 0.0;
    for (int i = 0; i < m; ++i) {
        const double s = std::sin(2 * pi * i / m);
        quad += s * s * s * s;
    }
    quad *= (2 * pi / m) * (2 * pi); // times the trivial x2 extent
    CHECK(lp_norm(f, 4.0) == Catch::Approx(std::pow(quad, 0.25)).epsilon(1e-10));

    CHECK_THROWS_AS(lp_norm(f, 3.0), std::invalid_argument);

    // L-inf of an off-grid-centered Gaussian bump on a fine grid
    Grid fine(256, 2 * pi);
    const double sigma = 2 * pi / 16.0;
    std::vector<double> v(static_cast<size_t>(fine.size_physical()));
    const double cx = pi + 0.37 * fine.dx(), cy = pi + 0.61 * fine.dx();
    for (int ix = 0; ix < fine.n(); ++ix)
        for (int iy = 0; iy < fine.n(); ++iy) {
            const double dx = fine.x1(ix) - cx, dy = fine.x2(iy) - cy;
            v[static_cast<size_t>(ix) * fine.n() + iy] =
                std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
    ScalarField bump = ScalarField::from_physical(fine, std::move(v));
    CHECK(linf_norm(bump) == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("cutoff operator") {
    Grid g(32, 2 * pi);
    // single mode |m| = 3
    std::vector<std::complex<double>> c(static_cast<size_t>(g.size_spectral()), 0.0);
    c[static_cast<size_t>(3) * g.spectral_cols() + 0] = {0.5, 0.25};
    ScalarField mode = ScalarField::from_spectral(g, std::move(c));
    CHECK(l2_norm(apply_cutoff(CutoffOperator(2.0), mode)) == 0.0);
    CHECK(max_abs_diff(apply_cutoff(CutoffOperator(4.0), mode), mode) == 0.0);

    ScalarField u = random_band_limited(g, 0, 15, 61, 1.0, false);
    CutoffOperator j5(5.0);
    ScalarField once = apply_cutoff(j5, u);
    ScalarField twice = apply_cutoff(j5, once);
    CHECK(max_abs_diff(once, twice) == 0.0); // exact idempotence

    // spectral tail decreases monotonically through n = 4, 8, 16, 32
    Grid fine(128, 2 * pi);
    const double sigma = 0.22;
    std::vector<double> v(static_cast<size_t>(fine.size_physical()));
    for (int ix = 0; ix < fine.n(); ++ix)
        for (int iy = 0; iy < fine.n(); ++iy) {
            const double dx = fine.x1(ix) - pi, dy = fine.x2(iy) - pi;
            v[static_cast<size_t>(ix) * fine.n() + iy] =
                std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
    ScalarField smooth = ScalarField::from_physical(fine, std::move(v));
    double prev = std::numeric_limits<double>::infinity();
    for (double n : {4.0, 8.0, 16.0, 32.0}) {
        const double tail = l2_norm(axpy(apply_cutoff(CutoffOperator(n), smooth), -1.0, smooth));
        CHECK(tail < prev);
        prev = tail;
    }
}

TEST_CASE("operators commute with the cutoff bitwise") {
    Grid g(32, 2 * pi);
    ScalarField u = random_band_limited(g, 0, 14, 71, 1.0, false);
    CutoffOperator jn(6.0);
    CHECK(max_abs_diff(laplacian(apply_cutoff(jn, u)), apply_cutoff(jn, laplacian(u))) == 0.0);
    CHECK(max_abs_diff(gradient3(apply_cutoff(jn, u)).c1(),
                       apply_cutoff(jn, gradient3(u).c1())) == 0.0);
    VectorField3 w(u, random_band_limited(g, 0, 14, 72, 1.0, false),
                   random_band_limited(g, 0, 14, 73, 1.0, false));
    CHECK(max_abs_diff(curl3(apply_cutoff(jn, w)), apply_cutoff(jn, curl3(w))) == 0.0);
}

TEST_CASE("cutoff H^s smoothing bound") {
    Grid g(64, 2 * pi);
    for (std::uint64_t seed : {81, 82, 83}) {
        ScalarField u = random_band_limited(g, 0, 30, seed, 1.0, false);
        for (double n : {4.0, 8.0, 16.0}) {
            const double kn = g.fundamental() * n;
            const double l2 = l2_norm(u);
            for (double s : {0.0, 1.0, 2.0}) {
                const double hs = sobolev_norm(apply_cutoff(CutoffOperator(n), u), s);
                CHECK(hs <= std::pow(1.0 + kn, s) * l2 * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("solve_gauss_electric") {
    Grid g(32, 2 * pi);
    ScalarField rho = sample(g, [](double x, double) { return std::sin(x); });
    VectorField3 e = solve_gauss_electric(rho);
    ScalarField expected = sample(g, [](double x, double) { return -std::cos(x); });
    CHECK(max_abs_diff(e.c1(), expected) < 1e-12);
    CHECK(linf_norm(e.c2()) < 1e-13);

    CHECK(solve_gauss_electric(ScalarField::zero(g)).is_zero());

    ScalarField r = random_band_limited(g, 1, 10, 91, 1.0);
    VectorField3 er = solve_gauss_electric(r);
    CHECK(l2_norm(axpy(divergence2(er), -1.0, r)) <= 1e-12 * l2_norm(r));
    const VectorField3 curl_e = curl3(er);
    CHECK(l2_norm(curl_e.c1()) + l2_norm(curl_e.c2()) + l2_norm(curl_e.c3()) <=
          1e-12 * sobolev_norm(r, 1.0));

    ScalarField with_mean = ScalarField::from_physical(
        g, std::vector<double>(static_cast<size_t>(g.size_physical()), 0.1));
    CHECK_THROWS_AS(solve_gauss_electric(with_mean), constraint_error);
}

TEST_CASE("oversampled quadrature") {
    Grid g(32, 2 * pi);
    ScalarField f = sample(g, [](double x, double y) { return std::sin(x) + 0.3 * std::cos(2 * y); });
    const double base = lp_norm(f, 4.0);
    const double over = lp_norm(f, 4.0, true);
    CHECK(over == Catch::Approx(base).epsilon(1e-10)); // band-limited: both exact
}
