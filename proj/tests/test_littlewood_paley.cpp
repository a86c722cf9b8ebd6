#include <catch_amalgamated.hpp>

#include "ddmx/littlewood_paley.hpp"
#include "ddmx/random_fields.hpp"

using namespace ddmx;

namespace {
constexpr double pi = Grid::pi;

ScalarField single_mode(const Grid& g, int m1, int m2, std::complex<double> c = {1.0, 0.0}) {
    std::vector<std::complex<double>> v(static_cast<size_t>(g.size_spectral()), 0.0);
    const int ix = m1 >= 0 ? m1 : m1 + g.n();
    v[static_cast<size_t>(ix) * g.spectral_cols() + m2] = c;
    return ScalarField::from_spectral(g, std::move(v));
}
} // namespace

TEST_CASE("filter bank profiles and supports") {
    for (int degree : {1, 2}) {
        DyadicFilterBank bank(degree);
        CHECK(bank.chi(0.25) == 1.0);
        CHECK(bank.chi(0.5) == 1.0);
        CHECK(bank.chi(1.0) == 0.0);
        CHECK(bank.chi(1.5) == 0.0);
        CHECK(bank.phi(0.4) == 0.0);
        CHECK(bank.phi(2.5) == 0.0);
        CHECK(bank.phi(1.0) == 1.0); // chi(1/2) - chi(1)
        // supp phi inside [1/2, 2]
        for (double r = 0.01; r < 0.5; r += 0.01) CHECK(bank.phi(r) == 0.0);
        for (double r = 2.0; r < 4.0; r += 0.05) CHECK(bank.phi(r) == 0.0);
        // nonnegative on the ring
        for (double r = 0.5; r <= 2.0; r += 0.01) CHECK(bank.phi(r) >= -1e-15);
    }
    CHECK_THROWS_AS(DyadicFilterBank(3), std::invalid_argument);
}

TEST_CASE("telescoping partition of unity") {
    DyadicFilterBank bank;
    // chi(xi) + sum_{q=0}^{10} phi(2^{-q} xi) = 1 for |xi| <= 2^10 / 2
    double worst = 0.0;
    for (double xi = 0.0; xi <= 512.0; xi += 0.37) {
        double s = bank.chi(xi);
        for (int q = 0; q <= 10; ++q) s += bank.phi_scaled(q, xi);
        worst = std::max(worst, std::abs(1.0 - s));
    }
    CHECK(worst <= 1e-12);

    // partial sums telescope to chi(2^{-(Q+1)} xi) for every xi
    for (double xi : {0.3, 1.7, 9.4, 400.0, 3000.0}) {
        for (int bigq : {2, 5, 12}) {
            double s = bank.chi(xi);
            for (int q = 0; q <= bigq; ++q) s += bank.phi_scaled(q, xi);
            CHECK(std::abs(s - bank.chi_scaled(bigq + 1, xi)) <= 1e-12);
        }
    }
}

TEST_CASE("disjoint supports for |p - q| >= 2") {
    DyadicFilterBank bank;
    for (int p = 0; p <= 6; ++p)
        for (int q = p + 2; q <= 9; ++q) {
            double worst = 0.0;
            for (double xi = 0.0; xi <= 1100.0; xi += 0.13)
                worst = std::max(worst, bank.phi_scaled(q, xi) * bank.chi_scaled(p, xi));
            CHECK(worst == 0.0);
        }
}

TEST_CASE("block on single modes") {
    Grid g(64, 2 * pi);
    DyadicFilterBank bank;
    ScalarField u1 = single_mode(g, 1, 0, {0.5, 0.5});
    // |k| = 1, q = 0: phi(1) = chi(1/2) - chi(1) = 1
    ScalarField b0 = block(u1, 0, bank);
    CHECK(l2_norm(axpy(b0, -1.0, u1)) <= 1e-14 * l2_norm(u1));

    ScalarField u8 = single_mode(g, 8, 0);
    CHECK(block(u8, 0, bank).is_zero()); // |k| = 8 outside the q = 0 ring

    CHECK_THROWS_AS(block(u1, -1, bank), std::invalid_argument);
    CHECK(block(u1, 40, bank).is_zero()); // empty band, zero field result
}

TEST_CASE("block band limiting is exact") {
    Grid g(64, 2 * pi);
    DyadicFilterBank bank;
    ScalarField u = random_band_limited(g, 0, 30, 7, 1.0, false);
    for (int q : {1, 2, 3, 4}) {
        ScalarField b = block(u, q, bank);
        const auto s = b.spectral();
        const double lo = std::ldexp(0.5, q), hi = std::ldexp(2.0, q);
        double outside = 0.0;
        for (int ix = 0; ix < g.n(); ++ix)
            for (int j = 0; j < g.spectral_cols(); ++j) {
                const double k = std::sqrt(g.k_squared(ix, j));
                if (k < lo || k > hi)
                    outside = std::max(
                        outside, std::abs(s[static_cast<size_t>(ix) * g.spectral_cols() + j]));
            }
        CHECK(outside == 0.0);
    }
}

TEST_CASE("low_pass cases and telescoping against blocks") {
    Grid g(64, 2 * pi);
    DyadicFilterBank bank;
    ScalarField u = random_band_limited(g, 0, 30, 9, 1.0, false);

    // q large enough: identity
    ScalarField s12 = low_pass(u, 12, bank);
    CHECK(l2_norm(axpy(s12, -1.0, u)) <= 1e-12 * l2_norm(u));

    ScalarField u1 = single_mode(g, 1, 0);
    CHECK(l2_norm(low_pass(u1, 0, bank)) == 0.0); // chi(1) = 0

    // S_q u = S_1 u + sum_{q' = 1}^{q-1} Delta_{q'} u
    for (int q : {2, 3, 5}) {
        ScalarField acc = low_pass(u, 1, bank);
        for (int qq = 1; qq <= q - 1; ++qq) acc = add(acc, block(u, qq, bank));
        CHECK(l2_norm(axpy(acc, -1.0, low_pass(u, q, bank))) <= 1e-10 * l2_norm(u));
    }
}

TEST_CASE("decompose and reconstruct") {
    Grid g(64, 2 * pi);
    DyadicFilterBank bank;

    DyadicDecomposition dz = decompose(ScalarField::zero(g), bank);
    CHECK(dz.low.is_zero());
    for (const auto& b : dz.blocks) CHECK(b.is_zero());

    // single mode |k| = 6 lands in at most two rings and not in S_1
    ScalarField m = single_mode(g, 6, 0);
    DyadicDecomposition dm = decompose(m, bank);
    int nonzero = 0;
    for (const auto& b : dm.blocks)
        if (l2_norm(b) > 1e-14) ++nonzero;
    CHECK(nonzero >= 1);
    CHECK(nonzero <= 2);
    CHECK(l2_norm(dm.low) == 0.0); // chi(6/2) = 0

    for (std::uint64_t seed : {11, 12, 13}) {
        ScalarField u = random_band_limited(g, 0, 31, seed, 1.0, false);
        ScalarField r = reconstruct(decompose(u, bank));
        CHECK(l2_norm(axpy(r, -1.0, u)) <= 1e-10 * l2_norm(u));
    }
}

TEST_CASE("almost orthogonality of the block family") {
    Grid g(64, 2 * pi);
    DyadicFilterBank bank;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::uint64_t seed = 20; seed < 40; ++seed) {
        ScalarField u = random_band_limited(g, 1, 31, seed, 1.0);
        DyadicDecomposition d = decompose(u, bank);
        double sum = sobolev_norm_sq(d.low, 0.0);
        for (const auto& b : d.blocks) sum += sobolev_norm_sq(b, 0.0);
        const double ratio = sum / sobolev_norm_sq(u, 0.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(lo > 0.25);
    CHECK(hi < 2.5);
}

TEST_CASE("bernstein property of blocks") {
    Grid g(128, 2 * pi);
    DyadicFilterBank bank;
    double worst = 0.0;
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        ScalarField u = random_band_limited(g, 1, 42, seed, 1.0);
        for (int q = 1; q <= q_max_for_grid(g); ++q) {
            ScalarField b = block(u, q, bank);
            const double l2 = l2_norm(b);
            if (l2 < 1e-14) continue;
            worst = std::max(worst, linf_norm(b) / (std::ldexp(1.0, q) * l2));
        }
    }
    CHECK(worst > 0.0);
    CHECK(worst < 2.0); // 2D Bernstein scaling 2^q with a moderate constant
}

TEST_CASE("linf interpolation bound report") {
    Grid g(64, 2 * pi);
    LinfBoundReport z = linf_interpolation_bound(ScalarField::zero(g), 3);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs_sum() == 0.0);

    // u = sin(x1): all three norms equal sqrt(2) pi (single shell |k| = 1)
    std::vector<double> v(static_cast<size_t>(g.size_physical()));
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            v[static_cast<size_t>(ix) * g.n() + iy] = std::sin(g.x1(ix));
    ScalarField u = ScalarField::from_physical(g, std::move(v));
    LinfBoundReport r = linf_interpolation_bound(u, 2);
    const double sp = std::sqrt(2.0) * pi;
    CHECK(r.lhs == Catch::Approx(1.0).epsilon(1e-3));
    CHECK(r.rhs_terms[0] == Catch::Approx(sp).epsilon(1e-12));
    CHECK(r.rhs_terms[1] == Catch::Approx(2 * sp).epsilon(1e-12));
    CHECK(r.rhs_terms[2] == Catch::Approx(0.25 * sp).epsilon(1e-12));
}

TEST_CASE("interpolation-bound ratio is stable across seeds") {
    Grid g(64, 2 * pi);
    auto corpus_max = [&](std::uint64_t base) {
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            ScalarField u = random_band_limited(g, 1, 21, base + s, 1.0);
            const int n = optimal_truncation(u);
            const LinfBoundReport r = linf_interpolation_bound(u, n);
            if (r.rhs_sum() > 0.0) worst = std::max(worst, r.lhs / r.rhs_sum());
        }
        return worst;
    };
    const double a = corpus_max(1000), b = corpus_max(2000), c = corpus_max(3000);
    const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
    CHECK((hi - lo) / hi <= 0.10);
}

TEST_CASE("optimal truncation") {
    // ratio 1 -> round(log(e + 1)/log 2) = 2
    CHECK(optimal_truncation_from_norms(1.0, 1.0, 10) == 2);
    // degenerate gradient -> 1
    CHECK(optimal_truncation_from_norms(0.0, 0.0, 10) == 1);
    // clamped to q_max
    CHECK(optimal_truncation_from_norms(1.0, 1e9, 5) == 5);

    // single shell at |k| = 2^8: hess/grad = 256, N ~ 8
    Grid g(64, 2 * pi / 16.0); // fundamental 16, shell at lattice index 16
    std::vector<std::complex<double>> c(static_cast<size_t>(g.size_spectral()), 0.0);
    c[static_cast<size_t>(16) * g.spectral_cols() + 0] = {1.0, 0.0};
    ScalarField shell = ScalarField::from_spectral(g, std::move(c));
    CHECK(optimal_truncation(shell) == 8);
}

TEST_CASE("trajectory log bound basics") {
    std::vector<double> t{0.0, 0.5, 1.0};
    std::vector<double> zero{0.0, 0.0, 0.0};
    LogBoundReport r = trajectory_log_bound(t, zero, zero, zero, 2.0, 1.0);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(trajectory_log_bound({}, {}, {}, {}, 1.0, 1.0), std::invalid_argument);
}
