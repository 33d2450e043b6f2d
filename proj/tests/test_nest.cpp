#include <catch2/catch_amalgamated.hpp>

#include "fibnest/constants.hpp"
#include "fibnest/nest.hpp"

using namespace fibnest;

namespace {
MapSpec fib_map(mpfr_prec_t prec = 512) { return constants::quadratic_fibonacci_map(prec); }
} // namespace

TEST_CASE("marked points satisfy their defining pullback identities") {
    MapSpec m = fib_map();
    MarkedPoints mp = marked_points(m, 11);
    const Real c = m.critical_point();
    Real tol = Real::pow2(-300, 64);

    CHECK(mp.S == std::vector<long>{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377});

    // u_0 = q is fixed, u_1 its exact mirror
    CHECK((eval(m, mp.u[0]) - mp.u[0]).abs() < tol);
    CHECK(mp.u[0] + mp.u[1] == Real::one(600));

    // f^{S_n}(u_{n+1}) = u_n
    for (long n = 1; n + 1 < mp.count; ++n) {
        Real img = eval_n(m, mp.u[static_cast<std::size_t>(n + 1)],
                          mp.S[static_cast<std::size_t>(n)]);
        INFO("n = " << n);
        CHECK((img - mp.u[static_cast<std::size_t>(n)]).abs() < Real::pow2(-120, 64));
    }

    // f^{S_n}(z_n) = c with z increasing towards c
    for (long n = 0; n < mp.count; ++n) {
        Real img = eval_n(m, mp.z[static_cast<std::size_t>(n)], mp.S[static_cast<std::size_t>(n)]);
        INFO("n = " << n);
        CHECK((img - c).abs() < Real::pow2(-120, 64));
        CHECK(mp.z[static_cast<std::size_t>(n)] < c);
        if (n > 0)
            CHECK(mp.z[static_cast<std::size_t>(n - 1)] < mp.z[static_cast<std::size_t>(n)]);
    }

    // d and u share a side, and the radii interleave as
    // |d_{n+1}| < |u_n| < |y_n| < |z_{n-1}| < |d_n|
    auto radius = [&](const Real& x) { return (x - c).abs(); };
    for (long n = 1; n + 1 < mp.count; ++n) {
        auto i = static_cast<std::size_t>(n);
        INFO("n = " << n);
        CHECK((mp.u[i] > c) == (mp.d[i] > c));
        CHECK(radius(mp.d[i + 1]) < radius(mp.u[i]));
        CHECK(radius(mp.u[i]) < radius(mp.y[i]));
        CHECK(radius(mp.y[i]) < radius(mp.z[i - 1]));
        CHECK(radius(mp.z[i - 1]) < radius(mp.d[i]));
    }

    CHECK_THROWS_AS(marked_points(m, 1), fibnest::domain_error);
    CHECK_THROWS_AS(marked_points(m, kMaxNestLevels + 1), fibnest::budget_error);
    CHECK_THROWS_AS(marked_points(m.at_precision(128), 6), fibnest::budget_error);
}

TEST_CASE("u interval is symmetric") {
    MapSpec m = fib_map();
    MarkedPoints mp = marked_points(m, 4);
    auto [lo, hi] = mp.U(1);
    CHECK(lo < hi);
    CHECK(lo + hi == Real::one(600));
}

TEST_CASE("niceness of the root interval") {
    MapSpec m = fib_map();
    Real q = reversing_fixed_point(m);
    Real qh = symmetric_point(q).with_precision(m.prec);
    NiceCheck nc = is_nice(m, Real::min(q, qh), Real::max(q, qh), 500);
    CHECK(nc.nice);
    // both endpoints orbit through the fixed point q forever: every step grazes
    CHECK(nc.grazing_count > 900);
}

TEST_CASE("an asymmetric interval around c is typically not nice") {
    MapSpec m = MapSpec::quadratic(Real::of_double(1.0, 256), 256);
    // (0.3, 0.6): the orbit of 0.3 passes 0.84 -> 0.5376, inside.
    NiceCheck nc = is_nice(m, Real::of_double(0.3, 256), Real::of_double(0.6, 256), 50);
    CHECK_FALSE(nc.nice);
    CHECK(nc.violation_time > 0);
}

TEST_CASE("first entry times") {
    MapSpec m = fib_map();
    Real q = reversing_fixed_point(m);
    Real qh = symmetric_point(q).with_precision(m.prec);
    Real lo = Real::min(q, qh), hi = Real::max(q, qh);
    EntryResult e = first_entry(m, m.critical_point(), lo, hi, 1000);
    REQUIRE(e.entered);
    CHECK(e.time == 3);
    CHECK((e.point - eval_n(m, m.critical_point(), 3)).abs() == Real::zero(64));

    // full map: orbit of c freezes at the fixed point 0
    MapSpec t = MapSpec::quadratic(Real::of_double(1.0, 256), 256);
    EntryResult f = first_entry(t, t.critical_point(), Real::of_double(0.4, 256),
                                Real::of_double(0.45, 256), 1000);
    CHECK_FALSE(f.entered);
    CHECK(f.frozen);
    CHECK(f.time == 3);
}

TEST_CASE("return domains of the root interval") {
    MapSpec m = fib_map();
    Real q = reversing_fixed_point(m);
    Real qh = symmetric_point(q).with_precision(m.prec);
    Real lo = Real::min(q, qh), hi = Real::max(q, qh);
    std::vector<ReturnDomain> doms = return_domains(m, lo, hi, 10000);
    REQUIRE(doms.size() == 2);

    const ReturnDomain* central = nullptr;
    const ReturnDomain* lateral = nullptr;
    for (const ReturnDomain& d : doms) (d.contains_critical ? central : lateral) = &d;
    REQUIRE(central != nullptr);
    REQUIRE(lateral != nullptr);
    CHECK(central->return_time == 3);
    CHECK(lateral->return_time == 2);

    for (const ReturnDomain& d : doms) {
        CHECK(d.lo_outer < d.lo_inner);
        CHECK(d.lo_inner < d.hi_inner);
        CHECK(d.hi_inner < d.hi_outer);
        CHECK((d.lo_inner - d.lo_outer).abs() < Real::pow2(-200, 64));
        CHECK((d.hi_outer - d.hi_inner).abs() < Real::pow2(-200, 64));
        // every sampled point of the certified interior returns at the stated time
        Real width = d.hi_inner - d.lo_inner;
        for (int s = 0; s < 32; ++s) {
            Real t = Real::of_si(2 * s + 1, m.prec) / Real::of_si(64, m.prec);
            Real x = d.lo_inner + width * t;
            EntryResult e = first_entry(m, x, lo, hi, 10000);
            REQUIRE(e.entered);
            CHECK(e.time == d.return_time);
        }
    }

    // the full map's critical orbit never meets a small off-center interval
    MapSpec t = MapSpec::quadratic(Real::of_double(1.0, 256), 256);
    CHECK_THROWS_AS(
        return_domains(t, Real::of_double(0.26, 256), Real::of_double(0.3, 256), 1000),
        fibnest::insufficient_data_error);
}

TEST_CASE("principal nest levels are symmetric, nested, and labeled") {
    MapSpec m = fib_map();
    PrincipalNest nest = principal_nest(m, 8);
    REQUIRE(nest.levels.size() == 8);

    Real q = reversing_fixed_point(m);
    Real qh = symmetric_point(q).with_precision(m.prec + 1);
    const NestLevel& l1 = nest.levels[0];
    CHECK(Real::max(l1.i, l1.i_hat) == Real::max(q, qh));
    CHECK(Real::min(l1.i, l1.i_hat) == Real::min(q, qh));

    const Real c = m.critical_point();
    for (std::size_t k = 0; k < nest.levels.size(); ++k) {
        const NestLevel& lvl = nest.levels[k];
        INFO("level " << k + 1);
        CHECK(lvl.i + lvl.i_hat == Real::one(600)); // exact mirrors
        CHECK((lvl.side == Side::right) == (lvl.i > c));
        if (k > 0) {
            const NestLevel& up = nest.levels[k - 1];
            CHECK(Real::min(up.i, up.i_hat) < Real::min(lvl.i, lvl.i_hat));
            CHECK(Real::max(lvl.i, lvl.i_hat) < Real::max(up.i, up.i_hat));
        }
    }

    // the first return to level k happens at the cutting time of index k+1
    std::vector<long> S = detail::cutting_time_values(m, 10);
    for (std::size_t k = 0; k + 1 < nest.levels.size(); ++k) {
        INFO("level " << k + 1);
        CHECK(nest.levels[k].T == S[k + 2]);
    }

    // the pulled-back endpoint maps onto an endpoint of the previous level
    for (std::size_t k = 1; k < nest.levels.size(); ++k) {
        const NestLevel& up = nest.levels[k - 1];
        const NestLevel& lvl = nest.levels[k];
        Real img = eval_n(m, lvl.i, up.T);
        Real gap = Real::min((img - up.i).abs(), (img - up.i_hat).abs());
        INFO("level " << k + 1);
        CHECK(gap < Real::pow2(-120, 64));
    }
}

TEST_CASE("second nest level coincides with the second u-point") {
    MapSpec m = fib_map();
    PrincipalNest nest = principal_nest(m, 3);
    MarkedPoints mp = marked_points(m, 4);
    // both solve f^{S_1}(x) = q on the same central branch
    Real i2 = nest.levels[1].i;
    const Real& u2 = mp.u[2];
    CHECK((i2 - u2).abs() < Real::pow2(-400, 64));
}

TEST_CASE("nest endpoints sit between the marked points") {
    MapSpec m = fib_map();
    NestPositionCheck pos = check_nest_positions(m, 8, 256);
    CHECK(pos.pass);
    CHECK(pos.failure.empty());
    REQUIRE(pos.return_times.size() == 8);
    CHECK(pos.return_times[0] == 3);
    CHECK(pos.return_times[7] == 89);
}

TEST_CASE("return structure of the first few nest levels") {
    MapSpec m = fib_map();
    PrincipalNest nest = principal_nest(m, 4);
    for (long k = 1; k <= 3; ++k) {
        ReturnStructureCheck rs = check_return_structure(m, nest, k, 10000, 128);
        INFO("level " << k << ": " << rs.failure);
        CHECK(rs.pass);
        CHECK(rs.domain_count == 2);
        CHECK(rs.lateral_has_d);
        CHECK(rs.lateral_has_y);
    }
    CHECK_THROWS_AS(check_return_structure(m, nest, 4, 10000, 128), fibnest::domain_error);
}

TEST_CASE("nest budget guards") {
    MapSpec m = fib_map();
    CHECK_THROWS_AS(principal_nest(m, kMaxNestLevels + 1), fibnest::budget_error);
    CHECK_THROWS_AS(principal_nest(m.at_precision(256), 9), fibnest::budget_error);
    CHECK_THROWS_AS(principal_nest(m, 0), fibnest::domain_error);
}

TEST_CASE("nest classification") {
    MapSpec m = fib_map();
    NestClassification good = classify_by_nest(m, 6);
    CHECK(good.fibonacci);
    CHECK(good.levels_confirmed == 6);
    CHECK(good.reason.empty());

    NestClassification full = classify_by_nest(MapSpec::quadratic(Real::of_double(1.0, 512), 512), 4);
    CHECK_FALSE(full.fibonacci);
    CHECK_FALSE(full.reason.empty());

    NestClassification off = classify_by_nest(MapSpec::quadratic(Real::of_double(0.96, 512), 512), 4);
    CHECK_FALSE(off.fibonacci);

    CHECK_THROWS_AS(classify_by_nest(m, 1), fibnest::domain_error);
}

TEST_CASE("classification matches the cutting-time detector on a small grid") {
    for (double a : {0.58, 0.66, 0.74, 0.82, 0.9, 0.95}) {
        MapSpec m = MapSpec::quadratic(Real::of_double(a, 512), 512);
        NestClassification nc = classify_by_nest(m, 4);
        bool fib = is_fibonacci(m, 6);
        INFO("a = " << a << " reason: " << nc.reason);
        CHECK(nc.fibonacci == fib);
    }
}
