#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fibnest/combinatorics.hpp"
#include "fibnest/errors.hpp"
#include "fibnest/kneading.hpp"
#include "fibnest/map.hpp"
#include "fibnest/nest.hpp"
#include "fibnest/report.hpp"
#include "fibnest/sweep.hpp"

// Verification suites. Each runs a family of finite-depth checks against a
// concrete map, records every clause (with the depth and tolerance it used)
// in a machine-readable report, and summarizes into a single pass flag.
// A failing clause is a verification failure, not an exception; exceptions
// are reserved for computations that could not be carried out.

namespace fibnest {

struct SuiteResult {
    bool pass;
    json report;
};

namespace detail {
inline json suite_skeleton(const std::string& name, const MapSpec& m) {
    json r;
    r["suite"] = name;
    r["map"] = map_json(m);
    r["clauses"] = json::array();
    return r;
}

inline SuiteResult finish(json report) {
    bool pass = true;
    for (const json& c : report["clauses"])
        if (!c.at("pass").get<bool>()) pass = false;
    report["pass"] = pass;
    return {pass, std::move(report)};
}

// Shared precheck: the suites below state facts about Fibonacci maps.
inline bool fibonacci_precheck(json& report, const MapSpec& m, long depth) {
    bool fib = is_fibonacci(m, depth);
    report["clauses"].push_back(json{{"name", "map is Fibonacci to the required depth"},
                                     {"depth", depth},
                                     {"pass", fib}});
    return fib;
}
} // namespace detail

// Orbit-order suite: the integer comparators reproduce the numerically
// computed distances and positions of c_1..c_limit, with every pair of
// distances separated by more than the degeneracy threshold.
inline SuiteResult suite_lemma1(const MapSpec& m, long limit = 150) {
    if (limit < 2) throw domain_error("limit must be >= 2");
    json r = detail::suite_skeleton("lemma1", m);
    r["parameters"] = json{{"limit", limit}};

    std::vector<mpz_class> fib = fib_upto(limit);
    long depth = static_cast<long>(fib.size()) + 2;
    if (!detail::fibonacci_precheck(r, m, depth)) return detail::finish(std::move(r));

    Orbit orb = critical_orbit(m, limit);
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);
    std::vector<Real> dist;
    std::vector<FibSum> sums;
    dist.reserve(static_cast<std::size_t>(limit));
    for (long i = 1; i <= limit; ++i) {
        dist.push_back((orb.at(i) - c).abs());
        sums.push_back(zeckendorf(i));
    }

    long pairs = 0, dist_bad = 0, pos_bad = 0;
    Real min_gap(m.prec);
    bool have_gap = false;
    std::string first_bad;
    for (long i = 1; i <= limit; ++i) {
        for (long j = i + 1; j <= limit; ++j) {
            ++pairs;
            const Real& di = dist[static_cast<std::size_t>(i - 1)];
            const Real& dj = dist[static_cast<std::size_t>(j - 1)];
            Real gap = (di - dj).abs();
            if (!have_gap || gap < min_gap) {
                min_gap = gap;
                have_gap = true;
            }
            auto num_dist = di < dj   ? std::strong_ordering::less
                            : dj < di ? std::strong_ordering::greater
                                      : std::strong_ordering::equal;
            if (compare_abs(sums[static_cast<std::size_t>(i - 1)],
                            sums[static_cast<std::size_t>(j - 1)]) != num_dist)
                ++dist_bad;
            const Real& xi = orb.at(i);
            const Real& xj = orb.at(j);
            auto num_pos = xi < xj   ? std::strong_ordering::less
                           : xj < xi ? std::strong_ordering::greater
                                     : std::strong_ordering::equal;
            if (spatial_compare(sums[static_cast<std::size_t>(i - 1)],
                                sums[static_cast<std::size_t>(j - 1)]) != num_pos)
                ++pos_bad;
            if ((dist_bad || pos_bad) && first_bad.empty())
                first_bad = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        }
    }
    r["clauses"].push_back(json{{"name", "no two orbit distances within the degeneracy threshold"},
                                {"depth", limit},
                                {"tolerance", pow2_json(-static_cast<long>(m.prec) / 2)},
                                {"min_gap", real_json(min_gap)},
                                {"pass", min_gap > theta}});
    r["clauses"].push_back(json{{"name", "distance comparator matches numeric distances"},
                                {"depth", limit},
                                {"pairs", pairs},
                                {"mismatches", dist_bad},
                                {"detail", first_bad},
                                {"pass", dist_bad == 0}});
    r["clauses"].push_back(json{{"name", "spatial comparator matches numeric positions"},
                                {"depth", limit},
                                {"pairs", pairs},
                                {"mismatches", pos_bad},
                                {"detail", first_bad},
                                {"pass", pos_bad == 0}});
    return detail::finish(std::move(r));
}

// Marked-point ordering suite: the chain
// |d_{n+1}| < |u_n| < |y_n| < |z_{n-1}| < |d_n| with definite margins, and
// u_n on the side of d_n.
inline SuiteResult suite_lemma2(const MapSpec& m, long levels = 10, long margin_bits = 256) {
    if (levels < 1) throw domain_error("levels must be >= 1");
    json r = detail::suite_skeleton("lemma2", m);
    r["parameters"] = json{{"levels", levels}};
    if (!detail::fibonacci_precheck(r, m, levels + 2)) return detail::finish(std::move(r));

    MarkedPoints mp = marked_points(m, levels + 2);
    const Real c = m.critical_point();
    const Real margin = Real::pow2(-margin_bits, m.prec);
    for (long n = 1; n <= levels; ++n) {
        auto radius = [&](const Real& x) { return (x - c).abs(); };
        Real chain[5] = {radius(mp.d[static_cast<std::size_t>(n + 1)]),
                         radius(mp.u[static_cast<std::size_t>(n)]),
                         radius(mp.y[static_cast<std::size_t>(n)]),
                         radius(mp.z[static_cast<std::size_t>(n - 1)]),
                         radius(mp.d[static_cast<std::size_t>(n)])};
        Real worst = chain[1] - chain[0];
        for (int i = 1; i < 4; ++i) worst = Real::min(worst, chain[i + 1] - chain[i]);
        bool side_ok = (mp.u[static_cast<std::size_t>(n)] > c) ==
                       (mp.d[static_cast<std::size_t>(n)] > c);
        r["clauses"].push_back(json{{"name", "marked-point ordering chain"},
                                    {"depth", n},
                                    {"tolerance", pow2_json(-margin_bits)},
                                    {"worst_margin", real_json(worst)},
                                    {"sides_match", side_ok},
                                    {"pass", side_ok && worst > margin}});
    }
    return detail::finish(std::move(r));
}

// Orbit-cover suite: every orbit point whose index has at least two
// Fibonacci summands with leading index n lies strictly between d_n and
// y_n; the index S_n + S_{n+2} is the right endpoint itself, exactly.
inline SuiteResult suite_cor1(const MapSpec& m, long limit = 150, long max_lead = 8,
                              long margin_bits = 256) {
    if (limit < 4) throw domain_error("limit must be >= 4");
    json r = detail::suite_skeleton("cor1", m);
    r["parameters"] = json{{"limit", limit}, {"max_lead", max_lead}};
    if (!detail::fibonacci_precheck(r, m, max_lead + 3)) return detail::finish(std::move(r));

    std::vector<mpz_class> fib = fib_numbers(static_cast<std::size_t>(max_lead) + 3);
    auto F = [&fib](long j) { return fib[static_cast<std::size_t>(j)].get_si(); };
    long horizon = std::max(limit, F(max_lead) + F(max_lead + 2));
    Orbit orb = critical_orbit(m, horizon);
    const Real margin = Real::pow2(-margin_bits, m.prec);

    long interior = 0, interior_bad = 0, boundary = 0;
    std::string first_bad;
    for (long idx = 1; idx <= limit; ++idx) {
        FibSum s = zeckendorf(idx);
        if (s.indices.size() < 2) continue;
        long n = s.indices.front();
        if (n > max_lead) continue;
        const Real& d = orb.at(F(n));
        const Real& y = orb.at(F(n) + F(n + 2));
        const Real& x = orb.at(idx);
        if (idx == F(n) + F(n + 2)) {
            ++boundary;
            continue; // x is the endpoint y_n by definition
        }
        Real lo = Real::min(d, y);
        Real hi = Real::max(d, y);
        ++interior;
        if (!(x - lo > margin) || !(hi - x > margin)) {
            ++interior_bad;
            if (first_bad.empty()) first_bad = "index " + std::to_string(idx);
        }
    }
    r["clauses"].push_back(json{{"name", "multi-summand orbit points lie strictly between the marked pair"},
                                {"depth", limit},
                                {"tolerance", pow2_json(-margin_bits)},
                                {"checked", interior},
                                {"mismatches", interior_bad},
                                {"detail", first_bad},
                                {"pass", interior_bad == 0 && interior > 0}});
    r["clauses"].push_back(json{{"name", "indices of the form S_n + S_{n+2} land on the endpoint"},
                                {"depth", limit},
                                {"count", boundary},
                                {"pass", boundary > 0}});
    return detail::finish(std::move(r));
}

namespace detail {
inline json return_structure_clause(const ReturnStructureCheck& rs, long edge_tol_bits) {
    return json{{"name", "first-return structure of the nest level"},
                {"depth", rs.level},
                {"tolerance", pow2_json(-edge_tol_bits)},
                {"domains", rs.domain_count},
                {"central_time", rs.central_time},
                {"lateral_time", rs.lateral_time},
                {"expected_central", rs.expected_central},
                {"expected_lateral", rs.expected_lateral},
                {"central_edge_gap", real_json(rs.central_edge_gap)},
                {"detail", rs.failure},
                {"pass", rs.pass}};
}
} // namespace detail

// Return-structure suite: levels 1..levels of the principal nest decompose
// into exactly two orbit-visible return domains with the stated times, and
// the central domain reproduces the next nest level.
inline SuiteResult suite_thm1(const MapSpec& m, long levels = 8, long orbit_horizon = 10000,
                              long edge_tol_bits = 128) {
    if (levels < 1) throw domain_error("levels must be >= 1");
    json r = detail::suite_skeleton("thm1", m);
    r["parameters"] = json{{"levels", levels}, {"orbit_horizon", orbit_horizon}};
    if (!detail::fibonacci_precheck(r, m, levels + 3)) return detail::finish(std::move(r));

    PrincipalNest nest = principal_nest(m, levels + 1);
    for (long k = 1; k <= levels; ++k) {
        ReturnStructureCheck rs = check_return_structure(m, nest, k, orbit_horizon, edge_tol_bits);
        r["clauses"].push_back(detail::return_structure_clause(rs, edge_tol_bits));
    }
    return detail::finish(std::move(r));
}

// Full structural suite: the return-structure clauses, the exclusion of the
// cutting-time orbit points from their nest levels, and the position of the
// nest endpoints between the marked points.
inline SuiteResult suite_thm3(const MapSpec& m, long levels = 10, long orbit_horizon = 10000,
                              long edge_tol_bits = 128, long margin_bits = 256) {
    if (levels < 3) throw domain_error("levels must be >= 3");
    json r = detail::suite_skeleton("thm3", m);
    r["parameters"] = json{{"levels", levels}, {"orbit_horizon", orbit_horizon}};
    if (!detail::fibonacci_precheck(r, m, levels + 3)) return detail::finish(std::move(r));

    PrincipalNest nest = principal_nest(m, levels + 1);
    for (long k = 1; k <= levels; ++k) {
        ReturnStructureCheck rs = check_return_structure(m, nest, k, orbit_horizon, edge_tol_bits);
        r["clauses"].push_back(detail::return_structure_clause(rs, edge_tol_bits));
    }
    NestPositionCheck pos = check_nest_positions(m, levels, margin_bits);
    json times = json::array();
    for (long t : pos.return_times) times.push_back(t);
    r["clauses"].push_back(json{{"name", "cutting-time orbit points stay outside their levels and "
                                         "endpoints sit between the marked points"},
                                {"depth", pos.levels_checked},
                                {"tolerance", pow2_json(-margin_bits)},
                                {"return_times", times},
                                {"detail", pos.failure},
                                {"pass", pos.pass}});
    return detail::finish(std::move(r));
}

// Return-structure suite on the symmetric intervals spanned by the u-points
// instead of the nest levels: two orbit-visible domains per level with the
// same return times.
inline SuiteResult suite_prop1(const MapSpec& m, long levels = 6, long orbit_horizon = 10000) {
    if (levels < 1) throw domain_error("levels must be >= 1");
    json r = detail::suite_skeleton("prop1", m);
    r["parameters"] = json{{"levels", levels}, {"orbit_horizon", orbit_horizon}};
    if (!detail::fibonacci_precheck(r, m, levels + 3)) return detail::finish(std::move(r));

    MarkedPoints mp = marked_points(m, levels + 2);
    for (long n = 1; n <= levels; ++n) {
        auto [lo, hi] = mp.U(n);
        std::vector<ReturnDomain> doms = return_domains(m, lo, hi, orbit_horizon);
        const ReturnDomain* central = nullptr;
        const ReturnDomain* lateral = nullptr;
        if (doms.size() == 2)
            for (const ReturnDomain& d : doms) (d.contains_critical ? central : lateral) = &d;
        long expected_central = mp.S[static_cast<std::size_t>(n + 1)];
        long expected_lateral = mp.S[static_cast<std::size_t>(n)];
        bool ok = central && lateral && central->return_time == expected_central &&
                  lateral->return_time == expected_lateral;
        r["clauses"].push_back(json{{"name", "first-return structure of the u-point interval"},
                                    {"depth", n},
                                    {"domains", static_cast<long>(doms.size())},
                                    {"central_time", central ? central->return_time : -1},
                                    {"lateral_time", lateral ? lateral->return_time : -1},
                                    {"expected_central", expected_central},
                                    {"expected_lateral", expected_lateral},
                                    {"pass", ok}});
    }
    return detail::finish(std::move(r));
}

// Converse sweep: across a parameter grid (plus the configured map itself),
// the nest-based classifier agrees with the cutting-time detector.
inline SuiteResult suite_converse(const MapSpec& m, long samples = 40, long workers = 1,
                                  long classify_depth = 6, long detector_depth = 8) {
    if (samples < 2) throw domain_error("need at least 2 samples");
    json r = detail::suite_skeleton("converse", m);
    r["parameters"] = json{{"samples", samples},
                           {"classify_depth", classify_depth},
                           {"detector_depth", detector_depth}};

    std::vector<MapSpec> maps;
    Real lo = Real::parse("0.55", m.prec);
    Real span = Real::parse("0.45", m.prec);
    for (long i = 0; i + 1 < samples; ++i) {
        Real a = lo + span * Real::of_si(i, m.prec) / Real::of_si(samples - 2, m.prec);
        maps.push_back(MapSpec::make(a, m.ell, m.prec));
    }
    maps.push_back(m);

    struct Row {
        bool classified;
        long levels;
        std::string reason;
        bool detected;
    };
    std::vector<Row> rows = parallel_map(
        maps,
        [&](const MapSpec& sample) -> Row {
            NestClassification nc = classify_by_nest(sample, classify_depth);
            bool fib = is_fibonacci(sample, detector_depth);
            return {nc.fibonacci, nc.levels_confirmed, nc.reason, fib};
        },
        workers);

    long agree = 0;
    json table = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool ok = rows[i].classified == rows[i].detected;
        if (ok) ++agree;
        table.push_back(json{{"a", real_json(maps[i].a)},
                             {"nest_classifier", rows[i].classified},
                             {"cutting_time_detector", rows[i].detected},
                             {"detail", rows[i].reason},
                             {"agree", ok}});
    }
    r["samples"] = std::move(table);
    r["clauses"].push_back(json{{"name", "nest classifier agrees with the cutting-time detector"},
                                {"depth", classify_depth},
                                {"agreement", std::to_string(agree) + "/" + std::to_string(samples)},
                                {"pass", agree == samples}});
    return detail::finish(std::move(r));
}

// Dispatch by suite token. Zero-valued options mean "suite default".
struct SuiteOptions {
    long levels = 0;
    long limit = 0;
    long samples = 0;
    long workers = 1;
    long orbit_horizon = 10000;
};

inline bool known_suite(const std::string& name) {
    for (const char* s : {"lemma1", "lemma2", "cor1", "thm1", "thm3", "prop1", "converse"})
        if (name == s) return true;
    return false;
}

inline SuiteResult run_suite(const std::string& name, const MapSpec& m,
                             const SuiteOptions& opt = {}) {
    if (name == "lemma1") return suite_lemma1(m, opt.limit > 0 ? opt.limit : 150);
    if (name == "lemma2") return suite_lemma2(m, opt.levels > 0 ? opt.levels : 10);
    if (name == "cor1") return suite_cor1(m, opt.limit > 0 ? opt.limit : 150);
    if (name == "thm1") return suite_thm1(m, opt.levels > 0 ? opt.levels : 8, opt.orbit_horizon);
    if (name == "thm3") return suite_thm3(m, opt.levels > 0 ? opt.levels : 10, opt.orbit_horizon);
    if (name == "prop1") return suite_prop1(m, opt.levels > 0 ? opt.levels : 6, opt.orbit_horizon);
    if (name == "converse")
        return suite_converse(m, opt.samples > 0 ? opt.samples : 40, opt.workers);
    throw domain_error("unknown suite: " + name);
}

} // namespace fibnest
