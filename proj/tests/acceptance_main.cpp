// Acceptance checks, one per command-line argument (1..11). Each prints a
// single PASS/FAIL line and exits 0/1, so the suite doubles as a
// machine-readable gate. Tolerances and grids are pinned here on purpose:
// they are part of the contract, not tunables.

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "fibnest/fibnest.hpp"

using namespace fibnest;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// ---- 1: Fibonacci-sum decompositions are valid and unique ----------------

void enumerate_sums(const std::vector<long>& fib, std::size_t start, long sum, long cap,
                    std::vector<long>& count) {
    for (std::size_t k = start; k < fib.size(); ++k) {
        long next = sum + fib[k];
        if (next > cap) break;
        ++count[static_cast<std::size_t>(next)];
        enumerate_sums(fib, k + 2, next, cap, count);
    }
}

Outcome check_1() {
    for (long m = 1; m <= 100000; ++m) {
        FibSum s = zeckendorf(m);
        if (!s.valid()) return {false, "invalid decomposition at " + std::to_string(m)};
        if (s.value() != m) return {false, "wrong value at " + std::to_string(m)};
    }
    // uniqueness by full enumeration of gap-2 sums
    const long cap = 2000;
    std::vector<long> fib;
    for (const mpz_class& v : fib_upto(cap)) fib.push_back(v.get_si());
    std::vector<long> count(static_cast<std::size_t>(cap) + 1, 0);
    enumerate_sums(fib, 0, 0, cap, count);
    for (long m = 1; m <= cap; ++m)
        if (count[static_cast<std::size_t>(m)] != 1)
            return {false, std::to_string(m) + " has " +
                               std::to_string(count[static_cast<std::size_t>(m)]) +
                               " representations"};
    return {true, "decompositions valid to 100000, unique to 2000"};
}

// ---- 2: the parameter search locks Fibonacci combinatorics ----------------

Outcome check_2() {
    ParamSearchResult base = find_fibonacci_parameter(Real::of_ui(2, 512), 13, 512);
    std::vector<long> expected{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377};
    CuttingSequence cs = cutting_times(base.map, 500);
    if (cs.times != expected)
        return {false, "cutting times within horizon 500 are not the 13 Fibonacci values"};

    ParamSearchResult wide = find_fibonacci_parameter(Real::of_ui(2, 1024), 13, 1024);
    CuttingSequence cs2 = cutting_times(wide.map, 500);
    if (cs2.times != expected) return {false, "1024-bit rerun changes the cutting times"};
    Real diff = (base.map.a - wide.map.a).abs();
    if (!(diff < Real::pow2(-250, 64)))
        return {false, "parameters from the two precisions differ above 2^-250"};
    return {true, "a* = " + base.map.a.to_hex() + ", reruns agree to >= 250 bits"};
}

// ---- 3: tower vs literal preimage construction over a parameter grid ------

Outcome check_3() {
    const long depth = 18;
    for (int i = 0; i < 20; ++i) {
        Real a = Real::parse("0.55", 256) +
                 Real::parse("0.45", 256) * Real::of_si(i, 256) / Real::of_si(19, 256);
        MapSpec m = MapSpec::quadratic(a, 256);
        CuttingSequence tower = cutting_times(m, depth);
        CuttingSequence oracle = preimage_cutting_times(m, depth);
        if (tower.times != oracle.times)
            return {false, "disagreement at grid point " + std::to_string(i) +
                               " (a = " + a.to_hex() + ")"};
    }
    return {true, "20 parameters, both constructions agree to depth 18"};
}

// ---- 4..9: suites at the locked parameter ---------------------------------

Outcome from_suite(const SuiteResult& res) {
    if (res.pass) return {true, "all clauses hold"};
    for (const json& c : res.report.at("clauses"))
        if (!c.at("pass").get<bool>())
            return {false, "first failing clause: " + c.at("name").get<std::string>()};
    return {false, "suite failed"};
}

Outcome check_4() { return from_suite(suite_lemma1(constants::quadratic_fibonacci_map(512), 150)); }

Outcome check_5() {
    return from_suite(suite_cor1(constants::quadratic_fibonacci_map(512), 150, 8, 256));
}

Outcome check_6() {
    return from_suite(suite_lemma2(constants::quadratic_fibonacci_map(512), 10, 256));
}

Outcome check_7() {
    return from_suite(suite_thm1(constants::quadratic_fibonacci_map(512), 8, 10000, 128));
}

Outcome check_8() {
    return from_suite(suite_prop1(constants::quadratic_fibonacci_map(512), 6, 10000));
}

Outcome check_9() {
    NestPositionCheck pos = check_nest_positions(constants::quadratic_fibonacci_map(512), 10, 256);
    return {pos.pass, pos.pass ? "endpoints ordered against the marked points to level 10"
                               : pos.failure};
}

// ---- 10: the nest classifier agrees with the cutting-time detector --------

Outcome check_10() {
    std::vector<MapSpec> maps;
    for (int i = 0; i <= 38; ++i) {
        Real a = Real::parse("0.55", 512) +
                 Real::parse("0.45", 512) * Real::of_si(i, 512) / Real::of_si(38, 512);
        maps.push_back(MapSpec::quadratic(a, 512));
    }
    maps.push_back(constants::quadratic_fibonacci_map(512));
    long fib_count = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        NestClassification nc = classify_by_nest(maps[i], 6);
        bool detected = is_fibonacci(maps[i], 8);
        if (nc.fibonacci != detected)
            return {false, "sample " + std::to_string(i) + " (a = " + maps[i].a.to_hex() +
                               "): classifier says " + (nc.fibonacci ? "yes" : "no") +
                               ", detector says " + (detected ? "yes" : "no")};
        if (detected) ++fib_count;
    }
    return {true, "40 samples agree (" + std::to_string(fib_count) + " Fibonacci)"};
}

// ---- 11: byte determinism of every suite -----------------------------------

Outcome check_11() {
    MapSpec m = constants::quadratic_fibonacci_map(512);
    auto run_all = [&m](long converse_workers) {
        std::string blob;
        blob += dump_report(suite_lemma1(m, 40).report);
        blob += dump_report(suite_lemma2(m, 6).report);
        blob += dump_report(suite_cor1(m, 60, 5).report);
        blob += dump_report(suite_thm1(m, 3).report);
        blob += dump_report(suite_thm3(m, 4).report);
        blob += dump_report(suite_prop1(m, 2).report);
        blob += dump_report(suite_converse(m, 8, converse_workers, 3, 5).report);
        return blob;
    };
    std::string first = run_all(1);
    std::string second = run_all(1);
    if (first != second) return {false, "two serial runs differ"};
    std::string threaded = run_all(8);
    if (first != threaded) return {false, "8-worker run differs from the serial run"};
    return {true, "all seven suites byte-identical across runs and worker counts"};
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <check number 1..11>\n", argv[0]);
        return 64;
    }
    int n = std::atoi(argv[1]);
    const char* names[] = {
        "",
        "Fibonacci-sum decompositions valid and unique",
        "parameter search locks the 13 Fibonacci cutting times, precision-stable",
        "tower and literal preimage cutting times agree on a 20-point grid",
        "orbit-order comparators match 512-bit numerics for indices up to 150",
        "multi-summand orbit points lie in their marked intervals",
        "marked-point ordering chain holds for levels 1..10",
        "two-domain return structure with matched edges for levels 1..8",
        "two-domain return structure on the u-point intervals for levels 1..6",
        "nest endpoints ordered against the marked points for levels up to 10",
        "nest classifier agrees with the cutting-time detector on 40 samples",
        "verification suites are byte-deterministic",
    };
    if (n < 1 || n > 11) {
        std::fprintf(stderr, "check number out of range\n");
        return 64;
    }
    Outcome out{false, "not run"};
    try {
        switch (n) {
            case 1: out = check_1(); break;
            case 2: out = check_2(); break;
            case 3: out = check_3(); break;
            case 4: out = check_4(); break;
            case 5: out = check_5(); break;
            case 6: out = check_6(); break;
            case 7: out = check_7(); break;
            case 8: out = check_8(); break;
            case 9: out = check_9(); break;
            case 10: out = check_10(); break;
            case 11: out = check_11(); break;
        }
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s: %d %s (%s)\n", out.pass ? "PASS" : "FAIL", n, names[n], out.detail.c_str());
    return out.pass ? 0 : 1;
}
