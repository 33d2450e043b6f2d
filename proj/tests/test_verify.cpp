#include <catch2/catch_amalgamated.hpp>

#include "fibnest/constants.hpp"
#include "fibnest/sweep.hpp"
#include "fibnest/verify.hpp"

using namespace fibnest;

namespace {
MapSpec fib_map(mpfr_prec_t prec = 512) { return constants::quadratic_fibonacci_map(prec); }
} // namespace

TEST_CASE("deterministic parallel map") {
    std::vector<long> items{1, 2, 3, 4, 5, 6, 7};
    auto fn = [](long x) { return x * x; };
    auto serial = parallel_map(items, fn, 1);
    auto threaded = parallel_map(items, fn, 4);
    CHECK(serial == threaded);
    CHECK(serial == std::vector<long>{1, 4, 9, 16, 25, 36, 49});
    CHECK_THROWS_AS(parallel_map(items, fn, 0), fibnest::domain_error);

    auto thrower = [](long x) -> long {
        if (x % 2 == 0) throw fibnest::domain_error("even input " + std::to_string(x));
        return x;
    };
    // the lowest-index exception is the one that surfaces
    try {
        parallel_map(items, thrower, 4);
        FAIL("expected an exception");
    } catch (const fibnest::domain_error& e) {
        CHECK(std::string(e.what()) == "even input 2");
    }
}

TEST_CASE("json real serialization round-trips") {
    Real x = Real::parse("0x1.deadbeefcafep-3", 256);
    json j = real_json(x);
    CHECK(j.at("precision").get<long>() == 256);
    Real back = Real::parse(j.at("hex").get<std::string>(), 256);
    CHECK(back == x);
    json p = pow2_json(-128);
    CHECK(p.at("log2").get<long>() == -128);
    CHECK(Real::parse(p.at("hex").get<std::string>(), 64) == Real::pow2(-128, 64));
}

TEST_CASE("orbit-order suite passes at the Fibonacci parameter") {
    SuiteResult res = suite_lemma1(fib_map(), 60);
    INFO(res.report.dump(2));
    CHECK(res.pass);
    CHECK(res.report.at("pass").get<bool>());
    CHECK(res.report.at("suite").get<std::string>() == "lemma1");
    REQUIRE(res.report.at("clauses").size() == 4);
    for (const json& c : res.report.at("clauses")) CHECK(c.at("pass").get<bool>());
}

TEST_CASE("marked-point suite passes at the Fibonacci parameter and fails off it") {
    SuiteResult good = suite_lemma2(fib_map(), 6);
    INFO(good.report.dump(2));
    CHECK(good.pass);

    MapSpec full = MapSpec::quadratic(Real::of_double(1.0, 256), 256);
    SuiteResult bad = suite_lemma2(full, 6);
    CHECK_FALSE(bad.pass);
    const json& first = bad.report.at("clauses").at(0);
    CHECK(first.at("name").get<std::string>() == "map is Fibonacci to the required depth");
    CHECK_FALSE(first.at("pass").get<bool>());
    // the precheck short-circuits: no further clauses were attempted
    CHECK(bad.report.at("clauses").size() == 1);
}

TEST_CASE("orbit-cover suite sees both interior and endpoint indices") {
    SuiteResult res = suite_cor1(fib_map(), 100, 6);
    INFO(res.report.dump(2));
    CHECK(res.pass);
    bool saw_boundary = false;
    for (const json& c : res.report.at("clauses"))
        if (c.contains("count") && c.at("count").get<long>() >= 1) saw_boundary = true;
    CHECK(saw_boundary);
}

TEST_CASE("return-structure suite reports the expected times") {
    SuiteResult res = suite_thm1(fib_map(), 3);
    INFO(res.report.dump(2));
    CHECK(res.pass);
    const json& clauses = res.report.at("clauses");
    REQUIRE(clauses.size() == 4); // precheck + three levels
    long expect_central[] = {3, 5, 8};
    long expect_lateral[] = {2, 3, 5};
    for (int k = 0; k < 3; ++k) {
        const json& c = clauses.at(static_cast<std::size_t>(k + 1));
        CHECK(c.at("central_time").get<long>() == expect_central[k]);
        CHECK(c.at("lateral_time").get<long>() == expect_lateral[k]);
        CHECK(c.at("pass").get<bool>());
    }
}

TEST_CASE("u-interval suite passes at the Fibonacci parameter") {
    SuiteResult res = suite_prop1(fib_map(), 2);
    INFO(res.report.dump(2));
    CHECK(res.pass);
}

TEST_CASE("combined structural suite passes at the Fibonacci parameter") {
    SuiteResult res = suite_thm3(fib_map(), 4);
    INFO(res.report.dump(2));
    CHECK(res.pass);
    // precheck + four return-structure clauses + one position clause
    CHECK(res.report.at("clauses").size() == 6);
}

TEST_CASE("converse sweep agrees across worker counts byte for byte") {
    MapSpec m = fib_map();
    SuiteResult one = suite_converse(m, 8, 1, 3, 5);
    SuiteResult two = suite_converse(m, 8, 2, 3, 5);
    INFO(one.report.dump(2));
    CHECK(one.pass);
    CHECK(two.pass);
    CHECK(dump_report(one.report) == dump_report(two.report));
    CHECK(one.report.at("samples").size() == 8);
    // the configured map itself is the last sample and must be detected
    const json& self = one.report.at("samples").at(7);
    CHECK(self.at("nest_classifier").get<bool>());
    CHECK(self.at("cutting_time_detector").get<bool>());
}

TEST_CASE("suite dispatch") {
    CHECK(known_suite("lemma1"));
    CHECK(known_suite("converse"));
    CHECK_FALSE(known_suite("lemma3"));
    CHECK_THROWS_AS(run_suite("lemma3", fib_map()), fibnest::domain_error);
    SuiteOptions opt;
    opt.levels = 4;
    SuiteResult res = run_suite("lemma2", fib_map(), opt);
    CHECK(res.pass);
    CHECK(res.report.at("parameters").at("levels").get<long>() == 4);
}
