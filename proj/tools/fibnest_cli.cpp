// Command-line surface for the library: parameter finding, tables,
// verification suites, and first-return-map plots.
//
// Exit codes: 0 success / all clauses pass, 1 verification failure,
// 2 computational failure, 64 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibnest/fibnest.hpp"

namespace {

using namespace fibnest;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitComputeFail = 2;
constexpr int kExitUsage = 64;

long default_precision() {
    if (const char* env = std::getenv("FIBNEST_PRECISION")) {
        char* end = nullptr;
        long p = std::strtol(env, &end, 10);
        if (end && *end == '\0' && p >= 128 && p <= 65536) return p;
    }
    return 512;
}

struct CommonOpts {
    std::string a = "auto";
    std::string ell = "2";
    long precision = default_precision();
    std::string format; // empty = per-command default
    std::string output;

    std::string format_or(const char* dflt) const { return format.empty() ? dflt : format; }
};

MapSpec resolve_map(const CommonOpts& o, long find_depth = 13) {
    Real ell = Real::parse(o.ell, static_cast<mpfr_prec_t>(o.precision));
    if (o.a == "auto")
        return find_fibonacci_parameter(ell, find_depth, static_cast<mpfr_prec_t>(o.precision))
            .map;
    Real a = Real::parse(o.a, static_cast<mpfr_prec_t>(o.precision));
    return MapSpec::make(a, ell, static_cast<mpfr_prec_t>(o.precision));
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw fibnest::error("cannot open output file: " + o.output);
    f << text;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        out += ch;
    }
    return out + "\"";
}

// --- subcommand handlers ----------------------------------------------------

int cmd_find_param(const CommonOpts& o, long depth) {
    Real ell = Real::parse(o.ell, static_cast<mpfr_prec_t>(o.precision));
    ParamSearchResult res =
        find_fibonacci_parameter(ell, depth, static_cast<mpfr_prec_t>(o.precision));
    json out;
    out["a_hex"] = res.map.a.to_hex();
    out["ell"] = res.map.ell.to_hex();
    out["verified_prefix"] = res.verified_prefix;
    out["precision"] = o.precision;
    emit(o, dump_report(out));
    return kExitPass;
}

int cmd_cutting_times(const CommonOpts& o, long horizon, long oracle_depth) {
    MapSpec m = resolve_map(o);
    CuttingSequence cs = cutting_times(m, horizon);
    std::optional<CuttingSequence> oracle;
    if (oracle_depth > 0) oracle = preimage_cutting_times(m, oracle_depth);
    if (o.format_or("csv") == "json") {
        json out;
        out["map"] = map_json(m);
        out["horizon"] = horizon;
        out["times"] = cs.times;
        if (oracle) {
            out["preimage_oracle_depth"] = oracle_depth;
            out["preimage_oracle_times"] = oracle->times;
        }
        emit(o, dump_report(out));
    } else {
        std::ostringstream s;
        s << "index,time\n";
        for (std::size_t i = 0; i < cs.times.size(); ++i) s << i << "," << cs.times[i] << "\n";
        if (oracle) {
            s << "oracle_index,oracle_time\n";
            for (std::size_t i = 0; i < oracle->times.size(); ++i)
                s << i << "," << oracle->times[i] << "\n";
        }
        emit(o, s.str());
    }
    return kExitPass;
}

int cmd_closest_returns(const CommonOpts& o, long horizon) {
    MapSpec m = resolve_map(o);
    ClosestReturns cr = closest_returns(m, horizon);
    if (o.format_or("csv") == "json") {
        json out;
        out["map"] = map_json(m);
        out["horizon"] = horizon;
        json rows = json::array();
        for (std::size_t i = 0; i < cr.times.size(); ++i)
            rows.push_back(json{{"time", cr.times[i]}, {"distance", real_json(cr.distances[i])}});
        out["returns"] = std::move(rows);
        emit(o, dump_report(out));
    } else {
        std::ostringstream s;
        s << "index,time,distance\n";
        for (std::size_t i = 0; i < cr.times.size(); ++i)
            s << i << "," << cr.times[i] << "," << cr.distances[i].to_hex() << "\n";
        emit(o, s.str());
    }
    return kExitPass;
}

int cmd_orbit_order(const CommonOpts& o, long max_index) {
    MapSpec m = resolve_map(o);
    Orbit orb = critical_orbit(m, max_index);
    const Real c = m.critical_point();

    std::vector<FibSum> sums;
    for (long i = 1; i <= max_index; ++i) sums.push_back(zeckendorf(i));
    // 1-based ranks under the two combinatorial orders.
    std::vector<long> by_pos(static_cast<std::size_t>(max_index)),
        by_dist(static_cast<std::size_t>(max_index));
    for (long i = 0; i < max_index; ++i) by_pos[static_cast<std::size_t>(i)] = i;
    by_dist = by_pos;
    std::sort(by_pos.begin(), by_pos.end(), [&](long x, long y) {
        return spatial_compare(sums[static_cast<std::size_t>(x)],
                               sums[static_cast<std::size_t>(y)]) < 0;
    });
    std::sort(by_dist.begin(), by_dist.end(), [&](long x, long y) {
        return compare_abs(sums[static_cast<std::size_t>(x)],
                           sums[static_cast<std::size_t>(y)]) < 0;
    });
    std::vector<long> pos_rank(static_cast<std::size_t>(max_index)),
        dist_rank(static_cast<std::size_t>(max_index));
    for (long r = 0; r < max_index; ++r) {
        pos_rank[static_cast<std::size_t>(by_pos[static_cast<std::size_t>(r)])] = r + 1;
        dist_rank[static_cast<std::size_t>(by_dist[static_cast<std::size_t>(r)])] = r + 1;
    }

    if (o.format_or("csv") == "json") {
        json out;
        out["map"] = map_json(m);
        out["max_index"] = max_index;
        json rows = json::array();
        for (long i = 1; i <= max_index; ++i) {
            const FibSum& s = sums[static_cast<std::size_t>(i - 1)];
            rows.push_back(json{{"m", i},
                                {"fib_sum", s.str()},
                                {"side", to_string(side_of(s))},
                                {"distance_rank", dist_rank[static_cast<std::size_t>(i - 1)]},
                                {"position_rank", pos_rank[static_cast<std::size_t>(i - 1)]},
                                {"distance", real_json((orb.at(i) - c).abs())},
                                {"position", real_json(orb.at(i))}});
        }
        out["rows"] = std::move(rows);
        emit(o, dump_report(out));
    } else {
        std::ostringstream s;
        s << "m,fib_sum,side,distance_rank,position_rank,distance,position\n";
        for (long i = 1; i <= max_index; ++i) {
            const FibSum& fs = sums[static_cast<std::size_t>(i - 1)];
            s << i << "," << csv_escape(fs.str()) << "," << to_string(side_of(fs)) << ","
              << dist_rank[static_cast<std::size_t>(i - 1)] << ","
              << pos_rank[static_cast<std::size_t>(i - 1)] << ","
              << (orb.at(i) - c).abs().to_hex() << "," << orb.at(i).to_hex() << "\n";
        }
        emit(o, s.str());
    }
    return kExitPass;
}

int cmd_marked_points(const CommonOpts& o, long levels) {
    MapSpec m = resolve_map(o);
    MarkedPoints mp = marked_points(m, levels + 1);
    if (o.format_or("csv") == "json") {
        json out;
        out["map"] = map_json(m);
        out["levels"] = levels;
        json rows = json::array();
        for (long n = 0; n <= levels; ++n) {
            auto i = static_cast<std::size_t>(n);
            rows.push_back(json{{"n", n},
                                {"S", mp.S[i]},
                                {"d", real_json(mp.d[i])},
                                {"y", real_json(mp.y[i])},
                                {"z", real_json(mp.z[i])},
                                {"u", real_json(mp.u[i])}});
        }
        out["rows"] = std::move(rows);
        emit(o, dump_report(out));
    } else {
        std::ostringstream s;
        s << "n,S,d,y,z,u\n";
        for (long n = 0; n <= levels; ++n) {
            auto i = static_cast<std::size_t>(n);
            s << n << "," << mp.S[i] << "," << mp.d[i].to_hex() << "," << mp.y[i].to_hex() << ","
              << mp.z[i].to_hex() << "," << mp.u[i].to_hex() << "\n";
        }
        emit(o, s.str());
    }
    return kExitPass;
}

int cmd_nest(const CommonOpts& o, long levels, long return_cap) {
    MapSpec m = resolve_map(o);
    PrincipalNest nest = principal_nest(m, levels, return_cap);
    std::vector<long> S = detail::cutting_time_values(m, levels + 2);
    Orbit orb = critical_orbit_prefix(m, S.back());
    const Real theta = degeneracy_threshold(m.prec);

    auto lateral_time = [&](long k) -> long {
        if (k + 1 >= static_cast<long>(S.size())) return -1;
        long idx = S[static_cast<std::size_t>(k + 1)];
        if (idx > orb.length()) return -1;
        const NestLevel& lvl = nest.levels[static_cast<std::size_t>(k - 1)];
        Real lo = Real::min(lvl.i, lvl.i_hat);
        Real hi = Real::max(lvl.i, lvl.i_hat);
        try {
            if (!locate_strict(orb.at(idx), lo, hi, theta)) return -1;
            EntryResult e = first_entry(m, orb.at(idx), lo, hi, return_cap);
            return e.entered ? e.time : -1;
        } catch (const degeneracy_error&) {
            return -1;
        }
    };

    if (o.format_or("csv") == "json") {
        json out;
        out["map"] = map_json(m);
        out["levels"] = levels;
        json rows = json::array();
        for (long k = 1; k <= levels; ++k) {
            const NestLevel& lvl = nest.levels[static_cast<std::size_t>(k - 1)];
            rows.push_back(json{{"k", k},
                                {"side", to_string(lvl.side)},
                                {"i", real_json(lvl.i)},
                                {"i_hat", real_json(lvl.i_hat)},
                                {"central_time", lvl.T},
                                {"lateral_time", lateral_time(k)}});
        }
        out["rows"] = std::move(rows);
        emit(o, dump_report(out));
    } else {
        std::ostringstream s;
        s << "k,side,i,i_hat,central_time,lateral_time\n";
        for (long k = 1; k <= levels; ++k) {
            const NestLevel& lvl = nest.levels[static_cast<std::size_t>(k - 1)];
            s << k << "," << to_string(lvl.side) << "," << lvl.i.to_hex() << ","
              << lvl.i_hat.to_hex() << "," << lvl.T << "," << lateral_time(k) << "\n";
        }
        emit(o, s.str());
    }
    return kExitPass;
}

int cmd_verify(const CommonOpts& o, const std::string& suite, const SuiteOptions& opt) {
    MapSpec m = resolve_map(o);
    SuiteResult res = run_suite(suite, m, opt);
    emit(o, dump_report(res.report));
    return res.pass ? kExitPass : kExitVerifyFail;
}

int cmd_plot(const CommonOpts& o, long level, long orbit_horizon, const std::string& csv_path) {
    constexpr long kSamples = 256;
    MapSpec m = resolve_map(o);
    PrincipalNest nest = principal_nest(m, level + 1);
    const NestLevel& lvl = nest.levels[static_cast<std::size_t>(level - 1)];
    Real lo = Real::min(lvl.i, lvl.i_hat);
    Real hi = Real::max(lvl.i, lvl.i_hat);
    std::vector<ReturnDomain> doms = return_domains(m, lo, hi, orbit_horizon);

    struct Sample {
        Real x, y;
    };
    struct Branch {
        long return_time;
        bool central;
        std::vector<Sample> pts;
    };
    std::vector<Branch> branches;
    for (const ReturnDomain& d : doms) {
        Branch b{d.return_time, d.contains_critical, {}};
        Real width = d.hi_inner - d.lo_inner;
        for (long i = 0; i < kSamples; ++i) {
            Real t = Real::of_si(i, m.prec) / Real::of_si(kSamples - 1, m.prec);
            Real x = d.lo_inner + width * t;
            b.pts.push_back({x, eval_n(m, x, d.return_time)});
        }
        branches.push_back(std::move(b));
    }

    // Marked orbit points to highlight, when they fall inside a domain.
    std::vector<long> S = detail::cutting_time_values(m, level + 4);
    Orbit orb = critical_orbit(m, S[static_cast<std::size_t>(level + 1)] +
                                      S[static_cast<std::size_t>(level + 3)]);
    struct Mark {
        std::string name;
        Real x, y;
    };
    std::vector<Mark> marks;
    auto add_mark = [&](const std::string& name, const Real& x) {
        for (const ReturnDomain& d : doms)
            if (d.lo_inner < x && x < d.hi_inner) {
                marks.push_back({name, x, eval_n(m, x, d.return_time)});
                return;
            }
    };
    add_mark("c", m.critical_point());
    add_mark("d_next", orb.at(S[static_cast<std::size_t>(level + 1)]));
    add_mark("y_next", orb.at(S[static_cast<std::size_t>(level + 1)] +
                              S[static_cast<std::size_t>(level + 3)]));

    std::ostringstream csv;
    csv << "domain,return_time,x,y\n";
    for (std::size_t bi = 0; bi < branches.size(); ++bi)
        for (const Sample& p : branches[bi].pts)
            csv << bi << "," << branches[bi].return_time << "," << p.x.to_hex() << ","
                << p.y.to_hex() << "\n";

    if (o.format_or("svg") == "csv") {
        emit(o, csv.str());
        return kExitPass;
    }

    // Self-contained SVG: branch polylines, the diagonal, and the marks.
    double wlo = lo.to_double(), whi = hi.to_double(), span = whi - wlo;
    const double box = 560.0, margin = 40.0;
    auto px = [&](double v) { return margin + (v - wlo) / span * box; };
    auto py = [&](double v) { return margin + (whi - v) / span * box; };
    char buf[160];
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                  "stroke=\"#444444\" stroke-width=\"1\"/>\n",
                  margin, margin, box, box);
    svg << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999999\" "
                  "stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n",
                  px(wlo), py(wlo), px(whi), py(whi));
    svg << buf;
    for (const Branch& b : branches) {
        svg << "<polyline fill=\"none\" stroke=\"" << (b.central ? "#d62728" : "#1f77b4")
            << "\" stroke-width=\"1.5\" points=\"";
        for (const Sample& p : b.pts) {
            std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(p.x.to_double()),
                          py(p.y.to_double()));
            svg << buf;
        }
        svg << "\"/>\n";
    }
    for (const Mark& mk : marks) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#2ca02c\"><title>%s"
                      "</title></circle>\n",
                      px(mk.x.to_double()), py(mk.y.to_double()), mk.name.c_str());
        svg << buf;
    }
    svg << "</svg>\n";
    emit(o, svg.str());
    if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw fibnest::error("cannot open output file: " + csv_path);
        f << csv.str();
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fibonacci unimodal map: combinatorics, nests, and verifiers"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config");

    CommonOpts common;
    app.add_option("--a", common.a, "map parameter in (1/2, 1], or 'auto' to search");
    app.add_option("--ell", common.ell, "critical order (>= 1)");
    app.add_option("--precision", common.precision, "working precision in bits")
        ->check(CLI::Range(128L, 65536L));
    app.add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--output", common.output, "output file (default stdout)");

    long depth = 13, horizon = 377, oracle_depth = 0, max_index = 40, levels = 8;
    long plot_level = 1, orbit_horizon = 10000, return_cap = 100000;
    std::string suite, csv_path;
    SuiteOptions sopt;

    CLI::App* find = app.add_subcommand("find-param", "bisect for the Fibonacci parameter");
    find->add_option("--depth", depth, "Fibonacci depth to lock")->check(CLI::Range(1L, 64L));

    CLI::App* cut = app.add_subcommand("cutting-times", "cutting times of the critical point");
    cut->add_option("--horizon", horizon, "largest iterate examined")
        ->check(CLI::Range(1L, 1000000L));
    cut->add_option("--oracle-depth", oracle_depth,
                    "also run the literal preimage construction to this depth")
        ->check(CLI::Range(1L, 20L));

    CLI::App* cls = app.add_subcommand("closest-returns", "strict closest returns of the orbit");
    cls->add_option("--horizon", horizon, "largest iterate examined")
        ->check(CLI::Range(1L, 1000000L));

    CLI::App* ord = app.add_subcommand("orbit-order", "combinatorial order of the orbit points");
    ord->add_option("--max", max_index, "largest orbit index")->check(CLI::Range(2L, 5000L));

    CLI::App* mkd = app.add_subcommand("marked-points", "marked points d, y, z, u per level");
    mkd->add_option("--levels", levels, "highest level")->check(CLI::Range(1L, 11L));

    CLI::App* nst = app.add_subcommand("nest", "principal nest levels and return times");
    nst->add_option("--levels", levels, "number of levels")->check(CLI::Range(1L, 12L));
    nst->add_option("--return-cap", return_cap, "iteration cap for return times")
        ->check(CLI::Range(1L, 100000000L));

    CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite, "lemma1|lemma2|cor1|thm1|thm3|prop1|converse")->required();
    ver->add_option("--levels", sopt.levels, "levels to verify")->check(CLI::Range(1L, 12L));
    ver->add_option("--limit", sopt.limit, "orbit index limit")->check(CLI::Range(2L, 5000L));
    ver->add_option("--samples", sopt.samples, "sweep sample count")
        ->check(CLI::Range(2L, 10000L));
    ver->add_option("--workers", sopt.workers, "sweep worker threads")->check(CLI::Range(1L, 64L));
    ver->add_option("--orbit-horizon", sopt.orbit_horizon, "orbit witness horizon")
        ->check(CLI::Range(10L, 10000000L));

    CLI::App* plt = app.add_subcommand("plot-return-map", "first-return map on a nest level");
    plt->add_option("--level", plot_level, "nest level")->check(CLI::Range(1L, 11L));
    plt->add_option("--orbit-horizon", orbit_horizon, "orbit witness horizon")
        ->check(CLI::Range(10L, 10000000L));
    plt->add_option("--csv", csv_path, "also write the sampled points to this CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (find->parsed()) return cmd_find_param(common, depth);
        if (cut->parsed()) return cmd_cutting_times(common, horizon, oracle_depth);
        if (cls->parsed()) return cmd_closest_returns(common, horizon);
        if (ord->parsed()) return cmd_orbit_order(common, max_index);
        if (mkd->parsed()) return cmd_marked_points(common, levels);
        if (nst->parsed()) return cmd_nest(common, levels, return_cap);
        if (ver->parsed()) {
            if (!fibnest::known_suite(suite)) {
                std::cerr << "unknown suite: " << suite << "\n";
                return kExitUsage;
            }
            return cmd_verify(common, suite, sopt);
        }
        if (plt->parsed()) return cmd_plot(common, plot_level, orbit_horizon, csv_path);
        return kExitUsage;
    } catch (const fibnest::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputeFail;
    }
}
