#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fibnest/combinatorics.hpp"
#include "fibnest/errors.hpp"
#include "fibnest/intervals.hpp"
#include "fibnest/kneading.hpp"
#include "fibnest/map.hpp"
#include "fibnest/real.hpp"
#include "fibnest/solve.hpp"

// Geometry around the critical point: the marked orbit points and their
// companions obtained by pulling the critical point (or an earlier marked
// point) back along the central branch of f^{S_n}, the nested sequence of
// symmetric intervals generated by first returns of c, and the decomposition
// of such an interval into domains of its first-return map.

namespace fibnest {

inline constexpr long kMaxNestLevels = 12;
inline constexpr long kBitsPerNestLevel = 40;

namespace detail {
// Cutting-time values as machine integers, growing the tower horizon until
// `count` of them are available.
inline std::vector<long> cutting_time_values(const MapSpec& m, long count) {
    long horizon = 64;
    for (;;) {
        CuttingSequence cs = cutting_times(m, horizon);
        if (static_cast<long>(cs.times.size()) >= count) {
            cs.times.resize(static_cast<std::size_t>(count));
            return cs.times;
        }
        if (horizon > (1L << 22))
            throw budget_error("cutting times accumulate too slowly for the requested count");
        horizon *= 2;
    }
}

// Extend the sequence z_0 < z_1 < ... < c of central-branch preimages of c:
// f^{S_n}(z_n) = c with z_n in (z_{n-1}, c), seeded by the direct preimage
// z_0 of c below c. The bracket endpoints map to points on opposite sides
// of c, and f^{S_n} is monotone there, so bisection applies.
inline void extend_z_points(const MapSpec& m, const std::vector<long>& S,
                            std::vector<Real>& z, long count) {
    const Real c = m.critical_point();
    if (z.empty() && count > 0) z.push_back(preimage_pair(m, c).first);
    while (static_cast<long>(z.size()) < count) {
        long n = static_cast<long>(z.size());
        if (n >= static_cast<long>(S.size()))
            throw insufficient_data_error("not enough cutting times for the requested pullbacks");
        z.push_back(monotone_solve(m, S[static_cast<std::size_t>(n)], c, z.back(), c));
    }
}
} // namespace detail

// Orbit points d_n = c at time S_n and y_n = c at time S_n + S_{n+2},
// together with the pullback families z_n (central-branch preimages of c)
// and u_n (pullbacks of the orientation-reversing fixed point q).
struct MarkedPoints {
    std::vector<long> S;   // cutting-time values S_0 .. S_{count+1}
    std::vector<Real> d;   // d[n] = orbit value at S_n
    std::vector<Real> y;   // y[n] = orbit value at S_n + S_{n+2}
    std::vector<Real> z;   // f^{S_n}(z[n]) = c, increasing towards c
    std::vector<Real> u;   // u[0] = q, u[1] = 1-q, f^{S_n}(u[n+1]) = u[n]
    long count;

    // The symmetric interval spanned by u_n and its mirror.
    std::pair<Real, Real> U(long n) const {
        const Real& x = u.at(static_cast<std::size_t>(n));
        Real x2 = symmetric_point(x);
        return x < x2 ? std::pair<Real, Real>{x, x2} : std::pair<Real, Real>{x2, x};
    }
};

inline MarkedPoints marked_points(const MapSpec& m, long count) {
    if (count < 2) throw domain_error("marked-point count must be >= 2");
    if (count > kMaxNestLevels)
        throw budget_error("marked-point depth beyond the level budget");
    if (m.prec < kBitsPerNestLevel * count)
        throw budget_error("marked-point depth beyond the precision budget");

    MarkedPoints mp;
    mp.count = count;
    mp.S = detail::cutting_time_values(m, count + 2);
    const Real c = m.critical_point();

    long horizon = mp.S[static_cast<std::size_t>(count - 1)] +
                   mp.S[static_cast<std::size_t>(count + 1)];
    Orbit orb = critical_orbit(m, horizon);
    for (long n = 0; n < count; ++n) {
        mp.d.push_back(orb.at(mp.S[static_cast<std::size_t>(n)]));
        mp.y.push_back(orb.at(mp.S[static_cast<std::size_t>(n)] +
                              mp.S[static_cast<std::size_t>(n + 2)]));
    }

    detail::extend_z_points(m, mp.S, mp.z, count);

    Real q = reversing_fixed_point(m);
    mp.u.push_back(q);
    mp.u.push_back(symmetric_point(q));
    for (long n = 1; n + 1 < count; ++n) {
        const Real& prev = mp.u.back();
        Real x = monotone_solve(m, mp.S[static_cast<std::size_t>(n)], prev,
                                Real::min(prev, c), Real::max(prev, c));
        // Both x and its mirror solve the equation; keep the one on the side
        // of the orbit point d_{n+1} it shadows.
        bool d_right = mp.d[static_cast<std::size_t>(n + 1)] > c;
        bool x_right = x > c;
        mp.u.push_back(d_right == x_right ? x : symmetric_point(x));
    }
    return mp;
}

// A symmetric interval (lo, hi) is nice when the forward orbits of its
// endpoints never re-enter it. Landing within the degeneracy threshold of
// an endpoint is recorded as grazing, not as a violation: the endpoints of
// the intervals built here map onto each other by design.
struct NiceCheck {
    bool nice;
    long violation_time; // first time an endpoint orbit is strictly inside
    long grazing_count;
};

inline NiceCheck is_nice(const MapSpec& m, const Real& lo, const Real& hi, long horizon) {
    const Real theta = degeneracy_threshold(m.prec);
    NiceCheck out{true, 0, 0};
    for (Real x : {lo, hi}) {
        for (long t = 1; t <= horizon; ++t) {
            x = eval(m, x);
            // A landing within the threshold is identified with the endpoint
            // itself; continuing from the exact endpoint keeps a repelling
            // fixed endpoint from drifting off its own orbit.
            if ((x - lo).abs() < theta) {
                ++out.grazing_count;
                x = lo;
                continue;
            }
            if ((x - hi).abs() < theta) {
                ++out.grazing_count;
                x = hi;
                continue;
            }
            if (lo < x && x < hi) {
                if (out.nice || t < out.violation_time) out.violation_time = t;
                out.nice = false;
                break;
            }
        }
    }
    return out;
}

// First time the forward orbit of x0 enters the open interval (lo, hi).
// `entered == false` with `frozen == true` means the orbit reached an exact
// fixed point outside the interval, which settles the question for good;
// `frozen == false` merely means the cap ran out.
struct EntryResult {
    bool entered;
    long time;
    Real point;
    bool frozen;
};

inline EntryResult first_entry(const MapSpec& m, const Real& x0,
                               const Real& lo, const Real& hi, long cap) {
    const Real theta = degeneracy_threshold(m.prec);
    Real x = x0.with_precision(m.prec);
    for (long t = 1; t <= cap; ++t) {
        Real next = eval(m, x);
        if (locate_strict(next, lo, hi, theta)) return {true, t, next, false};
        if (next == x) return {false, t, next, true};
        x = next;
    }
    return {false, cap, x, false};
}

// --- first-return decomposition ------------------------------------------

// One maximal interval of points of (lo, hi) sharing a first-return time.
// The true edges are bracketed: the open interval (lo_inner, hi_inner) is
// certified inside the domain, and the domain is contained in
// (lo_outer, hi_outer).
struct ReturnDomain {
    long return_time;
    Real lo_outer, lo_inner, hi_inner, hi_outer;
    bool contains_critical;
    std::vector<long> witness_indices; // orbit indices of the seeds found inside
};

namespace detail {
// Does x first enter (lo, hi) exactly at time r? Grazing or cap exhaustion
// count as "no": the edge search below only needs a deterministic predicate
// that flips somewhere between an inside and an outside sample.
inline bool returns_at(const MapSpec& m, const Real& x,
                       const Real& lo, const Real& hi, long r) {
    try {
        EntryResult e = first_entry(m, x, lo, hi, r);
        return e.entered && e.time == r;
    } catch (const degeneracy_error&) {
        return false;
    }
}

// Shrink the bracket [inside, outside] around the edge of the domain of
// points returning at time r. Returns {inner, outer} with inner certified
// inside and outer certified not.
inline std::pair<Real, Real> refine_edge(const MapSpec& m, const Real& lo, const Real& hi,
                                         long r, Real inside, Real outside) {
    const Real stop = degeneracy_threshold(m.prec);
    while ((inside - outside).abs() > stop) {
        Real mid = (inside + outside).ldexp(-1);
        if (mid == inside || mid == outside) break;
        if (returns_at(m, mid, lo, hi, r))
            inside = mid;
        else
            outside = mid;
    }
    return {inside, outside};
}
} // namespace detail

// Decompose (lo, hi) into the domains of its first-return map that meet the
// critical orbit. Seeds are the orbit points inside the interval (plus the
// critical point itself when it lies inside); seeds with equal return times
// are merged when the segment between them stays in one domain, and each
// domain edge is then located by bisection on the return-time predicate.
inline std::vector<ReturnDomain> return_domains(const MapSpec& m, const Real& lo,
                                                const Real& hi, long orbit_horizon = 10000) {
    if (!(lo < hi)) throw domain_error("empty interval");
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);

    Orbit orb = critical_orbit_prefix(m, orbit_horizon);
    struct Seed {
        Real x;
        long orbit_index;
        long r;
    };
    std::vector<Seed> seeds;
    if (inside_with_margin(c, lo, hi, theta)) seeds.push_back({c, 0, 0});
    for (long i = 1; i <= orb.length(); ++i)
        if (inside_with_margin(orb.at(i), lo, hi, theta)) seeds.push_back({orb.at(i), i, 0});
    if (seeds.empty())
        throw insufficient_data_error("no critical-orbit point falls inside the interval");

    for (Seed& s : seeds) {
        EntryResult e = first_entry(m, s.x, lo, hi, orbit_horizon);
        if (!e.entered)
            throw insufficient_data_error(
                "an orbit point inside the interval has no visible return");
        s.r = e.time;
    }

    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.x < b.x) return true;
        if (b.x < a.x) return false;
        return a.orbit_index < b.orbit_index;
    });

    // Group seeds into runs connected within a single domain.
    std::vector<std::vector<const Seed*>> runs;
    for (const Seed& s : seeds) {
        bool attach = false;
        if (!runs.empty()) {
            const Seed* last = runs.back().back();
            if (last->r == s.r) {
                if (last->x == s.x) {
                    attach = true;
                } else {
                    Real mid = (last->x + s.x).ldexp(-1);
                    attach = detail::returns_at(m, mid, lo, hi, s.r);
                }
            }
        }
        if (attach)
            runs.back().push_back(&s);
        else
            runs.push_back({&s});
    }

    std::vector<ReturnDomain> out;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        long r = run.front()->r;
        Real in_lo = run.front()->x;
        Real in_hi = run.back()->x;
        Real out_lo = (i == 0) ? lo : runs[i - 1].back()->x;
        Real out_hi = (i + 1 == runs.size()) ? hi : runs[i + 1].front()->x;

        auto [lo_inner, lo_outer] = detail::refine_edge(m, lo, hi, r, in_lo, out_lo);
        auto [hi_inner, hi_outer] = detail::refine_edge(m, lo, hi, r, in_hi, out_hi);

        ReturnDomain dom{r, lo_outer, lo_inner, hi_inner, hi_outer, false, {}};
        for (const Seed* s : run) {
            dom.witness_indices.push_back(s->orbit_index);
            if (s->orbit_index == 0) dom.contains_critical = true;
        }
        out.push_back(std::move(dom));
    }
    return out;
}

// --- principal nest -------------------------------------------------------

// One level of the nest: a symmetric interval with endpoints i and 1-i,
// `side` the side of c carrying i, T the first-return time of c to this
// interval and return_point the corresponding orbit point (T == -1 when the
// return was not computed).
struct NestLevel {
    Real i, i_hat;
    Side side;
    long T;
    Real return_point;
};

struct PrincipalNest {
    MapSpec map;
    std::vector<NestLevel> levels; // levels[k-1] is the k-th interval
};

namespace detail {
inline NestLevel make_level(const MapSpec& m, const Real& endpoint_on_side_of,
                            const Real& x) {
    const Real c = m.critical_point();
    Real x2 = symmetric_point(x); // exact, so the two endpoints mirror precisely
    bool right = endpoint_on_side_of > c;
    Real i = right ? Real::max(x, x2) : Real::min(x, x2);
    Real ih = right ? Real::min(x, x2) : Real::max(x, x2);
    return NestLevel{i, ih, right ? Side::right : Side::left, -1, Real(m.prec)};
}
} // namespace detail

namespace detail {
// Incremental construction of the nest I^1 = (1-q, q), I^{k+1} = the
// component around c of the domain of the first-return map of I^k. The new
// endpoints are pulled back through the monotone branch of f^{T_k} adjacent
// to c on the left, whose reach is delimited by the z-points; the branch
// image has one endpoint at the return point of c, hence covers exactly one
// endpoint of I^k. Exposing the construction level by level lets a consumer
// validate each return time before paying for the next level.
class NestBuilder {
  public:
    NestBuilder(const MapSpec& m, long return_cap) : m_(m), cap_(return_cap), nest_{m, {}} {
        // The root interval is spanned by q and 1-q; the labeled endpoint
        // sits on the side of c_2 (the orbit point at the second cutting
        // time, whenever that cutting time exists).
        Real q = reversing_fixed_point(m_);
        nest_.levels.push_back(make_level(m_, eval_n(m_, m_.critical_point(), 2), q));
    }

    const PrincipalNest& nest() const { return nest_; }

    // First return of c to the deepest level; idempotent.
    long resolve_return() {
        NestLevel& cur = nest_.levels.back();
        if (cur.T >= 0) return cur.T;
        Real lo = Real::min(cur.i, cur.i_hat);
        Real hi = Real::max(cur.i, cur.i_hat);
        EntryResult ret = first_entry(m_, m_.critical_point(), lo, hi, cap_);
        if (!ret.entered) {
            if (ret.frozen)
                throw bracket_error("critical orbit froze outside the interval: no return");
            throw insufficient_data_error("no return of the critical point within the cap");
        }
        cur.T = ret.time;
        cur.return_point = ret.point;
        return cur.T;
    }

    // Append the next level: pull back whichever endpoint the central branch
    // image covers.
    void extend() {
        resolve_return();
        NestLevel& cur = nest_.levels.back();
        const Real c = m_.critical_point();

        if (S_horizon_ < cur.T) {
            S_ = cutting_times(m_, cur.T).times;
            S_horizon_ = cur.T;
        }
        long j = -1;
        for (std::size_t idx = 0; idx < S_.size(); ++idx)
            if (S_[idx] < cur.T) j = static_cast<long>(idx);
        if (j < 0) throw bracket_error("return before the first cutting time");
        extend_z_points(m_, S_, z_, j + 1);
        const Real& zeta = z_[static_cast<std::size_t>(j)];

        std::optional<Real> sol;
        for (const Real* target : {&cur.i, &cur.i_hat}) {
            try {
                Real x = monotone_solve(m_, cur.T, *target, zeta, c);
                if (!sol || *sol < x) sol = x; // keep the solution nearest c
            } catch (const bracket_error&) {
                continue;
            }
        }
        if (!sol)
            throw bracket_error("no endpoint of the interval is reached by the central branch");
        nest_.levels.push_back(make_level(m_, cur.return_point, *sol));
    }

  private:
    MapSpec m_;
    long cap_;
    PrincipalNest nest_;
    std::vector<long> S_;  // cutting times <= S_horizon_, a stable prefix
    std::vector<Real> z_;
    long S_horizon_ = 0;
};
} // namespace detail

inline PrincipalNest principal_nest(const MapSpec& m, long depth,
                                    long return_cap = 100000) {
    if (depth < 1) throw domain_error("nest depth must be >= 1");
    if (depth > kMaxNestLevels) throw budget_error("nest depth beyond the level budget");
    if (m.prec < kBitsPerNestLevel * depth)
        throw budget_error("nest depth beyond the precision budget");

    detail::NestBuilder builder(m, return_cap);
    for (long k = 1; k < depth; ++k) builder.extend();
    // Return data for the innermost level, when visible within the cap.
    try {
        builder.resolve_return();
    } catch (const degeneracy_error&) { // leave T == -1
    } catch (const insufficient_data_error&) {
    } catch (const bracket_error&) {
    }
    return builder.nest();
}

// --- structural checks ----------------------------------------------------

// First-return structure of one nest level: the interval decomposes into
// exactly two orbit-visible domains; the central one has return time
// S_{k+1}, returns onto the next nest level, and the lateral one has return
// time S_k and carries the marked points d_{k+1} and y_{k+1}.
struct ReturnStructureCheck {
    long level;
    bool pass;
    std::string failure;     // empty when pass
    long domain_count;
    long central_time, lateral_time;
    long expected_central, expected_lateral;
    Real central_edge_gap;   // worst mismatch between central edges and I^{k+1}
    bool lateral_has_d, lateral_has_y;
};

inline ReturnStructureCheck check_return_structure(const MapSpec& m, const PrincipalNest& nest,
                                                   long k, long orbit_horizon = 10000,
                                                   long edge_tol_bits = 128) {
    if (k < 1 || k + 1 > static_cast<long>(nest.levels.size()))
        throw domain_error("nest too shallow for the requested level");
    ReturnStructureCheck out{k, false, "", 0, -1, -1, 0, 0, Real::zero(m.prec), false, false};

    std::vector<long> S = detail::cutting_time_values(m, k + 4);
    out.expected_central = S[static_cast<std::size_t>(k + 1)];
    out.expected_lateral = S[static_cast<std::size_t>(k)];

    const NestLevel& lvl = nest.levels[static_cast<std::size_t>(k - 1)];
    const NestLevel& nxt = nest.levels[static_cast<std::size_t>(k)];
    Real lo = Real::min(lvl.i, lvl.i_hat);
    Real hi = Real::max(lvl.i, lvl.i_hat);

    std::vector<ReturnDomain> doms = return_domains(m, lo, hi, orbit_horizon);
    out.domain_count = static_cast<long>(doms.size());
    if (doms.size() != 2) {
        out.failure = "expected exactly two orbit-visible return domains, found " +
                      std::to_string(doms.size());
        return out;
    }
    const ReturnDomain* central = nullptr;
    const ReturnDomain* lateral = nullptr;
    for (const ReturnDomain& d : doms)
        (d.contains_critical ? central : lateral) = &d;
    if (!central || !lateral) {
        out.failure = central ? "both domains contain the critical point"
                              : "no domain contains the critical point";
        return out;
    }
    out.central_time = central->return_time;
    out.lateral_time = lateral->return_time;
    if (central->return_time != out.expected_central ||
        lateral->return_time != out.expected_lateral) {
        out.failure = "return times do not match the cutting times";
        return out;
    }

    Real nlo = Real::min(nxt.i, nxt.i_hat);
    Real nhi = Real::max(nxt.i, nxt.i_hat);
    Real gap = Real::max((central->lo_inner - nlo).abs(), (central->lo_outer - nlo).abs());
    gap = Real::max(gap, (central->hi_inner - nhi).abs());
    gap = Real::max(gap, (central->hi_outer - nhi).abs());
    out.central_edge_gap = gap;
    Real tol = Real::pow2(-edge_tol_bits, m.prec);
    if (!(gap < tol)) {
        out.failure = "central domain does not match the next nest level";
        return out;
    }

    long horizon = S[static_cast<std::size_t>(k + 1)] + S[static_cast<std::size_t>(k + 3)];
    Orbit orb = critical_orbit(m, horizon);
    const Real& d_next = orb.at(S[static_cast<std::size_t>(k + 1)]);
    const Real& y_next = orb.at(S[static_cast<std::size_t>(k + 1)] +
                                S[static_cast<std::size_t>(k + 3)]);
    out.lateral_has_d = lateral->lo_inner < d_next && d_next < lateral->hi_inner;
    out.lateral_has_y = lateral->lo_inner < y_next && y_next < lateral->hi_inner;
    if (!out.lateral_has_d || !out.lateral_has_y) {
        out.failure = "lateral domain misses a marked orbit point";
        return out;
    }
    out.pass = true;
    return out;
}

// Position of the nest endpoints between the marked points: for each level,
// the orbit point d_k stays outside I^k, and from level 3 on the endpoint
// i_k sits between d_{k+1} and u_k on the side of d_k.
struct NestPositionCheck {
    bool pass;
    std::string failure;
    long levels_checked;
    std::vector<long> return_times; // T_1 .. T_{levels_checked}
};

inline NestPositionCheck check_nest_positions(const MapSpec& m, long levels,
                                              long margin_bits = 256) {
    if (levels < 3) throw domain_error("need at least three levels");
    NestPositionCheck out{true, "", levels, {}};
    PrincipalNest nest = principal_nest(m, levels + 1);
    MarkedPoints mp = marked_points(m, std::min<long>(levels + 2, kMaxNestLevels));
    const Real c = m.critical_point();
    const Real margin = Real::pow2(-margin_bits, m.prec);

    for (long k = 1; k <= levels; ++k) {
        const NestLevel& lvl = nest.levels[static_cast<std::size_t>(k - 1)];
        out.return_times.push_back(lvl.T);
        Real ri = (lvl.i - c).abs();
        if (k < static_cast<long>(mp.d.size())) {
            Real rd = (mp.d[static_cast<std::size_t>(k)] - c).abs();
            if (!(rd > ri + margin)) {
                out.pass = false;
                out.failure = "orbit point at a cutting time falls inside its nest level " +
                              std::to_string(k);
                return out;
            }
        }
        if (k >= 3 && k + 1 < static_cast<long>(mp.d.size())) {
            const Real& dk = mp.d[static_cast<std::size_t>(k)];
            const Real& dn = mp.d[static_cast<std::size_t>(k + 1)];
            const Real& uk = mp.u[static_cast<std::size_t>(k)];
            bool side_ok = (dk > c) == (lvl.side == Side::right);
            Real rdn = (dn - c).abs();
            Real ruk = (uk - c).abs();
            if (!side_ok || !(rdn + margin < ri) || !(ri + margin < ruk)) {
                out.pass = false;
                out.failure = "nest endpoint misplaced relative to the marked points at level " +
                              std::to_string(k);
                return out;
            }
        }
    }
    return out;
}

// Decide from the nest alone whether the map has Fibonacci combinatorics,
// by checking the three structural properties level by level against the
// reference sequence 1, 2, 3, 5, 8, ...: the critical point first returns
// to level k at time S_{k+1}; the orbit point at time S_{k+1} lies inside
// level k and first returns at time S_k; and the orbit point at time S_k
// stays outside level k. Structural mismatches give a definite "no";
// precision or degeneracy failures propagate as exceptions.
struct NestClassification {
    bool fibonacci;
    long levels_confirmed;
    std::string reason;
};

inline NestClassification classify_by_nest(const MapSpec& m, long depth) {
    if (depth < 2) throw domain_error("classification needs depth >= 2");
    if (depth + 1 > kMaxNestLevels) throw budget_error("classification depth beyond the level budget");
    if (m.prec < kBitsPerNestLevel * (depth + 1))
        throw budget_error("classification depth beyond the precision budget");
    // F(k + 2) is consulted for k up to `depth`, so depth + 3 entries.
    std::vector<mpz_class> fib = fib_numbers(static_cast<std::size_t>(depth) + 3);
    auto F = [&fib](long j) { return fib[static_cast<std::size_t>(j)].get_si(); };

    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);
    Orbit orb = critical_orbit(m, F(depth + 1));
    detail::NestBuilder builder(m, 100000);

    long confirmed = 0;
    for (long k = 1; k <= depth; ++k) {
        std::string at = " at level " + std::to_string(k);
        long T;
        try {
            T = builder.resolve_return();
        } catch (const bracket_error& e) {
            return {false, confirmed, e.what()};
        } catch (const insufficient_data_error& e) {
            return {false, confirmed, e.what()};
        }
        if (T != F(k + 1))
            return {false, confirmed,
                    "central return time is " + std::to_string(T) + ", expected " +
                        std::to_string(F(k + 1)) + at};
        const NestLevel& lvl = builder.nest().levels[static_cast<std::size_t>(k - 1)];

        Real ri = (lvl.i - c).abs();
        Real rd = (orb.at(F(k)) - c).abs();
        if ((rd - ri).abs() < theta)
            throw degeneracy_error("orbit point grazes the nest boundary" + at);
        if (rd < ri)
            return {false, confirmed, "orbit point at a cutting time falls inside" + at};

        Real lo = Real::min(lvl.i, lvl.i_hat);
        Real hi = Real::max(lvl.i, lvl.i_hat);
        const Real& witness = orb.at(F(k + 1));
        if (!locate_strict(witness, lo, hi, theta))
            return {false, confirmed, "orbit point at the next cutting time misses" + at};
        EntryResult lat = first_entry(m, witness, lo, hi, 4 * F(k + 2));
        if (!lat.entered || lat.time != F(k))
            return {false, confirmed,
                    "lateral return time is " + std::to_string(lat.entered ? lat.time : -1) +
                        ", expected " + std::to_string(F(k)) + at};
        ++confirmed;
        if (k < depth) {
            try {
                builder.extend();
            } catch (const bracket_error& e) {
                return {false, confirmed, e.what()};
            } catch (const monotonicity_error& e) {
                return {false, confirmed, e.what()};
            }
        }
    }
    return {true, confirmed, ""};
}

} // namespace fibnest
