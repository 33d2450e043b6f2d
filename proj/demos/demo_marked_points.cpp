// Prints the marked-point table and the first principal-nest levels of the
// quadratic Fibonacci map, using the frozen parameter from the library.

#include <cstdio>
#include <string>

#include "fibnest/fibnest.hpp"

int main() {
    using namespace fibnest;

    MapSpec m = constants::quadratic_fibonacci_map(512);
    std::printf("a  = %s\n", m.a.to_decimal(30).c_str());
    std::printf("c1 = %s\n\n", eval(m, m.critical_point()).to_decimal(30).c_str());

    MarkedPoints mp = marked_points(m, 8);
    std::printf("%3s %5s %-14s %-14s %-14s %-14s\n", "n", "S", "d", "y", "z", "u");
    for (std::size_t i = 0; i < mp.d.size(); ++i) {
        std::printf("%3zu %5ld %-14s %-14s %-14s %-14s\n", i, mp.S[i],
                    mp.d[i].to_decimal(10).c_str(), mp.y[i].to_decimal(10).c_str(),
                    mp.z[i].to_decimal(10).c_str(), mp.u[i].to_decimal(10).c_str());
    }

    PrincipalNest nest = principal_nest(m, 6);
    std::printf("\n%3s %6s %-14s %-14s %8s\n", "k", "side", "i", "i_hat", "T");
    for (std::size_t k = 0; k < nest.levels.size(); ++k) {
        const NestLevel& lvl = nest.levels[k];
        std::printf("%3zu %6s %-14s %-14s %8ld\n", k + 1, to_string(lvl.side),
                    lvl.i.to_decimal(10).c_str(), lvl.i_hat.to_decimal(10).c_str(), lvl.T);
    }
    return 0;
}
