#include "rk/rees.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rk;

namespace {

double time_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, double serial, double parallel, bool same) {
    std::cout << name << ": serial " << serial << " s, parallel " << parallel
              << " s, speedup " << (parallel > 0 ? serial / parallel : 0.0)
              << (same ? "" : "  [MISMATCH]") << "\n";
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* t = std::getenv("REES_KIT_THREADS")) {
        int nt = std::atoi(t);
        if (nt > 0) omp_set_num_threads(nt);
    }
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (no OpenMP)\n";
#endif
    int n = argc > 1 ? std::atoi(argv[1]) : 7;
    unsigned long seed = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 11;

    PolyMatrix phi = random_instance(Branch::I_N1, seed, n);
    std::cout << "instance: n = " << n << ", seed = " << seed << "\n";

    std::vector<Polynomial> ms, mp;
    double ts = time_of([&] { ms = matrix_minors_serial(phi, n - 1); });
    double tp = time_of([&] { mp = matrix_minors(phi, n - 1); });
    report("maximal minors", ts, tp, ms == mp);

    ms.clear();
    mp.clear();
    ts = time_of([&] { ms = matrix_minors_serial(phi, n - 2); });
    tp = time_of([&] { mp = matrix_minors(phi, n - 2); });
    report("submaximal minors", ts, tp, ms == mp);

    Ideal L = symmetric_ideal(phi);
    GroebnerBasis gs, gp;
    ts = time_of([&] { gs = buchberger(L.gens, {true, false}); });
    tp = time_of([&] { gp = buchberger(L.gens, {true, true}); });
    report("buchberger on L", ts, tp, gs.elements == gp.elements);

    return 0;
}
