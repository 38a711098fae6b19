// Timing comparison of the OpenMP evolve kernels against their serial
// reference implementations. Usage: bench_kernels [n_states] [n_times]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spinpair/propagator.hpp"

using namespace spinpair;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double checksum(const std::vector<DensityMatrix4>& states) {
    double acc = 0.0;
    for (const auto& s : states) acc += s.m.cwiseAbs().sum();
    return acc;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n_states = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 64;
    const std::size_t n_times = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 4000;

    const SystemParams params{1.0, 1.0};
    const BathModel bath = LorentzianBath{1.0, 1.0};
    const double t_end = 5.0;

    std::mt19937_64 rng(7);
    std::vector<DensityMatrix4> states;
    states.reserve(n_states);
    for (std::size_t i = 0; i < n_states; ++i) states.push_back(random_physical_state(rng));
    std::vector<double> times(n_times);
    for (std::size_t i = 0; i < n_times; ++i)
        times[i] = t_end * static_cast<double>(i) / static_cast<double>(n_times - 1);

    double t0 = now_seconds();
    PropagatorBundle bundle(params, bath, t_end);
    const double t_build = now_seconds() - t0;

#ifdef _OPENMP
    std::printf("threads           : %d\n", omp_get_max_threads());
#else
    std::printf("threads           : 1 (compiled without OpenMP)\n");
#endif
    std::printf("bundle build      : %8.2f ms\n", 1e3 * t_build);
    std::printf("batch             : %zu states x %zu times = %zu evolutions\n",
                n_states, n_times, n_states * n_times);

    t0 = now_seconds();
    const auto serial = evolve_batch_serial(bundle, states, times);
    const double t_serial = now_seconds() - t0;

    t0 = now_seconds();
    const auto parallel = evolve_batch(bundle, states, times);
    const double t_parallel = now_seconds() - t0;

    double dev = 0.0;
    for (std::size_t i = 0; i < serial.size(); ++i)
        dev = std::max(dev, (serial[i].m - parallel[i].m).cwiseAbs().maxCoeff());

    std::printf("serial reference  : %8.2f ms  (checksum %.6f)\n", 1e3 * t_serial,
                checksum(serial));
    std::printf("openmp kernel     : %8.2f ms  (checksum %.6f)\n", 1e3 * t_parallel,
                checksum(parallel));
    std::printf("speedup           : %8.2fx\n", t_serial / t_parallel);
    std::printf("max |serial - omp|: %.3e\n", dev);
    return dev == 0.0 ? 0 : 1;
}
