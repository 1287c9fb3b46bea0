// Benchmark comparing the OpenMP kernels against their serial reference
// implementations. Correctness (exact equality of results) is covered by the
// test suite; this target reports wall-clock speedups.
//
//   ./bench_kernels [--quick]

#include <chrono>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "sasaki/core.hpp"
#include "sasaki/geodesics.hpp"
#include "sasaki/heat_kernel.hpp"
#include "sasaki/parallel.hpp"
#include "sasaki/verify.hpp"

using namespace sasaki;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
    const auto t0 = Clock::now();
    f();
    return seconds_since(t0);
}

void report(const std::string& name, double serial_s, double parallel_s, bool equal) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %5.2fx   results %s\n", name.c_str(),
                serial_s, parallel_s, serial_s / parallel_s, equal ? "equal" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const ModelSpace m(1);
    std::printf("threads available: %d\n", max_threads());

    {
        const long long samples = quick ? 400000 : 4000000;
        BallVolumeEstimate a, b;
        const double ts = timed([&] { a = ball_volume_serial(m, 1.0, samples, 42); });
        const double tp = timed([&] { b = ball_volume(m, 1.0, samples, 42); });
        report("ball_volume MC", ts, tp, a.value == b.value);
    }
    {
        const long long paths = quick ? 20000 : 200000;
        BoxRegion cell{{-0.4, -0.4, -0.4}, {0.4, 0.4, 0.4}};
        DiffusionEstimate a, b;
        const double ts = timed([&] { a = mc_estimate_serial(m, 1.0, cell, paths, 42, 2048); });
        const double tp = timed([&] { b = mc_estimate(m, 1.0, cell, paths, 42, 2048); });
        report("diffusion MC", ts, tp, a.density == b.density);
    }
    {
        const int npairs = quick ? 16 : 64;
        auto pairs = random_distance_pairs(m, npairs, 7);
        std::vector<GeodesicResult> a, b;
        const double ts =
            timed([&] { a = distance_batch_serial(m, MetricSpec::riemannian(0.5), pairs); });
        const double tp = timed([&] { b = distance_batch(m, MetricSpec::riemannian(0.5), pairs); });
        bool equal = a.size() == b.size();
        for (std::size_t i = 0; equal && i < a.size(); ++i) equal = a[i].length == b[i].length;
        report("distance batch (shooting)", ts, tp, equal);
    }
    {
        // Li-Yau margin sweep over a (t, y) grid
        const int nt = quick ? 6 : 12;
        std::vector<double> ts_grid;
        for (int i = 0; i < nt; ++i) ts_grid.push_back(0.05 * std::pow(100.0, double(i) / (nt - 1)));
        auto run = [&](bool parallel) {
            return map_indexed<double>(
                nt,
                [&](long long i) {
                    return check_liyau(m, ts_grid[static_cast<std::size_t>(i)], Point(1, 0, 0)).margin;
                },
                parallel);
        };
        std::vector<double> a, b;
        const double tser = timed([&] { a = run(false); });
        const double tpar = timed([&] { b = run(true); });
        report("li-yau margin sweep", tser, tpar, a == b);
    }
    return 0;
}
