// Compares the serial fp64 reference implementation against the OpenMP fp32
// kernels on a representative workload: one alive blob on a torus grid,
// forward step and reverse step, 1 thread vs all threads.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "nca/grid.hpp"
#include "nca/kernels.hpp"
#include "nca/network.hpp"
#include "nca/reference.hpp"
#include "nca/rng.hpp"

using namespace nca;
using Clock = std::chrono::steady_clock;

namespace {

Grid make_blob_grid(int h, int w, int radius, RngStream& rng) {
    Grid g = new_grid(h, w, Boundary::torus);
    const int cy = h / 2, cx = w / 2;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int dy = r - cy, dx = c - cx;
            if (dy * dy + dx * dx <= radius * radius) {
                float* cell = g.cell(r, c);
                for (int ch = 0; ch < kChannels; ++ch) cell[ch] = rng.next_uniform_sym(0.5f);
                cell[kAlphaChannel] = 0.5f + 0.5f * rng.next_float();
            }
        }
    }
    return g;
}

template <typename F>
double time_ms(int reps, F&& fn) {
    fn();  // warmup
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    int h = 64, w = 48, radius = 16, hidden = 64, reps = 20;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string k = argv[i];
        const int v = std::atoi(argv[i + 1]);
        if (k == "--height") h = v;
        else if (k == "--width") w = v;
        else if (k == "--radius") radius = v;
        else if (k == "--hidden") hidden = v;
        else if (k == "--reps") reps = v;
    }

    RngStream rng{12345, 0};
    const Grid grid = make_blob_grid(h, w, radius, rng);
    UpdateNetwork net = UpdateNetwork::init(hidden, rng);
    for (float& v : net.w2) v = rng.next_uniform_sym(0.02f);

    const kernels::PackedNetwork packed = kernels::pack(net);
    kernels::Workspace ws;
    UpdateMode sync{UpdateKind::synchronous, 1.0f, false};
    std::vector<uint8_t> mask = kernels::draw_step_mask(grid, sync, rng);
    int active = 0;
    for (uint8_t m : mask) active += m;

    const double fwd_flop = 2.0 * active * (144.0 * hidden + hidden * 16.0);
    const double bwd_flop = fwd_flop + 2.0 * active * (3.0 * 16.0 * hidden + 2.0 * 144.0 * hidden);

    std::printf("grid %dx%d, hidden %d, active cells %d, max threads %d\n", h, w, hidden, active,
                omp_get_max_threads());

    // forward: fp64 serial reference
    const reference::DGrid dgrid = reference::DGrid::from(grid);
    const reference::DNet dnet = reference::DNet::from(net);
    const double ref_ms = time_ms(std::max(1, reps / 4), [&] {
        volatile double sink = reference::step(dgrid, dnet, mask).data[0];
        (void)sink;
    });
    std::printf("forward  reference fp64 serial   %9.3f ms  %7.2f GFLOP/s\n", ref_ms,
                fwd_flop / ref_ms / 1e6);

    Grid out;
    for (int threads : {1, omp_get_max_threads()}) {
        omp_set_num_threads(threads);
        const double ms = time_ms(reps, [&] { kernels::step_into(grid, packed, mask, out, ws); });
        std::printf("forward  kernels fp32 %2d thread %9.3f ms  %7.2f GFLOP/s  (%.1fx vs ref)\n",
                    threads, ms, fwd_flop / ms / 1e6, ref_ms / ms);
    }

    std::vector<float> d_next(grid.data.size());
    for (float& v : d_next) v = rng.next_uniform_sym(1e-3f);
    std::vector<float> d_prev;
    NetworkGradients grads = NetworkGradients::zeros_like(net);
    for (int threads : {1, omp_get_max_threads()}) {
        omp_set_num_threads(threads);
        const double ms = time_ms(reps, [&] {
            kernels::backward_step(grid, out, packed, mask, d_next, d_prev, grads, ws);
        });
        std::printf("backward kernels fp32 %2d thread %9.3f ms  %7.2f GFLOP/s\n", threads, ms,
                    bwd_flop / ms / 1e6);
    }

    return 0;
}
