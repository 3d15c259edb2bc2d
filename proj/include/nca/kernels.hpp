#pragma once

#include <cstdint>
#include <vector>

#include "nca/grid.hpp"
#include "nca/network.hpp"
#include "nca/rng.hpp"

// OpenMP-parallel fp32 kernels behind step/rollout/backward. Every parallel
// loop writes each output element from exactly one iteration and accumulates
// in a fixed order, so results are bitwise independent of thread count and
// schedule. A serial fp64 implementation lives in nca/reference.hpp and is
// used by the tests as an independent oracle.
namespace nca::kernels {

// weights repacked for the access patterns of the fused row kernels
struct PackedNetwork {
    int hidden = 0;
    std::vector<float> w1;   // hidden x 144 (canonical layout)
    std::vector<float> w1t;  // 144 x hidden (input-major, forward axpy)
    std::vector<float> b1;
    std::vector<float> w2;   // 16 x hidden
    std::vector<float> b2;
};

PackedNetwork pack(const UpdateNetwork& net);

// reusable scratch; sized on demand
struct Workspace {
    std::vector<int> active;     // masked cell indices, row-major order
    std::vector<int> cell_row;   // cell index -> row in `active`, or -1
    std::vector<float> x;        // N x 144 gathered neighborhoods
    std::vector<float> a;        // N x hidden, post-relu
    std::vector<float> dpre;     // N x 16
    std::vector<float> dh;       // N x hidden
    std::vector<float> dx;       // N x 144
};

// updatable_mask ∩ stochastic mask. Async draws one float per cell in
// row-major order (state-independent), so a replayed stream reproduces the
// masks bitwise; sync consumes no draws.
std::vector<uint8_t> draw_step_mask(const Grid& g, const UpdateMode& mode, RngStream& rng);

// one forward step over the masked cells: out = reset_dead(clamp(prev + delta))
void step_into(const Grid& prev, const PackedNetwork& net, const std::vector<uint8_t>& mask,
               Grid& out, Workspace& ws);

// reverse pass of one step. d_next: dL/d(post grid), cell-major [H*W*16];
// d_prev: dL/d(pre grid), written (not accumulated). Parameter gradients are
// accumulated into grads. Stochastic masks and aliveness gates are constants
// of the recorded forward pass; clamp backprops zero outside (-1, 1).
void backward_step(const Grid& prev, const Grid& next, const PackedNetwork& net,
                   const std::vector<uint8_t>& mask, const std::vector<float>& d_next,
                   std::vector<float>& d_prev, NetworkGradients& grads, Workspace& ws);

}  // namespace nca::kernels
