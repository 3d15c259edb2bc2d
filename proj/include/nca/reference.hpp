#pragma once

#include <cstdint>
#include <vector>

#include "nca/grid.hpp"
#include "nca/network.hpp"
#include "nca/rng.hpp"

// Serial fp64 implementation of the cell update, kept deliberately naive and
// independent of the kernel code path. The tests use it as the oracle for the
// parallel kernels and for finite-difference gradient checks; the benchmark
// compares against it.
namespace nca::reference {

struct DGrid {
    int height = 0;
    int width = 0;
    Boundary boundary = Boundary::torus;
    std::vector<double> data;  // same layout as Grid

    static DGrid from(const Grid& g);
    Grid to_grid() const;
};

struct DNet {
    int hidden = 0;
    std::vector<double> w1, b1, w2, b2;

    static DNet from(const UpdateNetwork& net);
};

std::vector<uint8_t> updatable(const DGrid& g);

// updatable ∩ stochastic with the same draw sequence as the production path
std::vector<uint8_t> draw_step_mask(const DGrid& g, const UpdateMode& mode, RngStream& rng);

DGrid step(const DGrid& g, const DNet& net, const std::vector<uint8_t>& mask);

// mean over all cells and the first `channels` channels of squared
// difference against target values (cell-major, `channels` per cell)
double mse(const DGrid& g, const std::vector<double>& target, int channels);

// rollout + loss in one call; used as the scalar function for finite differences
double rollout_loss(const Grid& initial, const UpdateNetwork& net, int n_steps,
                    const UpdateMode& mode, RngStream rng, const std::vector<double>& target,
                    int loss_channels);

}  // namespace nca::reference
