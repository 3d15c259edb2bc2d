#pragma once

#include <cstdint>
#include <vector>

#include "nca/grid.hpp"
#include "nca/kernels.hpp"
#include "nca/network.hpp"
#include "nca/rng.hpp"

namespace nca {

// recorded rollout: grids[t] is the state before step t, grids.back() the
// final state; masks[t] is the update mask applied at step t (updatable ∩
// stochastic). Both are required by the reverse pass.
struct Trajectory {
    std::vector<Grid> grids;
    std::vector<std::vector<uint8_t>> masks;

    int steps() const { return int(masks.size()); }
};

// one time step: update masked cells, clamp to [-1,1], reset dead cells
Grid step(const Grid& g, const UpdateNetwork& net, const UpdateMode& mode, RngStream& rng);

// n sequential steps; pass `record` to keep all intermediate grids and masks
Grid rollout(const Grid& g, const UpdateNetwork& net, int n_steps, const UpdateMode& mode,
             RngStream& rng, Trajectory* record = nullptr);

// rollout on an already-packed network, reusing workspace across steps
Grid rollout_packed(const Grid& g, const kernels::PackedNetwork& net, int n_steps,
                    const UpdateMode& mode, RngStream& rng, kernels::Workspace& ws,
                    Trajectory* record = nullptr);

}  // namespace nca
