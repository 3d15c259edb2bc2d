#include "nca/step.hpp"

#include <stdexcept>

namespace nca {

Grid step(const Grid& g, const UpdateNetwork& net, const UpdateMode& mode, RngStream& rng) {
    kernels::PackedNetwork packed = kernels::pack(net);
    kernels::Workspace ws;
    std::vector<uint8_t> mask = kernels::draw_step_mask(g, mode, rng);
    Grid out;
    kernels::step_into(g, packed, mask, out, ws);
    return out;
}

Grid rollout_packed(const Grid& g, const kernels::PackedNetwork& net, int n_steps,
                    const UpdateMode& mode, RngStream& rng, kernels::Workspace& ws,
                    Trajectory* record) {
    if (n_steps < 0) throw std::invalid_argument("rollout: n_steps must be >= 0");
    if (record) {
        record->grids.clear();
        record->masks.clear();
        record->grids.reserve(size_t(n_steps) + 1);
        record->masks.reserve(size_t(n_steps));
        record->grids.push_back(g);
    }
    Grid cur = g;
    Grid next;
    for (int t = 0; t < n_steps; ++t) {
        std::vector<uint8_t> mask = kernels::draw_step_mask(cur, mode, rng);
        kernels::step_into(cur, net, mask, next, ws);
        std::swap(cur, next);
        if (record) {
            record->grids.push_back(cur);
            record->masks.push_back(std::move(mask));
        }
    }
    return cur;
}

Grid rollout(const Grid& g, const UpdateNetwork& net, int n_steps, const UpdateMode& mode,
             RngStream& rng, Trajectory* record) {
    kernels::PackedNetwork packed = kernels::pack(net);
    kernels::Workspace ws;
    return rollout_packed(g, packed, n_steps, mode, rng, ws, record);
}

}  // namespace nca
