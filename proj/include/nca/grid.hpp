#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace nca {

inline constexpr int kChannels = 16;
inline constexpr int kAlphaChannel = 3;          // state layout: R,G,B,A, 12 hidden
inline constexpr int kNeighborhoodSize = 9 * kChannels;  // rule input width
inline constexpr float kAliveThreshold = 0.1f;   // alive iff alpha > 0.1

enum class Boundary { torus, zero_padded };

inline int wrap_index(int v, int n) {
    v %= n;
    return v < 0 ? v + n : v;
}

// H x W lattice of 16-channel cell states, row-major, channel-minor.
struct Grid {
    int height = 0;
    int width = 0;
    Boundary boundary = Boundary::torus;
    std::vector<float> data;

    int cell_count() const { return height * width; }
    int index(int row, int col) const { return row * width + col; }

    float* cell(int row, int col) { return data.data() + index(row, col) * kChannels; }
    const float* cell(int row, int col) const {
        return data.data() + index(row, col) * kChannels;
    }

    float alpha(int row, int col) const { return cell(row, col)[kAlphaChannel]; }

    bool same_shape(const Grid& other) const {
        return height == other.height && width == other.width;
    }
};

Grid new_grid(int height, int width, Boundary boundary);

// ceil(2.25 * target_side); the multiplier is configurable at call sites
int grid_side_for_target(int target_side, double multiplier = 2.25);

struct UpdateMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> on;

    int count() const;
};

// cell is eligible for update iff max alpha over its 3x3 neighborhood
// (boundary-aware) exceeds the alive threshold
UpdateMask updatable_mask(const Grid& g);

// cells with alpha <= threshold get all 16 channels zeroed
void reset_dead_inplace(Grid& g);
Grid reset_dead(Grid g);

// row-major 3x3 window centered at (row, col): 9 cells x 16 channels.
// torus wraps, zero_padded substitutes zero cells. Throws on out-of-bounds center.
std::array<float, kNeighborhoodSize> neighborhood(const Grid& g, int row, int col);

// torus translation by (drow, dcol); used by equivariance tests
Grid shift(const Grid& g, int drow, int dcol);

}  // namespace nca
