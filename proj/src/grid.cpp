#include "nca/grid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nca {

Grid new_grid(int height, int width, Boundary boundary) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("new_grid: dimensions must be >= 1, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
    Grid g;
    g.height = height;
    g.width = width;
    g.boundary = boundary;
    g.data.assign(size_t(height) * width * kChannels, 0.0f);
    return g;
}

int grid_side_for_target(int target_side, double multiplier) {
    if (target_side < 1) throw std::invalid_argument("grid_side_for_target: side must be >= 1");
    return int(std::ceil(multiplier * target_side));
}

int UpdateMask::count() const {
    return int(std::accumulate(on.begin(), on.end(), 0));
}

UpdateMask updatable_mask(const Grid& g) {
    UpdateMask m;
    m.height = g.height;
    m.width = g.width;
    m.on.assign(size_t(g.height) * g.width, 0);
    const bool torus = g.boundary == Boundary::torus;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            float max_alpha = 0.0f;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (torus) {
                        rr = wrap_index(rr, g.height);
                        cc = wrap_index(cc, g.width);
                    } else if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) {
                        continue;
                    }
                    max_alpha = std::max(max_alpha, g.alpha(rr, cc));
                }
            }
            m.on[size_t(g.index(r, c))] = max_alpha > kAliveThreshold ? 1 : 0;
        }
    }
    return m;
}

void reset_dead_inplace(Grid& g) {
    for (int i = 0; i < g.cell_count(); ++i) {
        float* cell = g.data.data() + size_t(i) * kChannels;
        if (cell[kAlphaChannel] <= kAliveThreshold) {
            for (int ch = 0; ch < kChannels; ++ch) cell[ch] = 0.0f;
        }
    }
}

Grid reset_dead(Grid g) {
    reset_dead_inplace(g);
    return g;
}

std::array<float, kNeighborhoodSize> neighborhood(const Grid& g, int row, int col) {
    if (row < 0 || row >= g.height || col < 0 || col >= g.width) {
        throw std::invalid_argument("neighborhood: center out of bounds");
    }
    std::array<float, kNeighborhoodSize> out{};
    const bool torus = g.boundary == Boundary::torus;
    int slot = 0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc, ++slot) {
            int rr = row + dr, cc = col + dc;
            if (torus) {
                rr = wrap_index(rr, g.height);
                cc = wrap_index(cc, g.width);
            } else if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) {
                continue;  // zero cell
            }
            const float* cell = g.cell(rr, cc);
            for (int ch = 0; ch < kChannels; ++ch) out[size_t(slot * kChannels + ch)] = cell[ch];
        }
    }
    return out;
}

Grid shift(const Grid& g, int drow, int dcol) {
    Grid out = g;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            const int rr = wrap_index(r + drow, g.height);
            const int cc = wrap_index(c + dcol, g.width);
            const float* src = g.cell(r, c);
            float* dst = out.cell(rr, cc);
            for (int ch = 0; ch < kChannels; ++ch) dst[ch] = src[ch];
        }
    }
    return out;
}

}  // namespace nca
