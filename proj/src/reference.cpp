#include "nca/reference.hpp"

#include <algorithm>
#include <stdexcept>

namespace nca::reference {

DGrid DGrid::from(const Grid& g) {
    DGrid d;
    d.height = g.height;
    d.width = g.width;
    d.boundary = g.boundary;
    d.data.assign(g.data.begin(), g.data.end());
    return d;
}

Grid DGrid::to_grid() const {
    Grid g;
    g.height = height;
    g.width = width;
    g.boundary = boundary;
    g.data.assign(data.begin(), data.end());
    return g;
}

DNet DNet::from(const UpdateNetwork& net) {
    DNet d;
    d.hidden = net.hidden_size;
    d.w1.assign(net.w1.begin(), net.w1.end());
    d.b1.assign(net.b1.begin(), net.b1.end());
    d.w2.assign(net.w2.begin(), net.w2.end());
    d.b2.assign(net.b2.begin(), net.b2.end());
    return d;
}

std::vector<uint8_t> updatable(const DGrid& g) {
    std::vector<uint8_t> on(size_t(g.height) * g.width, 0);
    const bool torus = g.boundary == Boundary::torus;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            double max_alpha = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (torus) {
                        rr = wrap_index(rr, g.height);
                        cc = wrap_index(cc, g.width);
                    } else if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) {
                        continue;
                    }
                    max_alpha = std::max(
                        max_alpha, g.data[(size_t(rr) * g.width + cc) * kChannels + kAlphaChannel]);
                }
            }
            if (max_alpha > double(kAliveThreshold)) on[size_t(r) * g.width + c] = 1;
        }
    }
    return on;
}

std::vector<uint8_t> draw_step_mask(const DGrid& g, const UpdateMode& mode, RngStream& rng) {
    std::vector<uint8_t> on = updatable(g);
    if (mode.kind == UpdateKind::synchronous) return on;
    const int cells = g.height * g.width;
    if (mode.exact_half) {
        std::vector<int> perm(static_cast<size_t>(cells));
        for (int i = 0; i < cells; ++i) perm[size_t(i)] = i;
        for (int i = cells - 1; i > 0; --i) {
            const int j = int(rng.next_below(uint32_t(i + 1)));
            std::swap(perm[size_t(i)], perm[size_t(j)]);
        }
        std::vector<uint8_t> mask(size_t(cells), 0);
        const int chosen = int(mode.async_rate * float(cells));
        for (int i = 0; i < chosen; ++i) mask[size_t(perm[size_t(i)])] = on[size_t(perm[size_t(i)])];
        return mask;
    }
    for (int i = 0; i < cells; ++i) {
        const bool hit = rng.next_float() < mode.async_rate;
        if (!hit) on[size_t(i)] = 0;
    }
    return on;
}

DGrid step(const DGrid& g, const DNet& net, const std::vector<uint8_t>& mask) {
    DGrid out = g;
    const bool torus = g.boundary == Boundary::torus;
    const int hidden = net.hidden;
    std::vector<double> nbhd(static_cast<size_t>(kNeighborhoodSize));
    std::vector<double> h(static_cast<size_t>(hidden));
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            const size_t cell = size_t(r) * g.width + c;
            if (!mask[cell]) continue;
            int slot = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc, ++slot) {
                    int rr = r + dr, cc = c + dc;
                    bool oob = false;
                    if (torus) {
                        rr = wrap_index(rr, g.height);
                        cc = wrap_index(cc, g.width);
                    } else if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) {
                        oob = true;
                    }
                    for (int ch = 0; ch < kChannels; ++ch) {
                        nbhd[size_t(slot * kChannels + ch)] =
                            oob ? 0.0 : g.data[(size_t(rr) * g.width + cc) * kChannels + ch];
                    }
                }
            }
            for (int j = 0; j < hidden; ++j) {
                double acc = net.b1[size_t(j)];
                for (int k = 0; k < kNeighborhoodSize; ++k) {
                    acc += net.w1[size_t(j) * kNeighborhoodSize + k] * nbhd[size_t(k)];
                }
                h[size_t(j)] = acc > 0.0 ? acc : 0.0;
            }
            for (int ch = 0; ch < kChannels; ++ch) {
                double acc = net.b2[size_t(ch)];
                for (int j = 0; j < hidden; ++j) acc += net.w2[size_t(ch) * hidden + j] * h[size_t(j)];
                const double pre = g.data[cell * kChannels + ch] + acc;
                out.data[cell * kChannels + ch] = std::clamp(pre, -1.0, 1.0);
            }
        }
    }
    for (size_t cell = 0; cell < size_t(g.height) * g.width; ++cell) {
        if (out.data[cell * kChannels + kAlphaChannel] <= double(kAliveThreshold)) {
            for (int ch = 0; ch < kChannels; ++ch) out.data[cell * kChannels + ch] = 0.0;
        }
    }
    return out;
}

double mse(const DGrid& g, const std::vector<double>& target, int channels) {
    const size_t cells = size_t(g.height) * g.width;
    if (target.size() != cells * size_t(channels)) {
        throw std::invalid_argument("reference::mse: target size mismatch");
    }
    double acc = 0.0;
    for (size_t cell = 0; cell < cells; ++cell) {
        for (int ch = 0; ch < channels; ++ch) {
            const double d = g.data[cell * kChannels + ch] - target[cell * size_t(channels) + ch];
            acc += d * d;
        }
    }
    return acc / (double(cells) * channels);
}

double rollout_loss(const Grid& initial, const UpdateNetwork& net, int n_steps,
                    const UpdateMode& mode, RngStream rng, const std::vector<double>& target,
                    int loss_channels) {
    DGrid g = DGrid::from(initial);
    const DNet dnet = DNet::from(net);
    for (int t = 0; t < n_steps; ++t) {
        const std::vector<uint8_t> mask = draw_step_mask(g, mode, rng);
        g = step(g, dnet, mask);
    }
    return mse(g, target, loss_channels);
}

}  // namespace nca::reference
