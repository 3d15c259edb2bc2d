#include "nca/network.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace nca {

UpdateNetwork UpdateNetwork::zeros(int hidden_size) {
    if (hidden_size < 1) throw std::invalid_argument("hidden_size must be >= 1");
    UpdateNetwork net;
    net.hidden_size = hidden_size;
    net.w1.assign(size_t(hidden_size) * kNeighborhoodSize, 0.0f);
    net.b1.assign(size_t(hidden_size), 0.0f);
    net.w2.assign(size_t(kChannels) * hidden_size, 0.0f);
    net.b2.assign(size_t(kChannels), 0.0f);
    return net;
}

UpdateNetwork UpdateNetwork::init(int hidden_size, RngStream& rng) {
    UpdateNetwork net = zeros(hidden_size);
    const float scale = 1.0f / std::sqrt(float(kNeighborhoodSize));
    for (float& w : net.w1) w = rng.next_uniform_sym(scale);
    // b1, w2, b2 stay zero: the initial rule is the identity map
    return net;
}

bool UpdateNetwork::all_finite() const {
    bool ok = true;
    for_each_buffer([&](const std::vector<float>& buf) {
        for (float v : buf) {
            if (!std::isfinite(v)) ok = false;
        }
    });
    return ok;
}

std::vector<float> UpdateNetwork::flatten() const {
    std::vector<float> flat;
    flat.reserve(param_count());
    for_each_buffer([&](const std::vector<float>& buf) {
        flat.insert(flat.end(), buf.begin(), buf.end());
    });
    return flat;
}

void UpdateNetwork::unflatten(std::span<const float> flat) {
    if (flat.size() != param_count()) {
        throw std::invalid_argument("unflatten: parameter count mismatch");
    }
    size_t offset = 0;
    for_each_buffer([&](std::vector<float>& buf) {
        std::memcpy(buf.data(), flat.data() + offset, buf.size() * sizeof(float));
        offset += buf.size();
    });
}

NetworkGradients NetworkGradients::zeros_like(const UpdateNetwork& net) {
    NetworkGradients g;
    g.w1.assign(net.w1.size(), 0.0f);
    g.b1.assign(net.b1.size(), 0.0f);
    g.w2.assign(net.w2.size(), 0.0f);
    g.b2.assign(net.b2.size(), 0.0f);
    return g;
}

void NetworkGradients::zero() {
    for_each_buffer([](std::vector<float>& buf) { std::fill(buf.begin(), buf.end(), 0.0f); });
}

void NetworkGradients::add_scaled(const NetworkGradients& other, float scale) {
    auto axpy = [scale](std::vector<float>& dst, const std::vector<float>& src) {
        for (size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
    };
    axpy(w1, other.w1);
    axpy(b1, other.b1);
    axpy(w2, other.w2);
    axpy(b2, other.b2);
}

std::array<float, kChannels> forward_cell(const UpdateNetwork& net,
                                          std::span<const float, kNeighborhoodSize> nbhd) {
    for (float v : nbhd) {
        if (!std::isfinite(v)) throw std::invalid_argument("forward_cell: non-finite input");
    }
    const int hidden = net.hidden_size;
    std::vector<float> h(size_t(hidden), 0.0f);
    for (int j = 0; j < hidden; ++j) {
        const float* row = net.w1.data() + size_t(j) * kNeighborhoodSize;
        float acc = net.b1[size_t(j)];
        for (int k = 0; k < kNeighborhoodSize; ++k) acc += row[k] * nbhd[size_t(k)];
        h[size_t(j)] = acc > 0.0f ? acc : 0.0f;
    }
    std::array<float, kChannels> out{};
    for (int c = 0; c < kChannels; ++c) {
        const float* row = net.w2.data() + size_t(c) * hidden;
        float acc = net.b2[size_t(c)];
        for (int j = 0; j < hidden; ++j) acc += row[j] * h[size_t(j)];
        out[size_t(c)] = acc;
    }
    return out;
}

}  // namespace nca
