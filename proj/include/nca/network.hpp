#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "nca/grid.hpp"
#include "nca/rng.hpp"

namespace nca {

// Two-layer per-cell rule: 144 inputs -> hidden (relu) -> 16 outputs.
// The output is a residual delta added to the central cell's state.
struct UpdateNetwork {
    int hidden_size = 128;
    std::vector<float> w1;  // hidden_size x 144, row-major
    std::vector<float> b1;  // hidden_size
    std::vector<float> w2;  // 16 x hidden_size, row-major
    std::vector<float> b2;  // 16

    size_t param_count() const {
        return w1.size() + b1.size() + w2.size() + b2.size();
    }

    // layer2 starts at zero so the initial rule is the identity map;
    // layer1 gets small uniform values scaled by 1/sqrt(144)
    static UpdateNetwork init(int hidden_size, RngStream& rng);

    static UpdateNetwork zeros(int hidden_size);

    bool all_finite() const;

    // canonical parameter order: w1, b1, w2, b2 (matches the checkpoint layout)
    template <typename F>
    void for_each_buffer(F&& f) {
        f(w1);
        f(b1);
        f(w2);
        f(b2);
    }
    template <typename F>
    void for_each_buffer(F&& f) const {
        f(w1);
        f(b1);
        f(w2);
        f(b2);
    }

    std::vector<float> flatten() const;
    void unflatten(std::span<const float> flat);
};

struct NetworkGradients {
    std::vector<float> w1, b1, w2, b2;

    static NetworkGradients zeros_like(const UpdateNetwork& net);
    void zero();
    void add_scaled(const NetworkGradients& other, float scale);

    template <typename F>
    void for_each_buffer(F&& f) {
        f(w1);
        f(b1);
        f(w2);
        f(b2);
    }
    template <typename F>
    void for_each_buffer(F&& f) const {
        f(w1);
        f(b1);
        f(w2);
        f(b2);
    }
};

enum class UpdateKind { synchronous, asynchronous };

struct UpdateMode {
    UpdateKind kind = UpdateKind::asynchronous;
    float async_rate = 0.5f;  // per-cell Bernoulli probability, in (0, 1]
    bool exact_half = false;  // permutation-based alternative to Bernoulli draws
};

// layer2(relu(layer1(nbhd))); throws std::invalid_argument on non-finite input
std::array<float, kChannels> forward_cell(const UpdateNetwork& net,
                                          std::span<const float, kNeighborhoodSize> nbhd);

}  // namespace nca
