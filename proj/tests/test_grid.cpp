#include "doctest.h"

#include <stdexcept>

#include "nca/grid.hpp"
#include "nca/rng.hpp"

using namespace nca;

namespace {

Grid random_grid(int h, int w, RngStream& rng, Boundary b = Boundary::torus) {
    Grid g = new_grid(h, w, b);
    for (int i = 0; i < g.cell_count(); ++i) {
        float* cell = g.data.data() + size_t(i) * kChannels;
        const bool alive = rng.next_float() < 0.4f;
        if (!alive) continue;
        for (int ch = 0; ch < kChannels; ++ch) cell[ch] = rng.next_uniform_sym(0.8f);
        cell[kAlphaChannel] = 0.2f + 0.8f * rng.next_float();  // well clear of the threshold
    }
    return g;
}

}  // namespace

TEST_CASE("new_grid: sizing rule and zero init") {
    CHECK(grid_side_for_target(32) == 72);
    Grid g = new_grid(72, 72, Boundary::torus);
    CHECK(g.height == 72);
    CHECK(g.width == 72);
    for (float v : g.data) CHECK(v == 0.0f);
}

TEST_CASE("new_grid: minimal and degenerate dimensions") {
    Grid g = new_grid(1, 1, Boundary::torus);
    CHECK(g.cell_count() == 1);
    CHECK_THROWS_AS(new_grid(0, 5, Boundary::torus), std::invalid_argument);
    CHECK_THROWS_AS(new_grid(3, -1, Boundary::torus), std::invalid_argument);
}

TEST_CASE("updatable_mask: all-dead grid is empty") {
    Grid g = new_grid(6, 7, Boundary::torus);
    CHECK(updatable_mask(g).count() == 0);
}

TEST_CASE("updatable_mask: single alive cell activates its 3x3 window") {
    Grid g = new_grid(5, 5, Boundary::torus);
    g.cell(2, 2)[kAlphaChannel] = 1.0f;
    UpdateMask m = updatable_mask(g);
    CHECK(m.count() == 9);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            const bool in_window = std::abs(r - 2) <= 1 && std::abs(c - 2) <= 1;
            CHECK(m.on[size_t(g.index(r, c))] == (in_window ? 1 : 0));
        }
    }
}

TEST_CASE("updatable_mask: alpha exactly at threshold counts as dead") {
    Grid g = new_grid(4, 4, Boundary::torus);
    for (int i = 0; i < g.cell_count(); ++i) {
        g.data[size_t(i) * kChannels + kAlphaChannel] = 0.1f;
    }
    CHECK(updatable_mask(g).count() == 0);
}

TEST_CASE("updatable_mask: zero-padded boundary does not wrap") {
    Grid g = new_grid(5, 5, Boundary::zero_padded);
    g.cell(0, 0)[kAlphaChannel] = 1.0f;
    UpdateMask m = updatable_mask(g);
    CHECK(m.count() == 4);  // the 2x2 corner only
    Grid t = new_grid(5, 5, Boundary::torus);
    t.cell(0, 0)[kAlphaChannel] = 1.0f;
    CHECK(updatable_mask(t).count() == 9);  // wraps to the far edges
}

TEST_CASE("reset_dead semantics") {
    Grid g = new_grid(1, 3, Boundary::torus);
    float* weak = g.cell(0, 0);
    weak[kAlphaChannel] = 0.05f;
    weak[7] = 0.9f;
    float* alive = g.cell(0, 1);
    alive[kAlphaChannel] = 0.8f;
    alive[5] = -0.3f;
    float* boundary_case = g.cell(0, 2);
    boundary_case[kAlphaChannel] = 0.1f;  // not > 0.1, so dead
    boundary_case[2] = 0.4f;

    Grid out = reset_dead(g);
    for (int ch = 0; ch < kChannels; ++ch) CHECK(out.cell(0, 0)[ch] == 0.0f);
    CHECK(out.cell(0, 1)[kAlphaChannel] == 0.8f);
    CHECK(out.cell(0, 1)[5] == -0.3f);
    for (int ch = 0; ch < kChannels; ++ch) CHECK(out.cell(0, 2)[ch] == 0.0f);
}

TEST_CASE("reset_dead is idempotent on random grids") {
    RngStream rng{7, 0};
    for (int it = 0; it < 20; ++it) {
        Grid g = random_grid(9, 11, rng);
        // plant some weak cells that the generator avoided
        for (int i = 0; i < g.cell_count(); i += 5) {
            g.data[size_t(i) * kChannels + kAlphaChannel] = 0.07f;
            g.data[size_t(i) * kChannels + 9] = 0.5f;
        }
        Grid once = reset_dead(g);
        Grid twice = reset_dead(once);
        CHECK(once.data == twice.data);
    }
}

TEST_CASE("neighborhood: torus wrap at the corner") {
    Grid g = new_grid(4, 5, Boundary::torus);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 5; ++c) g.cell(r, c)[0] = float(r * 10 + c);
    }
    auto n = neighborhood(g, 0, 0);
    CHECK(n[0 * kChannels + 0] == doctest::Approx(float(3 * 10 + 4)));  // (-1,-1) -> (3,4)
    CHECK(n[1 * kChannels + 0] == doctest::Approx(float(3 * 10 + 0)));  // (-1, 0) -> (3,0)
    CHECK(n[4 * kChannels + 0] == doctest::Approx(0.0f));               // center (0,0)
    CHECK(n[8 * kChannels + 0] == doctest::Approx(float(1 * 10 + 1)));  // (+1,+1) -> (1,1)
}

TEST_CASE("neighborhood: interior window and out-of-bounds center") {
    Grid g = new_grid(4, 4, Boundary::zero_padded);
    g.cell(1, 1)[2] = 0.5f;
    auto n = neighborhood(g, 2, 2);
    CHECK(n[0 * kChannels + 2] == 0.5f);
    CHECK_THROWS_AS(neighborhood(g, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(neighborhood(g, 0, -1), std::invalid_argument);
}

TEST_CASE("neighborhood: 1x1 torus grid repeats the single cell") {
    Grid g = new_grid(1, 1, Boundary::torus);
    for (int ch = 0; ch < kChannels; ++ch) g.cell(0, 0)[ch] = 0.1f * float(ch);
    auto n = neighborhood(g, 0, 0);
    for (int s = 0; s < 9; ++s) {
        for (int ch = 0; ch < kChannels; ++ch) {
            CHECK(n[size_t(s * kChannels + ch)] == 0.1f * float(ch));
        }
    }
}

TEST_CASE("neighborhood: zero-padded boundary substitutes zero cells") {
    Grid g = new_grid(3, 3, Boundary::zero_padded);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) g.cell(r, c)[0] = 1.0f;
    }
    auto n = neighborhood(g, 0, 0);
    CHECK(n[0 * kChannels + 0] == 0.0f);  // (-1,-1) out of bounds
    CHECK(n[1 * kChannels + 0] == 0.0f);
    CHECK(n[3 * kChannels + 0] == 0.0f);
    CHECK(n[4 * kChannels + 0] == 1.0f);
    CHECK(n[8 * kChannels + 0] == 1.0f);
}

TEST_CASE("neighborhood commutes with torus shifts") {
    RngStream rng{42, 0};
    Grid g = random_grid(6, 8, rng);
    for (auto [dr, dc] : {std::pair{1, 0}, std::pair{-2, 3}, std::pair{5, -7}}) {
        Grid s = shift(g, dr, dc);
        for (auto [r, c] : {std::pair{0, 0}, std::pair{3, 4}, std::pair{5, 7}}) {
            auto a = neighborhood(g, r, c);
            auto b = neighborhood(s, wrap_index(r + dr, g.height), wrap_index(c + dc, g.width));
            CHECK(a == b);
        }
    }
}
