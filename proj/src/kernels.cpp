#include "nca/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace nca::kernels {

namespace {

constexpr int kMaxHidden = 512;

// neighborhood slot s corresponds to offset (kDr[s], kDc[s]), row-major window
constexpr int kDr[9] = {-1, -1, -1, 0, 0, 0, 1, 1, 1};
constexpr int kDc[9] = {-1, 0, 1, -1, 0, 1, -1, 0, 1};

inline void gather_row(const Grid& g, int cell, float* __restrict x) {
    const int r = cell / g.width;
    const int c = cell % g.width;
    const bool torus = g.boundary == Boundary::torus;
    const bool interior = r > 0 && r < g.height - 1 && c > 0 && c < g.width - 1;
    if (interior) {
        for (int s = 0; s < 9; ++s) {
            const float* src = g.cell(r + kDr[s], c + kDc[s]);
            std::memcpy(x + s * kChannels, src, kChannels * sizeof(float));
        }
        return;
    }
    for (int s = 0; s < 9; ++s) {
        int rr = r + kDr[s], cc = c + kDc[s];
        if (torus) {
            rr = wrap_index(rr, g.height);
            cc = wrap_index(cc, g.width);
        } else if (rr < 0 || rr >= g.height || cc < 0 || cc >= g.width) {
            std::memset(x + s * kChannels, 0, kChannels * sizeof(float));
            continue;
        }
        std::memcpy(x + s * kChannels, g.cell(rr, cc), kChannels * sizeof(float));
    }
}

// h = relu(w1 x + b1). The j-blocks keep the accumulators in registers
// across the whole k loop instead of streaming the hidden vector per k.
inline void layer1_forward(const PackedNetwork& net, const float* __restrict x,
                           float* __restrict a) {
    const int hidden = net.hidden;
    const float* __restrict w1t = net.w1t.data();
    const float* __restrict b1 = net.b1.data();
    constexpr int JB = 16;
    int j0 = 0;
    for (; j0 + JB <= hidden; j0 += JB) {
        float acc[JB];
        for (int jj = 0; jj < JB; ++jj) acc[jj] = b1[j0 + jj];
        for (int k = 0; k < kNeighborhoodSize; ++k) {
            const float xk = x[k];
            if (xk == 0.0f) continue;
            const float* __restrict wk = w1t + size_t(k) * hidden + j0;
            for (int jj = 0; jj < JB; ++jj) acc[jj] += xk * wk[jj];
        }
        for (int jj = 0; jj < JB; ++jj) a[j0 + jj] = acc[jj] > 0.0f ? acc[jj] : 0.0f;
    }
    for (; j0 < hidden; ++j0) {
        float acc = b1[j0];
        for (int k = 0; k < kNeighborhoodSize; ++k) acc += x[k] * w1t[size_t(k) * hidden + j0];
        a[j0] = acc > 0.0f ? acc : 0.0f;
    }
}

// delta = w2 a + b2
inline void layer2_forward(const PackedNetwork& net, const float* __restrict a,
                           float* __restrict d) {
    const int hidden = net.hidden;
    for (int c = 0; c < kChannels; ++c) {
        const float* __restrict row = net.w2.data() + size_t(c) * hidden;
        float acc = 0.0f;
#pragma omp simd reduction(+ : acc)
        for (int j = 0; j < hidden; ++j) acc += row[j] * a[j];
        d[c] = net.b2[size_t(c)] + acc;
    }
}

void build_active_list(const std::vector<uint8_t>& mask, Workspace& ws, int cells) {
    ws.active.clear();
    for (int i = 0; i < cells; ++i) {
        if (mask[size_t(i)]) ws.active.push_back(i);
    }
    ws.cell_row.assign(size_t(cells), -1);
    for (int r = 0; r < int(ws.active.size()); ++r) ws.cell_row[size_t(ws.active[r])] = r;
}

}  // namespace

PackedNetwork pack(const UpdateNetwork& net) {
    if (net.hidden_size < 1 || net.hidden_size > kMaxHidden) {
        throw std::invalid_argument("pack: hidden_size out of supported range");
    }
    PackedNetwork p;
    p.hidden = net.hidden_size;
    p.w1 = net.w1;
    p.b1 = net.b1;
    p.w2 = net.w2;
    p.b2 = net.b2;
    p.w1t.assign(size_t(kNeighborhoodSize) * p.hidden, 0.0f);
    for (int j = 0; j < p.hidden; ++j) {
        for (int k = 0; k < kNeighborhoodSize; ++k) {
            p.w1t[size_t(k) * p.hidden + j] = net.w1[size_t(j) * kNeighborhoodSize + k];
        }
    }
    return p;
}

std::vector<uint8_t> draw_step_mask(const Grid& g, const UpdateMode& mode, RngStream& rng) {
    UpdateMask um = updatable_mask(g);
    if (mode.kind == UpdateKind::synchronous) return std::move(um.on);

    const int cells = g.cell_count();
    std::vector<uint8_t> mask(size_t(cells), 0);
    if (mode.exact_half) {
        std::vector<int> perm(static_cast<size_t>(cells));
        for (int i = 0; i < cells; ++i) perm[size_t(i)] = i;
        for (int i = cells - 1; i > 0; --i) {
            const int j = int(rng.next_below(uint32_t(i + 1)));
            std::swap(perm[size_t(i)], perm[size_t(j)]);
        }
        const int chosen = int(mode.async_rate * float(cells));
        for (int i = 0; i < chosen; ++i) {
            const int cell = perm[size_t(i)];
            mask[size_t(cell)] = um.on[size_t(cell)];
        }
        return mask;
    }
    for (int i = 0; i < cells; ++i) {
        const bool hit = rng.next_float() < mode.async_rate;  // drawn for every cell
        mask[size_t(i)] = (hit && um.on[size_t(i)]) ? 1 : 0;
    }
    return mask;
}

void step_into(const Grid& prev, const PackedNetwork& net, const std::vector<uint8_t>& mask,
               Grid& out, Workspace& ws) {
    const int cells = prev.cell_count();
    const int hidden = net.hidden;
    build_active_list(mask, ws, cells);
    const int n = int(ws.active.size());
    ws.x.resize(size_t(n) * kNeighborhoodSize);
    ws.a.resize(size_t(n) * hidden);

    out.height = prev.height;
    out.width = prev.width;
    out.boundary = prev.boundary;
    out.data = prev.data;

#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const int cell = ws.active[size_t(r)];
        float* x = ws.x.data() + size_t(r) * kNeighborhoodSize;
        float* a = ws.a.data() + size_t(r) * hidden;
        gather_row(prev, cell, x);
        layer1_forward(net, x, a);
        float delta[kChannels];
        layer2_forward(net, a, delta);
        const float* old_state = prev.data.data() + size_t(cell) * kChannels;
        float* new_state = out.data.data() + size_t(cell) * kChannels;
        for (int ch = 0; ch < kChannels; ++ch) {
            new_state[ch] = std::clamp(old_state[ch] + delta[ch], -1.0f, 1.0f);
        }
    }

#pragma omp parallel for schedule(static)
    for (int i = 0; i < cells; ++i) {
        float* cell = out.data.data() + size_t(i) * kChannels;
        if (cell[kAlphaChannel] <= kAliveThreshold) {
            std::memset(cell, 0, kChannels * sizeof(float));
        }
    }
}

void backward_step(const Grid& prev, const Grid& next, const PackedNetwork& net,
                   const std::vector<uint8_t>& mask, const std::vector<float>& d_next,
                   std::vector<float>& d_prev, NetworkGradients& grads, Workspace& ws) {
    const int cells = prev.cell_count();
    const int hidden = net.hidden;
    build_active_list(mask, ws, cells);
    const int n = int(ws.active.size());
    ws.x.resize(size_t(n) * kNeighborhoodSize);
    ws.a.resize(size_t(n) * hidden);
    ws.dpre.resize(size_t(n) * kChannels);
    ws.dh.resize(size_t(n) * hidden);
    ws.dx.resize(size_t(n) * kNeighborhoodSize);
    d_prev.assign(size_t(cells) * kChannels, 0.0f);

    // recompute the forward pass of the masked cells; the clamp saturation
    // pattern falls out of the recomputed pre-clamp values bitwise
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const int cell = ws.active[size_t(r)];
        float* x = ws.x.data() + size_t(r) * kNeighborhoodSize;
        float* a = ws.a.data() + size_t(r) * hidden;
        gather_row(prev, cell, x);
        layer1_forward(net, x, a);
        float delta[kChannels];
        layer2_forward(net, a, delta);
        const float* old_state = prev.data.data() + size_t(cell) * kChannels;
        const bool survived =
            next.data[size_t(cell) * kChannels + kAlphaChannel] > kAliveThreshold;
        float* dp = ws.dpre.data() + size_t(r) * kChannels;
        for (int ch = 0; ch < kChannels; ++ch) {
            const float pre = old_state[ch] + delta[ch];
            const bool inside = pre > -1.0f && pre < 1.0f;
            dp[ch] = (survived && inside) ? d_next[size_t(cell) * kChannels + ch] : 0.0f;
        }
    }

    // layer-2 parameter gradients; per output row the cells accumulate in
    // fixed ascending order into register-resident buffers
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kChannels; ++c) {
        float acc[kMaxHidden];
        std::memset(acc, 0, size_t(hidden) * sizeof(float));
        float gb = 0.0f;
        for (int r = 0; r < n; ++r) {
            const float g = ws.dpre[size_t(r) * kChannels + c];
            if (g == 0.0f) continue;
            gb += g;
            const float* __restrict a = ws.a.data() + size_t(r) * hidden;
            for (int j = 0; j < hidden; ++j) acc[j] += g * a[j];
        }
        float* __restrict gw2_row = grads.w2.data() + size_t(c) * hidden;
        for (int j = 0; j < hidden; ++j) gw2_row[j] += acc[j];
        grads.b2[size_t(c)] += gb;
    }

    // dh = (dpre * w2) ∘ relu'
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const float* __restrict dp = ws.dpre.data() + size_t(r) * kChannels;
        const float* __restrict a = ws.a.data() + size_t(r) * hidden;
        float* __restrict dh = ws.dh.data() + size_t(r) * hidden;
        float acc[kMaxHidden];
        std::memset(acc, 0, size_t(hidden) * sizeof(float));
        for (int c = 0; c < kChannels; ++c) {
            const float g = dp[c];
            if (g == 0.0f) continue;
            const float* __restrict row = net.w2.data() + size_t(c) * hidden;
            for (int j = 0; j < hidden; ++j) acc[j] += g * row[j];
        }
        for (int j = 0; j < hidden; ++j) dh[j] = a[j] > 0.0f ? acc[j] : 0.0f;
    }

    // layer-1 parameter gradients. Threads own disjoint hidden rows; the
    // r-blocks keep the gathered inputs hot in cache while every (j,k)
    // entry still accumulates cells in ascending order.
#pragma omp parallel
    {
        const int nt = omp_get_num_threads();
        const int tid = omp_get_thread_num();
        const int j_lo = int(size_t(hidden) * tid / nt);
        const int j_hi = int(size_t(hidden) * (tid + 1) / nt);
        constexpr int RB = 64;
        for (int r0 = 0; r0 < n; r0 += RB) {
            const int r1 = std::min(n, r0 + RB);
            for (int j = j_lo; j < j_hi; ++j) {
                float* __restrict gw1_row = grads.w1.data() + size_t(j) * kNeighborhoodSize;
                float gb = 0.0f;
                for (int r = r0; r < r1; ++r) {
                    const float g = ws.dh[size_t(r) * hidden + j];
                    if (g == 0.0f) continue;
                    gb += g;
                    const float* __restrict x = ws.x.data() + size_t(r) * kNeighborhoodSize;
                    for (int k = 0; k < kNeighborhoodSize; ++k) gw1_row[k] += g * x[k];
                }
                grads.b1[size_t(j)] += gb;
            }
        }
    }

    // dx = dh * w1: gradient w.r.t. the gathered neighborhood values
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        const float* __restrict dh = ws.dh.data() + size_t(r) * hidden;
        float acc[kNeighborhoodSize] = {};
        for (int j = 0; j < hidden; ++j) {
            const float g = dh[j];
            if (g == 0.0f) continue;
            const float* __restrict row = net.w1.data() + size_t(j) * kNeighborhoodSize;
            for (int k = 0; k < kNeighborhoodSize; ++k) acc[k] += g * row[k];
        }
        std::memcpy(ws.dx.data() + size_t(r) * kNeighborhoodSize, acc,
                    kNeighborhoodSize * sizeof(float));
    }

    // gather-form scatter into d_prev: cell p appears at slot s of the
    // neighborhood centered at p - offset(s); fixed 9-term order per cell
    const bool torus = prev.boundary == Boundary::torus;
    const int h = prev.height, w = prev.width;
#pragma omp parallel for schedule(static)
    for (int p = 0; p < cells; ++p) {
        float* dst = d_prev.data() + size_t(p) * kChannels;
        if (mask[size_t(p)]) {
            const float* dp = ws.dpre.data() + size_t(ws.cell_row[size_t(p)]) * kChannels;
            std::memcpy(dst, dp, kChannels * sizeof(float));  // residual path
        } else {
            const bool survived =
                next.data[size_t(p) * kChannels + kAlphaChannel] > kAliveThreshold;
            if (survived) {
                std::memcpy(dst, d_next.data() + size_t(p) * kChannels,
                            kChannels * sizeof(float));
            }
        }
        const int pr = p / w, pc = p % w;
        for (int s = 0; s < 9; ++s) {
            int cr = pr - kDr[s], cc = pc - kDc[s];
            if (torus) {
                cr = wrap_index(cr, h);
                cc = wrap_index(cc, w);
            } else if (cr < 0 || cr >= h || cc < 0 || cc >= w) {
                continue;
            }
            const int row = ws.cell_row[size_t(cr * w + cc)];
            if (row < 0) continue;
            const float* dx = ws.dx.data() + size_t(row) * kNeighborhoodSize + s * kChannels;
            for (int ch = 0; ch < kChannels; ++ch) dst[ch] += dx[ch];
        }
    }
}

}  // namespace nca::kernels
