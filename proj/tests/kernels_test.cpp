#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pinnosc/kernels.hpp"

using pinnosc::kernels::Ops;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// |a-b| measured against the larger magnitude, floored so zeros compare cleanly.
double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        INFO("index ", i);
        CHECK(std::abs(a[i] - b[i]) <= tol * std::max({std::abs(a[i]), std::abs(b[i]), 1.0}));
    }
}

const int kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 31, 32, 33, 48, 64, 100};

}  // namespace

TEST_CASE("dense_forward matches a naive triple-checked evaluation") {
    std::mt19937_64 rng(11);
    const Ops& ops = pinnosc::kernels::scalar_ops();
    for (int rows : {1, 3, 32}) {
        for (int cols : {1, 7, 32, 33}) {
            auto W = random_vec(rng, rows * cols);
            auto x = random_vec(rng, cols);
            auto b = random_vec(rng, rows);
            std::vector<double> y(rows, -1.0);
            ops.dense_forward(W.data(), b.data(), x.data(), y.data(), rows, cols);
            for (int r = 0; r < rows; ++r) {
                double want = b[r];
                for (int c = 0; c < cols; ++c) want += W[r * cols + c] * x[c];
                CHECK(rel_diff(y[r], want) < 1e-14);
            }
            // null bias means zero bias
            ops.dense_forward(W.data(), nullptr, x.data(), y.data(), rows, cols);
            for (int r = 0; r < rows; ++r) {
                double want = 0.0;
                for (int c = 0; c < cols; ++c) want += W[r * cols + c] * x[c];
                CHECK(rel_diff(y[r], want) < 1e-14);
            }
        }
    }
}

TEST_CASE("dense backward kernels accumulate the transpose/outer products") {
    std::mt19937_64 rng(12);
    const Ops& ops = pinnosc::kernels::scalar_ops();
    const int rows = 5, cols = 9;
    auto W = random_vec(rng, rows * cols);
    auto gy = random_vec(rng, rows);
    auto x = random_vec(rng, cols);

    std::vector<double> gx(cols, 0.5);  // accumulation must add, not overwrite
    ops.dense_backward_input(W.data(), gy.data(), gx.data(), rows, cols);
    for (int c = 0; c < cols; ++c) {
        double want = 0.5;
        for (int r = 0; r < rows; ++r) want += W[r * cols + c] * gy[r];
        CHECK(rel_diff(gx[c], want) < 1e-13);
    }

    std::vector<double> gW(rows * cols, 0.25), gb(rows, 0.25);
    ops.dense_backward_params(gy.data(), x.data(), gW.data(), gb.data(), rows, cols);
    for (int r = 0; r < rows; ++r) {
        CHECK(rel_diff(gb[r], 0.25 + gy[r]) < 1e-14);
        for (int c = 0; c < cols; ++c)
            CHECK(rel_diff(gW[r * cols + c], 0.25 + gy[r] * x[c]) < 1e-13);
    }
}

TEST_CASE("tanh_jet_forward reproduces manual chain-rule values") {
    const Ops& ops = pinnosc::kernels::scalar_ops();
    const double z0[2] = {0.0, 1.0};
    const double z1[2] = {1.0, 2.0};
    const double z2[2] = {0.0, -1.0};
    double a0[2], a1[2], a2[2];
    ops.tanh_jet_forward(z0, z1, z2, a0, a1, a2, 2);
    CHECK(a0[0] == 0.0);
    CHECK(a1[0] == 1.0);  // tanh'(0) = 1
    CHECK(a2[0] == 0.0);  // tanh''(0) = 0
    const double t = std::tanh(1.0);
    const double s = 1.0 - t * t;
    CHECK(rel_diff(a0[1], t) < 1e-15);
    CHECK(rel_diff(a1[1], s * 2.0) < 1e-15);
    CHECK(rel_diff(a2[1], s * -1.0 - 2.0 * t * s * 4.0) < 1e-15);
}

TEST_CASE("tanh_jet_backward agrees with finite differences of the forward kernel") {
    std::mt19937_64 rng(13);
    const Ops& ops = pinnosc::kernels::scalar_ops();
    const int n = 6;
    auto z0 = random_vec(rng, n), z1 = random_vec(rng, n), z2 = random_vec(rng, n);
    auto ga0 = random_vec(rng, n), ga1 = random_vec(rng, n), ga2 = random_vec(rng, n);

    std::vector<double> a0(n), a1(n), a2(n);
    ops.tanh_jet_forward(z0.data(), z1.data(), z2.data(), a0.data(), a1.data(), a2.data(), n);
    std::vector<double> gz0(n, 0.0), gz1(n, 0.0), gz2(n, 0.0);
    ops.tanh_jet_backward(z1.data(), z2.data(), a0.data(), ga0.data(), ga1.data(), ga2.data(),
                          gz0.data(), gz1.data(), gz2.data(), n);

    // scalar objective sum_i ga0*a0 + ga1*a1 + ga2*a2, perturbed one input at a time
    auto objective = [&](const std::vector<double>& p0, const std::vector<double>& p1,
                         const std::vector<double>& p2) {
        std::vector<double> b0(n), b1(n), b2(n);
        ops.tanh_jet_forward(p0.data(), p1.data(), p2.data(), b0.data(), b1.data(), b2.data(), n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += ga0[i] * b0[i] + ga1[i] * b1[i] + ga2[i] * b2[i];
        return total;
    };
    const double h = 1e-6;
    for (int i = 0; i < n; ++i) {
        auto fd = [&](std::vector<double>& stream, double grad) {
            const double keep = stream[i];
            stream[i] = keep + h;
            const double up = objective(z0, z1, z2);
            stream[i] = keep - h;
            const double dn = objective(z0, z1, z2);
            stream[i] = keep;
            CHECK(rel_diff((up - dn) / (2 * h), grad) < 1e-7);
        };
        fd(z0, gz0[i]);
        fd(z1, gz1[i]);
        fd(z2, gz2[i]);
    }
}

TEST_CASE("adam_update first step acts like a signed unit step times lr") {
    const Ops& ops = pinnosc::kernels::scalar_ops();
    double p[2] = {1.0, -4.0};
    double m[2] = {0.0, 0.0};
    double v[2] = {0.0, 0.0};
    const double g[2] = {2.0, -0.5};
    const double b1 = 0.9, b2 = 0.999, lr = 3e-3, eps = 1e-8;
    // step 1 bias correction: mhat = g, vhat = g^2 -> update ~ lr*sign(g)
    ops.adam_update(p, m, v, g, 2, lr, b1, b2, eps, 1.0 / (1 - b1), 1.0 / (1 - b2));
    CHECK(rel_diff(m[0], (1 - b1) * 2.0) < 1e-15);
    CHECK(rel_diff(v[0], (1 - b2) * 4.0) < 1e-15);
    CHECK(std::abs(p[0] - (1.0 - lr * 2.0 / (std::sqrt(4.0) + eps))) < 1e-12);
    CHECK(std::abs(p[1] - (-4.0 + lr * 0.5 / (std::sqrt(0.25) + eps))) < 1e-12);
}

#define FOR_BOTH_VARIANTS()                                       \
    const Ops& a = pinnosc::kernels::scalar_ops();                \
    const Ops* b_ = pinnosc::kernels::avx2_ops();                 \
    if (!b_) { MESSAGE("AVX2 unavailable here; skipped"); return; } \
    const Ops& b = *b_;

TEST_CASE("scalar and AVX2 dense kernels are equivalent across sizes") {
    FOR_BOTH_VARIANTS();
    std::mt19937_64 rng(21);
    for (int rows : kSizes) {
        for (int cols : kSizes) {
            auto W = random_vec(rng, rows * cols);
            auto x = random_vec(rng, cols);
            auto bias = random_vec(rng, rows);
            auto gy = random_vec(rng, rows);

            std::vector<double> y1(rows), y2(rows);
            a.dense_forward(W.data(), bias.data(), x.data(), y1.data(), rows, cols);
            b.dense_forward(W.data(), bias.data(), x.data(), y2.data(), rows, cols);
            check_close(y1, y2, 1e-13);

            std::vector<double> gx1(cols, 0.0), gx2(cols, 0.0);
            a.dense_backward_input(W.data(), gy.data(), gx1.data(), rows, cols);
            b.dense_backward_input(W.data(), gy.data(), gx2.data(), rows, cols);
            check_close(gx1, gx2, 1e-13);

            std::vector<double> gW1(rows * cols, 0.0), gW2(rows * cols, 0.0);
            std::vector<double> gb1(rows, 0.0), gb2(rows, 0.0);
            a.dense_backward_params(gy.data(), x.data(), gW1.data(), gb1.data(), rows, cols);
            b.dense_backward_params(gy.data(), x.data(), gW2.data(), gb2.data(), rows, cols);
            check_close(gW1, gW2, 1e-13);
            check_close(gb1, gb2, 1e-13);
        }
    }
}

TEST_CASE("scalar and AVX2 tanh-jet kernels are equivalent across sizes") {
    FOR_BOTH_VARIANTS();
    std::mt19937_64 rng(22);
    for (int n : kSizes) {
        auto z0 = random_vec(rng, n, 2.0), z1 = random_vec(rng, n, 2.0), z2 = random_vec(rng, n, 2.0);
        auto ga0 = random_vec(rng, n), ga1 = random_vec(rng, n), ga2 = random_vec(rng, n);

        std::vector<double> a0(n), a1(n), a2(n), b0(n), b1(n), b2(n);
        a.tanh_jet_forward(z0.data(), z1.data(), z2.data(), a0.data(), a1.data(), a2.data(), n);
        b.tanh_jet_forward(z0.data(), z1.data(), z2.data(), b0.data(), b1.data(), b2.data(), n);
        check_close(a0, b0, 1e-14);
        check_close(a1, b1, 1e-14);
        check_close(a2, b2, 1e-14);

        std::vector<double> ga_z0(n, 0.1), ga_z1(n, 0.1), ga_z2(n, 0.1);
        std::vector<double> gb_z0(n, 0.1), gb_z1(n, 0.1), gb_z2(n, 0.1);
        a.tanh_jet_backward(z1.data(), z2.data(), a0.data(), ga0.data(), ga1.data(), ga2.data(),
                            ga_z0.data(), ga_z1.data(), ga_z2.data(), n);
        b.tanh_jet_backward(z1.data(), z2.data(), a0.data(), ga0.data(), ga1.data(), ga2.data(),
                            gb_z0.data(), gb_z1.data(), gb_z2.data(), n);
        check_close(ga_z0, gb_z0, 1e-13);
        check_close(ga_z1, gb_z1, 1e-13);
        check_close(ga_z2, gb_z2, 1e-13);
    }
}

TEST_CASE("scalar and AVX2 adam_update are equivalent across sizes") {
    FOR_BOTH_VARIANTS();
    std::mt19937_64 rng(23);
    for (int n : kSizes) {
        auto p = random_vec(rng, n), m = random_vec(rng, n, 0.1), g = random_vec(rng, n);
        auto v = random_vec(rng, n, 0.1);
        for (auto& x : v) x = std::abs(x);
        auto p2 = p, m2 = m, v2 = v;
        const double ms = 1.0 / (1 - std::pow(0.9, 7)), vs = 1.0 / (1 - std::pow(0.999, 7));
        a.adam_update(p.data(), m.data(), v.data(), g.data(), n, 3e-3, 0.9, 0.999, 1e-8, ms, vs);
        b.adam_update(p2.data(), m2.data(), v2.data(), g.data(), n, 3e-3, 0.9, 0.999, 1e-8, ms, vs);
        check_close(p, p2, 1e-13);
        check_close(m, m2, 1e-13);
        check_close(v, v2, 1e-13);
    }
}

TEST_CASE("active_ops honors PINN_OSC_KERNELS when set") {
    // The selection is latched on first use, so only sanity-check consistency.
    const Ops& active = pinnosc::kernels::active_ops();
    if (const char* env = std::getenv("PINN_OSC_KERNELS")) {
        CHECK(std::string(active.name) == env);
    } else if (pinnosc::kernels::avx2_ops()) {
        CHECK(std::string(active.name) == "avx2");
    } else {
        CHECK(std::string(active.name) == "scalar");
    }
}
