#include "pinnosc/kernels.hpp"

#include <cmath>

// Reference semantics for every kernel: plain loops, in-order accumulation.

namespace pinnosc::kernels {
namespace {

void dense_forward_scalar(const double* W, const double* bias, const double* x,
                          double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* row = W + static_cast<long>(r) * cols;
        double acc = bias ? bias[r] : 0.0;
        for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void dense_backward_input_scalar(const double* W, const double* gy, double* gx,
                                 int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* row = W + static_cast<long>(r) * cols;
        const double g = gy[r];
        if (g == 0.0) continue;
        for (int c = 0; c < cols; ++c) gx[c] += row[c] * g;
    }
}

void dense_backward_params_scalar(const double* gy, const double* x, double* gW,
                                  double* gbias, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double g = gy[r];
        if (gbias) gbias[r] += g;
        if (g == 0.0) continue;
        double* grow = gW + static_cast<long>(r) * cols;
        for (int c = 0; c < cols; ++c) grow[c] += g * x[c];
    }
}

void tanh_jet_forward_scalar(const double* z0, const double* z1, const double* z2,
                             double* a0, double* a1, double* a2, int n) {
    for (int i = 0; i < n; ++i) {
        const double t = std::tanh(z0[i]);
        const double s = 1.0 - t * t;
        a0[i] = t;
        a1[i] = s * z1[i];
        a2[i] = s * z2[i] - 2.0 * t * s * z1[i] * z1[i];
    }
}

void tanh_jet_backward_scalar(const double* z1, const double* z2, const double* a0,
                              const double* ga0, const double* ga1, const double* ga2,
                              double* gz0, double* gz1, double* gz2, int n) {
    for (int i = 0; i < n; ++i) {
        const double t = a0[i];
        const double s = 1.0 - t * t;
        const double sp = -2.0 * t * s;
        const double ss = -2.0 * s * s + 4.0 * t * t * s;
        gz0[i] += ga0[i] * s + ga1[i] * sp * z1[i] + ga2[i] * (sp * z2[i] + ss * z1[i] * z1[i]);
        gz1[i] += ga1[i] * s + ga2[i] * 2.0 * sp * z1[i];
        gz2[i] += ga2[i] * s;
    }
}

void adam_update_scalar(double* p, double* m, double* v, const double* g, int n,
                        double lr, double beta1, double beta2, double eps,
                        double mhat_scale, double vhat_scale) {
    for (int i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] * mhat_scale) / (std::sqrt(v[i] * vhat_scale) + eps);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        dense_forward_scalar,
        dense_backward_input_scalar,
        dense_backward_params_scalar,
        tanh_jet_forward_scalar,
        tanh_jet_backward_scalar,
        adam_update_scalar,
    };
    return ops;
}

}  // namespace pinnosc::kernels
