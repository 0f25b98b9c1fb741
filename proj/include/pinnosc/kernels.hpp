#pragma once

// Dense-math kernels behind the jet propagation and the optimizer update.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// compiled on x86-64 and picked at runtime when the CPU supports it.
// Variants agree to rounding (multi-accumulator dots reassociate), so
// cross-variant checks use tolerances; within one selected variant results
// are bitwise reproducible.

namespace pinnosc::kernels {

struct Ops {
    const char* name;

    // y[r] = sum_c W[r*cols+c] * x[c] + (bias ? bias[r] : 0)
    void (*dense_forward)(const double* W, const double* bias, const double* x,
                          double* y, int rows, int cols);

    // gx[c] += sum_r W[r*cols+c] * gy[r]
    void (*dense_backward_input)(const double* W, const double* gy, double* gx,
                                 int rows, int cols);

    // gW[r*cols+c] += gy[r] * x[c]; gbias[r] += gy[r] when gbias is non-null
    void (*dense_backward_params)(const double* gy, const double* x, double* gW,
                                  double* gbias, int rows, int cols);

    // Second-order Taylor streams through tanh, n lanes:
    //   a0 = tanh(z0); s = 1 - a0^2
    //   a1 = s*z1
    //   a2 = s*z2 - 2*a0*s*z1^2
    void (*tanh_jet_forward)(const double* z0, const double* z1, const double* z2,
                             double* a0, double* a1, double* a2, int n);

    // Adjoint of the above given upstream ga0..ga2, accumulating into gz0..gz2.
    // With s = 1 - a0^2, sp = -2*a0*s, ss = -2*s^2 + 4*a0^2*s:
    //   gz0 += ga0*s + ga1*sp*z1 + ga2*(sp*z2 + ss*z1^2)
    //   gz1 += ga1*s + ga2*2*sp*z1
    //   gz2 += ga2*s
    void (*tanh_jet_backward)(const double* z1, const double* z2, const double* a0,
                              const double* ga0, const double* ga1, const double* ga2,
                              double* gz0, double* gz1, double* gz2, int n);

    // Adam with precomputed bias-correction factors:
    //   m = beta1*m + (1-beta1)*g
    //   v = beta2*v + (1-beta2)*g^2
    //   p -= lr * (m*mhat_scale) / (sqrt(v*vhat_scale) + eps)
    void (*adam_update)(double* p, double* m, double* v, const double* g, int n,
                        double lr, double beta1, double beta2, double eps,
                        double mhat_scale, double vhat_scale);
};

const Ops& scalar_ops();

// Null when this build or this CPU cannot run AVX2.
const Ops* avx2_ops();

// Selected once per process: env PINN_OSC_KERNELS=scalar|avx2 forces a
// variant (throws std::runtime_error if it cannot run), otherwise the widest
// supported variant wins.
const Ops& active_ops();

}  // namespace pinnosc::kernels
