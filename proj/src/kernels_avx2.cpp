// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma; nothing here may run unless the host CPU reports both
// (checked in avx2_ops below before the table is handed out).

#include "pinnosc/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace pinnosc::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

void dense_forward_avx2(const double* W, const double* bias, const double* x,
                        double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* row = W + static_cast<long>(r) * cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        int c = 0;
        for (; c + 8 <= cols; c += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c + 4), _mm256_loadu_pd(x + c + 4), acc1);
        }
        if (c + 4 <= cols) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc0);
            c += 4;
        }
        double acc = hsum(_mm256_add_pd(acc0, acc1)) + (bias ? bias[r] : 0.0);
        for (; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void dense_backward_input_avx2(const double* W, const double* gy, double* gx,
                               int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double g = gy[r];
        if (g == 0.0) continue;
        const double* row = W + static_cast<long>(r) * cols;
        const __m256d vg = _mm256_set1_pd(g);
        int c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(gx + c);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), vg, acc);
            _mm256_storeu_pd(gx + c, acc);
        }
        for (; c < cols; ++c) gx[c] += row[c] * g;
    }
}

void dense_backward_params_avx2(const double* gy, const double* x, double* gW,
                                double* gbias, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double g = gy[r];
        if (gbias) gbias[r] += g;
        if (g == 0.0) continue;
        double* grow = gW + static_cast<long>(r) * cols;
        const __m256d vg = _mm256_set1_pd(g);
        int c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(grow + c);
            acc = _mm256_fmadd_pd(vg, _mm256_loadu_pd(x + c), acc);
            _mm256_storeu_pd(grow + c, acc);
        }
        for (; c < cols; ++c) grow[c] += g * x[c];
    }
}

// tanh itself stays on libm lane by lane (no vector tanh dependency); the
// surrounding jet arithmetic is vectorized.
void tanh_jet_forward_avx2(const double* z0, const double* z1, const double* z2,
                           double* a0, double* a1, double* a2, int n) {
    for (int i = 0; i < n; ++i) a0[i] = std::tanh(z0[i]);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d mtwo = _mm256_set1_pd(-2.0);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(a0 + i);
        const __m256d v1 = _mm256_loadu_pd(z1 + i);
        const __m256d v2 = _mm256_loadu_pd(z2 + i);
        const __m256d s = _mm256_fnmadd_pd(t, t, one);  // 1 - t*t
        _mm256_storeu_pd(a1 + i, _mm256_mul_pd(s, v1));
        const __m256d ts = _mm256_mul_pd(_mm256_mul_pd(mtwo, t), s);
        const __m256d v1sq = _mm256_mul_pd(v1, v1);
        _mm256_storeu_pd(a2 + i, _mm256_fmadd_pd(ts, v1sq, _mm256_mul_pd(s, v2)));
    }
    for (; i < n; ++i) {
        const double t = a0[i];
        const double s = 1.0 - t * t;
        a1[i] = s * z1[i];
        a2[i] = s * z2[i] - 2.0 * t * s * z1[i] * z1[i];
    }
}

void tanh_jet_backward_avx2(const double* z1, const double* z2, const double* a0,
                            const double* ga0, const double* ga1, const double* ga2,
                            double* gz0, double* gz1, double* gz2, int n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d mtwo = _mm256_set1_pd(-2.0);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d two = _mm256_set1_pd(2.0);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(a0 + i);
        const __m256d v1 = _mm256_loadu_pd(z1 + i);
        const __m256d v2 = _mm256_loadu_pd(z2 + i);
        const __m256d g0 = _mm256_loadu_pd(ga0 + i);
        const __m256d g1 = _mm256_loadu_pd(ga1 + i);
        const __m256d g2 = _mm256_loadu_pd(ga2 + i);
        const __m256d s = _mm256_fnmadd_pd(t, t, one);
        const __m256d sp = _mm256_mul_pd(_mm256_mul_pd(mtwo, t), s);
        const __m256d tt = _mm256_mul_pd(t, t);
        // ss = -2*s^2 + 4*t^2*s
        const __m256d ss = _mm256_fmadd_pd(_mm256_mul_pd(four, tt), s,
                                           _mm256_mul_pd(mtwo, _mm256_mul_pd(s, s)));
        const __m256d v1sq = _mm256_mul_pd(v1, v1);
        // gz0 += g0*s + g1*sp*v1 + g2*(sp*v2 + ss*v1^2)
        __m256d acc = _mm256_loadu_pd(gz0 + i);
        acc = _mm256_fmadd_pd(g0, s, acc);
        acc = _mm256_fmadd_pd(g1, _mm256_mul_pd(sp, v1), acc);
        acc = _mm256_fmadd_pd(g2, _mm256_fmadd_pd(ss, v1sq, _mm256_mul_pd(sp, v2)), acc);
        _mm256_storeu_pd(gz0 + i, acc);
        // gz1 += g1*s + g2*2*sp*v1
        acc = _mm256_loadu_pd(gz1 + i);
        acc = _mm256_fmadd_pd(g1, s, acc);
        acc = _mm256_fmadd_pd(g2, _mm256_mul_pd(two, _mm256_mul_pd(sp, v1)), acc);
        _mm256_storeu_pd(gz1 + i, acc);
        // gz2 += g2*s
        acc = _mm256_loadu_pd(gz2 + i);
        acc = _mm256_fmadd_pd(g2, s, acc);
        _mm256_storeu_pd(gz2 + i, acc);
    }
    for (; i < n; ++i) {
        const double t = a0[i];
        const double s = 1.0 - t * t;
        const double sp = -2.0 * t * s;
        const double ss = -2.0 * s * s + 4.0 * t * t * s;
        gz0[i] += ga0[i] * s + ga1[i] * sp * z1[i] + ga2[i] * (sp * z2[i] + ss * z1[i] * z1[i]);
        gz1[i] += ga1[i] * s + ga2[i] * 2.0 * sp * z1[i];
        gz2[i] += ga2[i] * s;
    }
}

void adam_update_avx2(double* p, double* m, double* v, const double* g, int n,
                      double lr, double beta1, double beta2, double eps,
                      double mhat_scale, double vhat_scale) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vib1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d vib2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vms = _mm256_set1_pd(mhat_scale);
    const __m256d vvs = _mm256_set1_pd(vhat_scale);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vg = _mm256_loadu_pd(g + i);
        __m256d vm = _mm256_loadu_pd(m + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        vm = _mm256_fmadd_pd(vb1, vm, _mm256_mul_pd(vib1, vg));
        vv = _mm256_fmadd_pd(vb2, vv, _mm256_mul_pd(vib2, _mm256_mul_pd(vg, vg)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, vvs)), veps);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, _mm256_mul_pd(vm, vms)), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] * mhat_scale) / (std::sqrt(v[i] * vhat_scale) + eps);
    }
}

}  // namespace

const Ops* avx2_ops() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Ops ops = {
        "avx2",
        dense_forward_avx2,
        dense_backward_input_avx2,
        dense_backward_params_avx2,
        tanh_jet_forward_avx2,
        tanh_jet_backward_avx2,
        adam_update_avx2,
    };
    return &ops;
}

}  // namespace pinnosc::kernels

#else
#error "kernels_avx2.cpp requires -mavx2 -mfma (see CMakeLists.txt)"
#endif
