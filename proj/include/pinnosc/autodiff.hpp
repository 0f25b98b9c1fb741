#pragma once

// Reverse-mode scalar tape plus second-order Taylor jets.
//
// Jet2 carries (value, du/dt, d2u/dt2) through elementary operations; the
// coefficient type T is either double (plain evaluation) or Var (tracked, so
// every coefficient stays differentiable w.r.t. the bound parameters).
//
// Tape is the gradient context: it binds one flat parameter vector as the
// leading leaves, records operations eagerly with precomputed local partials,
// and plays them backwards in gradient(). A tape is meant to be rebuilt
// (reset) every optimizer step and used from one thread at a time.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pinnosc::ad {

class Tape;

// Handle to one tracked scalar. Cheap to copy; valid while its tape lives
// and has not been reset.
class Var {
public:
    Var() = default;
    double value() const { return val_; }
    Tape* tape() const { return tape_; }
    int32_t index() const { return idx_; }

private:
    friend class Tape;
    Var(Tape* t, int32_t i, double v) : tape_(t), idx_(i), val_(v) {}
    Tape* tape_ = nullptr;
    int32_t idx_ = -1;
    double val_ = 0.0;
};

class Tape {
public:
    explicit Tape(std::span<const double> params);
    void reset(std::span<const double> params);  // keeps allocated capacity

    int parameter_count() const { return n_params_; }
    Var parameter(int i);
    Var constant(double v);
    Var at(int slot);
    double value_at(int slot) const { return vals_[slot]; }

    // d(loss)/d(parameter) for every bound parameter, in binding order.
    // Rejects a loss that was not built through this tape.
    std::vector<double> gradient(const Var& loss);

    // Recording primitives behind the Var operators.
    Var record_unary(const Var& a, double value, double pa);
    Var record_binary(const Var& a, const Var& b, double value, double pa, double pb);

    // Fused layer records for the network hot path. Blocks are laid out as
    // [v0 lanes | v1 lanes | v2 lanes]; returns the block base slot.
    int seed3(double t);  // the seed jet (t, 1, 0)
    int dense_jet(int in, int in_width, int out_width, int weight_index, int bias_index);
    int tanh_jet(int in, int width);

private:
    static constexpr int32_t kLeaf = -1;
    static constexpr int32_t kFusedSlot = -2;
    enum FusedKind : int32_t { kDense, kTanh };

    struct Node {
        int32_t a, b;
        double pa, pb;
    };
    struct FusedOp {
        int32_t kind;
        int32_t in, out;
        int32_t in_w, out_w;
        int32_t w, bias;
    };

    void require_mine(const Var& v) const;
    int alloc(int count, int32_t marker);
    void fused_backward(const FusedOp& op);

    std::vector<double> vals_;
    std::vector<Node> nodes_;
    std::vector<FusedOp> fused_;
    std::vector<double> adj_;
    int n_params_ = 0;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);
Var operator+(const Var& a, double c);
Var operator+(double c, const Var& a);
Var operator-(const Var& a, double c);
Var operator-(double c, const Var& a);
Var operator*(const Var& a, double c);
Var operator*(double c, const Var& a);
Var operator/(const Var& a, double c);
Var operator/(double c, const Var& a);
Var tanh(const Var& a);
Var sin(const Var& a);
Var cos(const Var& a);

// Truncated second-order Taylor coefficients: v0 + v1*dt + (v2/2)*dt^2.
template <class T>
struct Jet2 {
    T v0{}, v1{}, v2{};
};

using Jet2d = Jet2<double>;

inline Jet2d seed_jet(double t) { return {t, 1.0, 0.0}; }
Jet2<Var> seed_jet(Tape& tape, double t);

template <class T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2};
}

template <class T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2};
}

// Leibniz through order 2: (ab)'' = a''b + 2a'b' + ab''.
template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    return {a.v0 * b.v0,
            a.v0 * b.v1 + a.v1 * b.v0,
            a.v0 * b.v2 + 2.0 * (a.v1 * b.v1) + a.v2 * b.v0};
}

template <class T>
Jet2<T> operator*(const Jet2<T>& a, double c) {
    return {a.v0 * c, a.v1 * c, a.v2 * c};
}

template <class T>
Jet2<T> operator*(double c, const Jet2<T>& a) {
    return a * c;
}

template <class T>
Jet2<T> operator+(const Jet2<T>& a, double c) {
    return {a.v0 + c, a.v1, a.v2};
}

template <class T>
Jet2<T> operator-(const Jet2<T>& a, double c) {
    return {a.v0 - c, a.v1, a.v2};
}

template <class T>
Jet2<T> tanh(const Jet2<T>& a) {
    using std::tanh;
    T t = tanh(a.v0);
    T s = 1.0 - t * t;          // tanh' = 1 - tanh^2
    T sp = -2.0 * (t * s);      // tanh'' = -2 tanh (1 - tanh^2)
    return {t, s * a.v1, s * a.v2 + sp * (a.v1 * a.v1)};
}

template <class T>
Jet2<T> sin(const Jet2<T>& a) {
    using std::cos;
    using std::sin;
    T s = sin(a.v0);
    T c = cos(a.v0);
    return {s, c * a.v1, c * a.v2 - s * (a.v1 * a.v1)};
}

}  // namespace pinnosc::ad
