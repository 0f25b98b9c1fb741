#include "pinnosc/autodiff.hpp"

#include <cmath>
#include <stdexcept>

#include "pinnosc/kernels.hpp"

namespace pinnosc::ad {

Tape::Tape(std::span<const double> params) { reset(params); }

void Tape::reset(std::span<const double> params) {
    n_params_ = static_cast<int>(params.size());
    vals_.assign(params.begin(), params.end());
    nodes_.clear();
    nodes_.resize(params.size(), Node{kLeaf, kLeaf, 0.0, 0.0});
    fused_.clear();
}

void Tape::require_mine(const Var& v) const {
    if (v.tape_ != this)
        throw std::invalid_argument("value was not built through this gradient context");
}

int Tape::alloc(int count, int32_t marker) {
    const int base = static_cast<int>(vals_.size());
    vals_.resize(vals_.size() + count);
    nodes_.resize(nodes_.size() + count, Node{marker, marker, 0.0, 0.0});
    return base;
}

Var Tape::parameter(int i) {
    if (i < 0 || i >= n_params_) throw std::invalid_argument("parameter index out of range");
    return Var(this, i, vals_[i]);
}

Var Tape::constant(double v) {
    const int idx = alloc(1, kLeaf);
    vals_[idx] = v;
    return Var(this, idx, v);
}

Var Tape::at(int slot) {
    if (slot < 0 || slot >= static_cast<int>(vals_.size()))
        throw std::invalid_argument("slot out of range");
    return Var(this, slot, vals_[slot]);
}

Var Tape::record_unary(const Var& a, double value, double pa) {
    require_mine(a);
    const int idx = alloc(1, kLeaf);
    vals_[idx] = value;
    nodes_[idx] = Node{a.idx_, kLeaf, pa, 0.0};
    return Var(this, idx, value);
}

Var Tape::record_binary(const Var& a, const Var& b, double value, double pa, double pb) {
    require_mine(a);
    require_mine(b);
    const int idx = alloc(1, kLeaf);
    vals_[idx] = value;
    nodes_[idx] = Node{a.idx_, b.idx_, pa, pb};
    return Var(this, idx, value);
}

int Tape::seed3(double t) {
    const int base = alloc(3, kLeaf);
    vals_[base] = t;
    vals_[base + 1] = 1.0;
    vals_[base + 2] = 0.0;
    return base;
}

int Tape::dense_jet(int in, int in_width, int out_width, int weight_index, int bias_index) {
    const int out = alloc(3 * out_width, kFusedSlot);
    const auto& k = kernels::active_ops();
    double* v = vals_.data();
    k.dense_forward(v + weight_index, v + bias_index, v + in, v + out, out_width, in_width);
    k.dense_forward(v + weight_index, nullptr, v + in + in_width, v + out + out_width,
                    out_width, in_width);
    k.dense_forward(v + weight_index, nullptr, v + in + 2 * in_width, v + out + 2 * out_width,
                    out_width, in_width);
    fused_.push_back(FusedOp{kDense, in, out, in_width, out_width, weight_index, bias_index});
    return out;
}

int Tape::tanh_jet(int in, int width) {
    const int out = alloc(3 * width, kFusedSlot);
    const auto& k = kernels::active_ops();
    double* v = vals_.data();
    k.tanh_jet_forward(v + in, v + in + width, v + in + 2 * width,
                       v + out, v + out + width, v + out + 2 * width, width);
    fused_.push_back(FusedOp{kTanh, in, out, width, width, 0, 0});
    return out;
}

void Tape::fused_backward(const FusedOp& op) {
    const auto& k = kernels::active_ops();
    double* v = vals_.data();
    double* adj = adj_.data();
    if (op.kind == kDense) {
        for (int s = 0; s < 3; ++s) {
            const double* gz = adj + op.out + s * op.out_w;
            k.dense_backward_params(gz, v + op.in + s * op.in_w, adj + op.w,
                                    s == 0 ? adj + op.bias : nullptr, op.out_w, op.in_w);
            k.dense_backward_input(v + op.w, gz, adj + op.in + s * op.in_w, op.out_w, op.in_w);
        }
    } else {
        const int w = op.out_w;
        k.tanh_jet_backward(v + op.in + w, v + op.in + 2 * w, v + op.out,
                            adj + op.out, adj + op.out + w, adj + op.out + 2 * w,
                            adj + op.in, adj + op.in + w, adj + op.in + 2 * w, w);
    }
}

std::vector<double> Tape::gradient(const Var& loss) {
    require_mine(loss);
    adj_.assign(vals_.size(), 0.0);
    adj_[loss.idx_] = 1.0;
    int fi = static_cast<int>(fused_.size()) - 1;
    for (int i = loss.idx_; i >= n_params_; --i) {
        const Node& n = nodes_[i];
        if (n.a == kFusedSlot) {
            while (fused_[fi].out > i) --fi;  // ranges are disjoint and ordered
            const FusedOp& op = fused_[fi];
            fused_backward(op);
            i = op.out;  // loop decrement lands just below the block
            --fi;
            continue;
        }
        const double g = adj_[i];
        if (g == 0.0) continue;
        if (n.a >= 0) adj_[n.a] += n.pa * g;
        if (n.b >= 0) adj_[n.b] += n.pb * g;
    }
    return std::vector<double>(adj_.begin(), adj_.begin() + n_params_);
}

namespace {

Tape* same_tape(const Var& a, const Var& b) {
    if (a.tape() == nullptr || a.tape() != b.tape())
        throw std::invalid_argument("operands belong to different gradient contexts");
    return a.tape();
}

Tape* tape_of(const Var& a) {
    if (a.tape() == nullptr)
        throw std::invalid_argument("operand is not bound to a gradient context");
    return a.tape();
}

}  // namespace

Var operator+(const Var& a, const Var& b) {
    return same_tape(a, b)->record_binary(a, b, a.value() + b.value(), 1.0, 1.0);
}

Var operator-(const Var& a, const Var& b) {
    return same_tape(a, b)->record_binary(a, b, a.value() - b.value(), 1.0, -1.0);
}

Var operator*(const Var& a, const Var& b) {
    return same_tape(a, b)->record_binary(a, b, a.value() * b.value(), b.value(), a.value());
}

Var operator/(const Var& a, const Var& b) {
    const double bv = b.value();
    return same_tape(a, b)->record_binary(a, b, a.value() / bv, 1.0 / bv,
                                          -a.value() / (bv * bv));
}

Var operator-(const Var& a) { return tape_of(a)->record_unary(a, -a.value(), -1.0); }

Var operator+(const Var& a, double c) { return tape_of(a)->record_unary(a, a.value() + c, 1.0); }
Var operator+(double c, const Var& a) { return a + c; }
Var operator-(const Var& a, double c) { return tape_of(a)->record_unary(a, a.value() - c, 1.0); }
Var operator-(double c, const Var& a) { return tape_of(a)->record_unary(a, c - a.value(), -1.0); }
Var operator*(const Var& a, double c) { return tape_of(a)->record_unary(a, a.value() * c, c); }
Var operator*(double c, const Var& a) { return a * c; }
Var operator/(const Var& a, double c) { return a * (1.0 / c); }
Var operator/(double c, const Var& a) {
    const double av = a.value();
    return tape_of(a)->record_unary(a, c / av, -c / (av * av));
}

Var tanh(const Var& a) {
    const double t = std::tanh(a.value());
    return tape_of(a)->record_unary(a, t, 1.0 - t * t);
}

Var sin(const Var& a) {
    return tape_of(a)->record_unary(a, std::sin(a.value()), std::cos(a.value()));
}

Var cos(const Var& a) {
    return tape_of(a)->record_unary(a, std::cos(a.value()), -std::sin(a.value()));
}

Jet2<Var> seed_jet(Tape& tape, double t) {
    const int base = tape.seed3(t);
    return {tape.at(base), tape.at(base + 1), tape.at(base + 2)};
}

}  // namespace pinnosc::ad
