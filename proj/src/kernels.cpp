#include "pinnosc/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pinnosc::kernels {

#if !defined(PINNOSC_HAVE_AVX2_TU)
const Ops* avx2_ops() { return nullptr; }
#endif

namespace {

const Ops& select() {
    if (const char* env = std::getenv("PINN_OSC_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return scalar_ops();
        if (want == "avx2") {
            if (const Ops* ops = avx2_ops()) return *ops;
            throw std::runtime_error("PINN_OSC_KERNELS=avx2 but this CPU/build cannot run AVX2");
        }
        throw std::runtime_error("PINN_OSC_KERNELS must be 'scalar' or 'avx2', got '" + want + "'");
    }
    if (const Ops* ops = avx2_ops()) return *ops;
    return scalar_ops();
}

}  // namespace

const Ops& active_ops() {
    static const Ops& ops = select();
    return ops;
}

}  // namespace pinnosc::kernels
