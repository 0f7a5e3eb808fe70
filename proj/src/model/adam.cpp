#include "thermopan/model/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace thermopan::model {

template <typename T>
AdamState<T> AdamState<T>::zeros_like(const std::vector<Tensor<T>>& params) {
    AdamState s;
    for (const auto& p : params) {
        s.m.emplace_back(p.shape());
        s.v.emplace_back(p.shape());
    }
    return s;
}

template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& grads, AdamState<T>& state, double lr,
               const AdamConfig& cfg) {
    if (grads.size() != params.size()) throw std::invalid_argument("adam: gradient count does not match parameters");
    if (state.m.empty() && state.t == 0) state = AdamState<T>::zeros_like(params);
    if (state.m.size() != params.size() || state.v.size() != params.size())
        throw std::invalid_argument("adam: optimizer state does not match parameters");
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!grads[i].same_shape(params[i]) || !state.m[i].same_shape(params[i]))
            throw std::invalid_argument("adam: shape mismatch at tensor " + std::to_string(i));

    ++state.t;
    const double b1 = cfg.beta1;
    const double b2 = cfg.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        T* p = params[i].data();
        T* m = state.m[i].data();
        T* v = state.v[i].data();
        const T* g = grads[i].data();
        const std::size_t n = params[i].size();
        for (std::size_t j = 0; j < n; ++j) {
            const double gj = g[j];
            const double mj = b1 * m[j] + (1.0 - b1) * gj;
            const double vj = b2 * v[j] + (1.0 - b2) * gj * gj;
            m[j] = static_cast<T>(mj);
            v[j] = static_cast<T>(vj);
            p[j] = static_cast<T>(p[j] - lr * (mj / c1) / (std::sqrt(vj / c2) + cfg.eps));
        }
    }
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(std::vector<Tensor<float>>&, const std::vector<Tensor<float>>&, AdamState<float>&, double,
                        const AdamConfig&);
template void adam_step(std::vector<Tensor<double>>&, const std::vector<Tensor<double>>&, AdamState<double>&, double,
                        const AdamConfig&);

}  // namespace thermopan::model
