// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "segt/attention.hpp"

namespace segt::selftest {

struct GradCheckResult {
    bool pass = true;
    double worst_rel_error = 0.0;
    std::string worst_location;
    std::size_t checked = 0;
};

/// Central finite differences against analytic gradients for every scalar
/// in the given views. rel(a, f) = |a - f| / max(1, |a|, |f|).
struct ParamView {
    std::string name;
    double* data;
    std::size_t count;
    const double* analytic;
};

inline GradCheckResult check_gradients(const std::function<double()>& loss,
                                       const std::vector<ParamView>& views, double step,
                                       double tolerance) {
    GradCheckResult result;
    for (const auto& view : views) {
        for (std::size_t i = 0; i < view.count; ++i) {
            const double saved = view.data[i];
            view.data[i] = saved + step;
            const double up = loss();
            view.data[i] = saved - step;
            const double down = loss();
            view.data[i] = saved;

            const double fd = (up - down) / (2.0 * step);
            const double analytic = view.analytic[i];
            const double denom = std::max({1.0, std::fabs(analytic), std::fabs(fd)});
            const double rel = std::fabs(analytic - fd) / denom;
            ++result.checked;
            if (rel > result.worst_rel_error) {
                result.worst_rel_error = rel;
                result.worst_location = view.name + "[" + std::to_string(i) + "]";
            }
            if (rel >= tolerance) {
                result.pass = false;
            }
        }
    }
    return result;
}

/// Tensor views over an AttentionParams/gradient pair, in declared order.
inline std::vector<ParamView> attention_param_views(AttentionParams<double>& params,
                                                    const AttentionParams<double>& grads) {
    return {
        {"w_q", params.w_q.data(), params.w_q.size(), grads.w_q.data()},
        {"b_q", params.b_q.data(), params.b_q.size(), grads.b_q.data()},
        {"w_k", params.w_k.data(), params.w_k.size(), grads.w_k.data()},
        {"b_k", params.b_k.data(), params.b_k.size(), grads.b_k.data()},
        {"w_v", params.w_v.data(), params.w_v.size(), grads.w_v.data()},
        {"b_v", params.b_v.data(), params.b_v.size(), grads.b_v.data()},
        {"w_o", params.w_o.data(), params.w_o.size(), grads.w_o.data()},
        {"b_o", params.b_o.data(), params.b_o.size(), grads.b_o.data()},
        {"w_pos", params.w_pos.data(), params.w_pos.size(), grads.w_pos.data()},
        {"b_pos", params.b_pos.data(), params.b_pos.size(), grads.b_pos.data()},
    };
}

} // namespace segt::selftest
