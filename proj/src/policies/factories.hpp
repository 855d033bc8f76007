#pragma once

#include <memory>

#include "driftbandit/policy.hpp"

namespace driftbandit::detail {

std::unique_ptr<Policy> make_baseline(const PolicyOptions& options,
                                      const PolicyContext& context, Rng rng);

std::unique_ptr<Policy> make_aff_policy(const PolicyOptions& options,
                                        const PolicyContext& context, Rng rng);

}  // namespace driftbandit::detail
