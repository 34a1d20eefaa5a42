#pragma once

#include <span>
#include <vector>

#include "sphera/transform.hpp"

namespace sphera {

// Batch evaluation of F over many exponents. The parallel variant distributes
// exponents over OpenMP threads; each result depends only on its own input, so
// both variants return bit-identical vectors in input order.

std::vector<TransformValue> evaluate_F_serial(const SphereSetup& setup,
                                              std::span<const ComplexExponent> alphas,
                                              const QuadConfig& config = {});

std::vector<TransformValue> evaluate_F_parallel(const SphereSetup& setup,
                                                std::span<const ComplexExponent> alphas,
                                                const QuadConfig& config = {});

/// Worker threads available to the parallel kernels.
int kernel_threads();

}  // namespace sphera
