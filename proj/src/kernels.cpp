#include "sphera/kernels.hpp"

#include <exception>

#include <omp.h>

namespace sphera {

std::vector<TransformValue> evaluate_F_serial(const SphereSetup& setup,
                                              std::span<const ComplexExponent> alphas,
                                              const QuadConfig& config) {
  std::vector<TransformValue> out;
  out.reserve(alphas.size());
  for (const auto& a : alphas) out.push_back(evaluate_F(setup, a, config));
  return out;
}

std::vector<TransformValue> evaluate_F_parallel(const SphereSetup& setup,
                                                std::span<const ComplexExponent> alphas,
                                                const QuadConfig& config) {
  config.validate();
  const long n = static_cast<long>(alphas.size());
  std::vector<TransformValue> out(alphas.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_F(setup, alphas[i], config);
    } catch (...) {
#pragma omp critical(sphera_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

int kernel_threads() { return omp_get_max_threads(); }

}  // namespace sphera
