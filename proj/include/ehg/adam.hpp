#pragma once

#include <cstddef>
#include <vector>

#include "ehg/tensor.hpp"

namespace ehg {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction over a fixed set of parameter tensors.
/// step() consumes the gradients produced by backward(): it applies the
/// update and clears them, so each step needs a fresh backward pass (or an
/// accumulated batch of them).
class Adam {
 public:
  explicit Adam(std::vector<Tensor> params, AdamConfig config = {});

  /// Throws AutogradError when any parameter has no gradient.
  void step();

  void zero_grad();
  std::size_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Slot {
    Tensor param;
    std::vector<double> m;
    std::vector<double> v;
  };
  std::vector<Slot> slots_;
  AdamConfig config_;
  std::size_t step_ = 0;
};

}  // namespace ehg
