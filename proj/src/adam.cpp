#include "ehg/adam.hpp"

#include <cmath>

#include "ehg/error.hpp"
#include "ehg/kernels/kernels.hpp"

namespace ehg {

Adam::Adam(std::vector<Tensor> params, AdamConfig config) : config_(config) {
  slots_.reserve(params.size());
  for (auto& p : params) {
    if (!p.defined() || !p.requires_grad())
      throw ValueError("adam: every parameter must be a defined grad tensor");
    Slot s;
    s.m.assign(p.size(), 0.0);
    s.v.assign(p.size(), 0.0);
    s.param = std::move(p);
    slots_.push_back(std::move(s));
  }
}

void Adam::step() {
  for (const auto& s : slots_) {
    if (!s.param.has_grad()) {
      throw AutogradError("adam: parameter " + std::to_string(&s - slots_.data()) +
                          " has no gradient; run backward() first");
    }
  }
  ++step_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (auto& s : slots_) {
    auto vals = s.param.raw();
    kern::active().adam_update(vals.data(), s.m.data(), s.v.data(),
                               s.param.grad().data(), vals.size(),
                               config_.learning_rate, config_.beta1,
                               config_.beta2, config_.epsilon, bias1, bias2);
    s.param.clear_grad();
  }
}

void Adam::zero_grad() {
  for (auto& s : slots_) s.param.clear_grad();
}

}  // namespace ehg
