#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

// Dense 2-D double tensor with reverse-mode automatic differentiation.
//
// A Tensor is a cheap shared handle to a node of a compute graph. Operations
// on tensors whose inputs require gradients record backward closures; calling
// backward() on a scalar loss fills .grad on every reachable parameter and
// then frees the graph edges, so each training step builds a fresh graph.
// Tensors without an attached graph are immutable values, safe to share.

namespace ehg {

namespace detail {
struct TensorNode;
}

enum class Aggregate { Sum, Mean };

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::size_t rows, std::size_t cols);
  static Tensor full(std::size_t rows, std::size_t cols, double value);
  static Tensor from_values(std::size_t rows, std::size_t cols,
                            std::vector<double> values);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Leaf tensor that participates in gradient computation.
  static Tensor param(std::size_t rows, std::size_t cols,
                      std::vector<double> values);

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const;
  std::size_t cols() const;
  std::size_t size() const;
  double at(std::size_t i, std::size_t j) const;
  /// Value of a 1x1 tensor.
  double item() const;
  std::span<const double> values() const;
  /// Mutable view of a leaf tensor's values (parameters, generator output).
  /// Throws AutogradError on non-leaf nodes.
  std::span<double> raw();

  bool requires_grad() const;
  bool has_grad() const;
  std::span<const double> grad() const;
  void clear_grad();

  /// Stable identity of the underlying node (optimizer bookkeeping).
  const void* id() const;

  explicit Tensor(std::shared_ptr<detail::TensorNode> node);
  const std::shared_ptr<detail::TensorNode>& node() const { return node_; }

 private:
  std::shared_ptr<detail::TensorNode> node_;
};

// --- operations -------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double s);
/// x (r x c) plus a 1 x c bias row added to every row.
Tensor add_bias(const Tensor& x, const Tensor& bias);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
/// Softmax over each row; output rows sum to 1.
Tensor row_softmax(const Tensor& x);
/// out[i, :] = x[i, :] * s[i]; s is rows x 1.
Tensor mul_rowwise(const Tensor& x, const Tensor& s);
Tensor gather_rows(const Tensor& x, const std::vector<std::size_t>& index);
/// Row t of the result is the sum (or mean) of source rows with index == t.
/// Targets that receive no rows are zero; the mean of an empty group is zero.
Tensor scatter_aggregate(const Tensor& source, const std::vector<std::size_t>& index,
                         std::size_t num_targets, Aggregate mode);
Tensor mean_rows(const Tensor& x);
Tensor sum_all(const Tensor& x);
Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);
/// Mean squared error over all entries; target must not require gradients.
Tensor mse_loss(const Tensor& pred, const Tensor& target);
/// Mean over rows of softmax cross-entropy against one-hot targets.
Tensor cross_entropy_loss(const Tensor& logits, const Tensor& onehot);

/// Tag-dispatched elementwise entry point (add/sub/mul binary; tanh/relu/
/// row_softmax unary). Unknown tags raise ValueError.
Tensor elementwise(std::string_view op_tag, const Tensor& a,
                   const Tensor* b = nullptr);

/// Reverse-mode sweep from a 1x1 loss. Fills .grad on every reachable
/// parameter (accumulating into existing gradients), then frees the graph.
/// A second call on the same loss is rejected.
void backward(const Tensor& loss);

}  // namespace ehg
