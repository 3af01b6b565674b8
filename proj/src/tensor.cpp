#include "ehg/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <unordered_set>

#include "ehg/error.hpp"
#include "ehg/kernels/kernels.hpp"

namespace ehg {
namespace detail {

struct TensorNode {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> val;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  bool backward_done = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;
};

}  // namespace detail

using detail::TensorNode;

namespace {

const kern::Ops& K() { return kern::active(); }

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

std::string shape_str(const TensorNode& n) { return shape_str(n.rows, n.cols); }

std::shared_ptr<TensorNode> make_node(std::size_t rows, std::size_t cols) {
  auto n = std::make_shared<TensorNode>();
  n->rows = rows;
  n->cols = cols;
  n->val.assign(rows * cols, 0.0);
  return n;
}

void ensure_grad(TensorNode& n) {
  if (n.grad.empty()) n.grad.assign(n.rows * n.cols, 0.0);
}

const TensorNode& deref(const Tensor& t, const char* op) {
  if (!t.defined()) throw ValueError(std::string(op) + ": undefined tensor");
  return *t.node();
}

void check_same_shape(const TensorNode& a, const TensorNode& b, const char* op) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + shape_str(a) +
                     " vs " + shape_str(b) + ")");
  }
}

// Attach graph edges only when some input needs gradients; otherwise the
// result is a plain value and the closure is dropped.
Tensor finish(std::shared_ptr<TensorNode> out,
              std::vector<std::shared_ptr<TensorNode>> parents,
              std::function<void(TensorNode&)> backprop) {
  bool needs = false;
  for (const auto& p : parents) needs = needs || p->requires_grad;
  if (needs) {
    out->requires_grad = true;
    out->parents = std::move(parents);
    out->backprop = std::move(backprop);
  }
  return Tensor(std::move(out));
}

}  // namespace

// --- Tensor handle ----------------------------------------------------------

Tensor::Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols) {
  return Tensor(make_node(rows, cols));
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value) {
  auto n = make_node(rows, cols);
  std::fill(n->val.begin(), n->val.end(), value);
  return Tensor(std::move(n));
}

Tensor Tensor::from_values(std::size_t rows, std::size_t cols,
                           std::vector<double> values) {
  if (values.size() != rows * cols) {
    throw ShapeError("from_values: got " + std::to_string(values.size()) +
                     " values for shape " + shape_str(rows, cols));
  }
  auto n = make_node(rows, cols);
  n->val = std::move(values);
  return Tensor(std::move(n));
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> vals;
  vals.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged row lengths");
    vals.insert(vals.end(), row.begin(), row.end());
  }
  return from_values(r, c, std::move(vals));
}

Tensor Tensor::param(std::size_t rows, std::size_t cols, std::vector<double> values) {
  Tensor t = from_values(rows, cols, std::move(values));
  t.node_->requires_grad = true;
  return t;
}

std::size_t Tensor::rows() const { return node_ ? node_->rows : 0; }
std::size_t Tensor::cols() const { return node_ ? node_->cols : 0; }
std::size_t Tensor::size() const { return node_ ? node_->val.size() : 0; }

double Tensor::at(std::size_t i, std::size_t j) const {
  const auto& n = deref(*this, "at");
  if (i >= n.rows || j >= n.cols) {
    throw IndexError("at: position (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") out of range for " + shape_str(n));
  }
  return n.val[i * n.cols + j];
}

double Tensor::item() const {
  const auto& n = deref(*this, "item");
  if (n.rows != 1 || n.cols != 1)
    throw ShapeError("item: tensor is " + shape_str(n) + ", expected 1x1");
  return n.val[0];
}

std::span<const double> Tensor::values() const {
  const auto& n = deref(*this, "values");
  return {n.val.data(), n.val.size()};
}

std::span<double> Tensor::raw() {
  auto& n = const_cast<TensorNode&>(deref(*this, "raw"));
  if (!n.parents.empty())
    throw AutogradError("raw: mutable access to a non-leaf tensor");
  return {n.val.data(), n.val.size()};
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }
bool Tensor::has_grad() const { return node_ && !node_->grad.empty(); }

std::span<const double> Tensor::grad() const {
  const auto& n = deref(*this, "grad");
  return {n.grad.data(), n.grad.size()};
}

void Tensor::clear_grad() {
  if (node_) node_->grad.clear();
}

const void* Tensor::id() const { return node_.get(); }

// --- operations -------------------------------------------------------------

Tensor matmul(const Tensor& ta, const Tensor& tb) {
  const auto& a = deref(ta, "matmul");
  const auto& b = deref(tb, "matmul");
  if (a.cols != b.rows) {
    throw ShapeError("matmul: inner dimensions mismatch (" + shape_str(a) +
                     " vs " + shape_str(b) + ")");
  }
  auto out = make_node(a.rows, b.cols);
  K().matmul_nn(out->val.data(), a.val.data(), b.val.data(), a.rows, a.cols,
                b.cols, false);
  return finish(std::move(out), {ta.node(), tb.node()}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    const std::size_t m = pa.rows, k = pa.cols, n = pb.cols;
    if (pa.requires_grad) {
      ensure_grad(pa);
      K().matmul_nt(pa.grad.data(), self.grad.data(), pb.val.data(), m, k, n, true);
    }
    if (pb.requires_grad) {
      ensure_grad(pb);
      K().matmul_tn(pb.grad.data(), pa.val.data(), self.grad.data(), m, k, n, true);
    }
  });
}

Tensor add(const Tensor& ta, const Tensor& tb) {
  const auto& a = deref(ta, "add");
  const auto& b = deref(tb, "add");
  check_same_shape(a, b, "add");
  auto out = make_node(a.rows, a.cols);
  K().add(out->val.data(), a.val.data(), b.val.data(), out->val.size());
  return finish(std::move(out), {ta.node(), tb.node()}, [](TensorNode& self) {
    for (int i = 0; i < 2; ++i) {
      auto& p = *self.parents[i];
      if (!p.requires_grad) continue;
      ensure_grad(p);
      K().axpy(p.grad.data(), 1.0, self.grad.data(), p.grad.size());
    }
  });
}

Tensor sub(const Tensor& ta, const Tensor& tb) {
  const auto& a = deref(ta, "sub");
  const auto& b = deref(tb, "sub");
  check_same_shape(a, b, "sub");
  auto out = make_node(a.rows, a.cols);
  K().sub(out->val.data(), a.val.data(), b.val.data(), out->val.size());
  return finish(std::move(out), {ta.node(), tb.node()}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    if (pa.requires_grad) {
      ensure_grad(pa);
      K().axpy(pa.grad.data(), 1.0, self.grad.data(), pa.grad.size());
    }
    if (pb.requires_grad) {
      ensure_grad(pb);
      K().axpy(pb.grad.data(), -1.0, self.grad.data(), pb.grad.size());
    }
  });
}

Tensor mul(const Tensor& ta, const Tensor& tb) {
  const auto& a = deref(ta, "mul");
  const auto& b = deref(tb, "mul");
  check_same_shape(a, b, "mul");
  auto out = make_node(a.rows, a.cols);
  K().mul(out->val.data(), a.val.data(), b.val.data(), out->val.size());
  return finish(std::move(out), {ta.node(), tb.node()}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    if (pa.requires_grad) {
      ensure_grad(pa);
      K().madd(pa.grad.data(), self.grad.data(), pb.val.data(), pa.grad.size());
    }
    if (pb.requires_grad) {
      ensure_grad(pb);
      K().madd(pb.grad.data(), self.grad.data(), pa.val.data(), pb.grad.size());
    }
  });
}

Tensor scale(const Tensor& tx, double s) {
  const auto& x = deref(tx, "scale");
  auto out = make_node(x.rows, x.cols);
  K().scale(out->val.data(), x.val.data(), s, out->val.size());
  return finish(std::move(out), {tx.node()}, [s](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    K().axpy(p.grad.data(), s, self.grad.data(), p.grad.size());
  });
}

Tensor add_bias(const Tensor& tx, const Tensor& tbias) {
  const auto& x = deref(tx, "add_bias");
  const auto& b = deref(tbias, "add_bias");
  if (b.rows != 1 || b.cols != x.cols) {
    throw ShapeError("add_bias: bias must be 1x" + std::to_string(x.cols) +
                     ", got " + shape_str(b));
  }
  auto out = make_node(x.rows, x.cols);
  const std::size_t c = x.cols;
  for (std::size_t i = 0; i < x.rows; ++i) {
    K().add(out->val.data() + i * c, x.val.data() + i * c, b.val.data(), c);
  }
  return finish(std::move(out), {tx.node(), tbias.node()}, [](TensorNode& self) {
    auto& px = *self.parents[0];
    auto& pb = *self.parents[1];
    const std::size_t c = self.cols;
    if (px.requires_grad) {
      ensure_grad(px);
      K().axpy(px.grad.data(), 1.0, self.grad.data(), px.grad.size());
    }
    if (pb.requires_grad) {
      ensure_grad(pb);
      for (std::size_t i = 0; i < self.rows; ++i) {
        K().axpy(pb.grad.data(), 1.0, self.grad.data() + i * c, c);
      }
    }
  });
}

Tensor tanh(const Tensor& tx) {
  const auto& x = deref(tx, "tanh");
  auto out = make_node(x.rows, x.cols);
  for (std::size_t i = 0; i < x.val.size(); ++i) out->val[i] = std::tanh(x.val[i]);
  return finish(std::move(out), {tx.node()}, [](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    for (std::size_t i = 0; i < self.val.size(); ++i) {
      p.grad[i] += self.grad[i] * (1.0 - self.val[i] * self.val[i]);
    }
  });
}

Tensor relu(const Tensor& tx) {
  const auto& x = deref(tx, "relu");
  auto out = make_node(x.rows, x.cols);
  K().relu(out->val.data(), x.val.data(), out->val.size());
  return finish(std::move(out), {tx.node()}, [](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    for (std::size_t i = 0; i < self.val.size(); ++i) {
      if (p.val[i] > 0.0) p.grad[i] += self.grad[i];
    }
  });
}

Tensor row_softmax(const Tensor& tx) {
  const auto& x = deref(tx, "row_softmax");
  auto out = make_node(x.rows, x.cols);
  const std::size_t c = x.cols;
  if (c == 0) throw ShapeError("row_softmax: zero columns");
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* row = x.val.data() + i * c;
    double* orow = out->val.data() + i * c;
    double mx = row[0];
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    double se = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      orow[j] = std::exp(row[j] - mx);
      se += orow[j];
    }
    const double inv = 1.0 / se;
    for (std::size_t j = 0; j < c; ++j) orow[j] *= inv;
  }
  return finish(std::move(out), {tx.node()}, [](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    const std::size_t c = self.cols;
    for (std::size_t i = 0; i < self.rows; ++i) {
      const double* s = self.val.data() + i * c;
      const double* d = self.grad.data() + i * c;
      double* g = p.grad.data() + i * c;
      const double sd = K().dot(s, d, c);
      for (std::size_t j = 0; j < c; ++j) g[j] += s[j] * (d[j] - sd);
    }
  });
}

Tensor mul_rowwise(const Tensor& tx, const Tensor& ts) {
  const auto& x = deref(tx, "mul_rowwise");
  const auto& s = deref(ts, "mul_rowwise");
  if (s.cols != 1 || s.rows != x.rows) {
    throw ShapeError("mul_rowwise: scaler must be " + std::to_string(x.rows) +
                     "x1, got " + shape_str(s));
  }
  auto out = make_node(x.rows, x.cols);
  const std::size_t c = x.cols;
  for (std::size_t i = 0; i < x.rows; ++i) {
    K().scale(out->val.data() + i * c, x.val.data() + i * c, s.val[i], c);
  }
  return finish(std::move(out), {tx.node(), ts.node()}, [](TensorNode& self) {
    auto& px = *self.parents[0];
    auto& ps = *self.parents[1];
    const std::size_t c = self.cols;
    if (px.requires_grad) {
      ensure_grad(px);
      for (std::size_t i = 0; i < self.rows; ++i) {
        K().axpy(px.grad.data() + i * c, ps.val[i], self.grad.data() + i * c, c);
      }
    }
    if (ps.requires_grad) {
      ensure_grad(ps);
      for (std::size_t i = 0; i < self.rows; ++i) {
        ps.grad[i] += K().dot(self.grad.data() + i * c, px.val.data() + i * c, c);
      }
    }
  });
}

Tensor gather_rows(const Tensor& tx, const std::vector<std::size_t>& index) {
  const auto& x = deref(tx, "gather_rows");
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= x.rows) {
      throw IndexError("gather_rows: index " + std::to_string(index[i]) +
                       " at position " + std::to_string(i) +
                       " out of range for " + std::to_string(x.rows) + " rows");
    }
  }
  auto out = make_node(index.size(), x.cols);
  const std::size_t c = x.cols;
  for (std::size_t i = 0; i < index.size(); ++i) {
    std::memcpy(out->val.data() + i * c, x.val.data() + index[i] * c,
                c * sizeof(double));
  }
  return finish(std::move(out), {tx.node()}, [index](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    const std::size_t c = self.cols;
    for (std::size_t i = 0; i < index.size(); ++i) {
      K().axpy(p.grad.data() + index[i] * c, 1.0, self.grad.data() + i * c, c);
    }
  });
}

Tensor scatter_aggregate(const Tensor& tsrc, const std::vector<std::size_t>& index,
                         std::size_t num_targets, Aggregate mode) {
  const auto& src = deref(tsrc, "scatter_aggregate");
  if (index.size() != src.rows) {
    throw ShapeError("scatter_aggregate: index length " +
                     std::to_string(index.size()) + " != source rows " +
                     std::to_string(src.rows));
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= num_targets) {
      throw IndexError("scatter_aggregate: index " + std::to_string(index[i]) +
                       " at position " + std::to_string(i) +
                       " out of range for " + std::to_string(num_targets) +
                       " targets");
    }
  }
  auto out = make_node(num_targets, src.cols);
  const std::size_t c = src.cols;
  std::vector<std::size_t> counts(num_targets, 0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    K().axpy(out->val.data() + index[i] * c, 1.0, src.val.data() + i * c, c);
    ++counts[index[i]];
  }
  if (mode == Aggregate::Mean) {
    for (std::size_t t = 0; t < num_targets; ++t) {
      if (counts[t] > 1) {
        K().scale(out->val.data() + t * c, out->val.data() + t * c,
                  1.0 / static_cast<double>(counts[t]), c);
      }
      // count 0: row stays zero (empty group), count 1: already the mean
    }
  }
  return finish(std::move(out), {tsrc.node()},
                [index, counts, mode](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    const std::size_t c = self.cols;
    for (std::size_t i = 0; i < index.size(); ++i) {
      double f = 1.0;
      if (mode == Aggregate::Mean) f = 1.0 / static_cast<double>(counts[index[i]]);
      K().axpy(p.grad.data() + i * c, f, self.grad.data() + index[i] * c, c);
    }
  });
}

Tensor mean_rows(const Tensor& tx) {
  const auto& x = deref(tx, "mean_rows");
  if (x.rows == 0) throw ShapeError("mean_rows: tensor has no rows");
  auto out = make_node(1, x.cols);
  const std::size_t c = x.cols;
  for (std::size_t i = 0; i < x.rows; ++i) {
    K().axpy(out->val.data(), 1.0, x.val.data() + i * c, c);
  }
  const double inv = 1.0 / static_cast<double>(x.rows);
  K().scale(out->val.data(), out->val.data(), inv, c);
  return finish(std::move(out), {tx.node()}, [inv](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    const std::size_t c = self.cols;
    for (std::size_t i = 0; i < p.rows; ++i) {
      K().axpy(p.grad.data() + i * c, inv, self.grad.data(), c);
    }
  });
}

Tensor sum_all(const Tensor& tx) {
  const auto& x = deref(tx, "sum_all");
  auto out = make_node(1, 1);
  out->val[0] = K().sum(x.val.data(), x.val.size());
  return finish(std::move(out), {tx.node()}, [](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    const double g = self.grad[0];
    for (double& gi : p.grad) gi += g;
  });
}

Tensor concat_cols(const Tensor& ta, const Tensor& tb) {
  const auto& a = deref(ta, "concat_cols");
  const auto& b = deref(tb, "concat_cols");
  if (a.rows != b.rows) {
    throw ShapeError("concat_cols: row mismatch (" + shape_str(a) + " vs " +
                     shape_str(b) + ")");
  }
  auto out = make_node(a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::memcpy(out->val.data() + i * out->cols, a.val.data() + i * a.cols,
                a.cols * sizeof(double));
    std::memcpy(out->val.data() + i * out->cols + a.cols,
                b.val.data() + i * b.cols, b.cols * sizeof(double));
  }
  return finish(std::move(out), {ta.node(), tb.node()}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    const std::size_t ca = pa.cols, cb = pb.cols, c = self.cols;
    if (pa.requires_grad) {
      ensure_grad(pa);
      for (std::size_t i = 0; i < self.rows; ++i) {
        K().axpy(pa.grad.data() + i * ca, 1.0, self.grad.data() + i * c, ca);
      }
    }
    if (pb.requires_grad) {
      ensure_grad(pb);
      for (std::size_t i = 0; i < self.rows; ++i) {
        K().axpy(pb.grad.data() + i * cb, 1.0, self.grad.data() + i * c + ca, cb);
      }
    }
  });
}

Tensor transpose(const Tensor& tx) {
  const auto& x = deref(tx, "transpose");
  auto out = make_node(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      out->val[j * x.rows + i] = x.val[i * x.cols + j];
    }
  }
  return finish(std::move(out), {tx.node()}, [](TensorNode& self) {
    auto& p = *self.parents[0];
    if (!p.requires_grad) return;
    ensure_grad(p);
    for (std::size_t i = 0; i < p.rows; ++i) {
      for (std::size_t j = 0; j < p.cols; ++j) {
        p.grad[i * p.cols + j] += self.grad[j * p.rows + i];
      }
    }
  });
}

Tensor mse_loss(const Tensor& tpred, const Tensor& ttarget) {
  const auto& p = deref(tpred, "mse_loss");
  const auto& t = deref(ttarget, "mse_loss");
  check_same_shape(p, t, "mse_loss");
  if (t.requires_grad)
    throw ValueError("mse_loss: target must not require gradients");
  if (p.val.empty()) throw ShapeError("mse_loss: empty tensors");
  auto out = make_node(1, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.val.size(); ++i) {
    const double d = p.val[i] - t.val[i];
    acc += d * d;
  }
  const double invn = 1.0 / static_cast<double>(p.val.size());
  out->val[0] = acc * invn;
  return finish(std::move(out), {tpred.node(), ttarget.node()},
                [invn](TensorNode& self) {
    auto& pp = *self.parents[0];
    auto& pt = *self.parents[1];
    if (!pp.requires_grad) return;
    ensure_grad(pp);
    const double g = 2.0 * invn * self.grad[0];
    for (std::size_t i = 0; i < pp.val.size(); ++i) {
      pp.grad[i] += g * (pp.val[i] - pt.val[i]);
    }
  });
}

Tensor cross_entropy_loss(const Tensor& tlogits, const Tensor& tonehot) {
  const auto& z = deref(tlogits, "cross_entropy_loss");
  const auto& y = deref(tonehot, "cross_entropy_loss");
  check_same_shape(z, y, "cross_entropy_loss");
  if (y.requires_grad)
    throw ValueError("cross_entropy_loss: target must not require gradients");
  if (z.rows == 0 || z.cols == 0)
    throw ShapeError("cross_entropy_loss: empty tensors");
  const std::size_t c = z.cols;
  std::vector<double> soft(z.val.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* zr = z.val.data() + i * c;
    const double* yr = y.val.data() + i * c;
    double* sr = soft.data() + i * c;
    double mx = zr[0];
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, zr[j]);
    double se = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      sr[j] = std::exp(zr[j] - mx);
      se += sr[j];
    }
    const double lse = std::log(se) + mx;
    double zy = 0.0;
    const double inv = 1.0 / se;
    for (std::size_t j = 0; j < c; ++j) {
      sr[j] *= inv;
      zy += yr[j] * zr[j];
    }
    loss += lse - zy;
  }
  const double invm = 1.0 / static_cast<double>(z.rows);
  auto out = make_node(1, 1);
  out->val[0] = loss * invm;
  return finish(std::move(out), {tlogits.node(), tonehot.node()},
                [soft = std::move(soft), invm](TensorNode& self) {
    auto& pz = *self.parents[0];
    auto& py = *self.parents[1];
    if (!pz.requires_grad) return;
    ensure_grad(pz);
    const double g = invm * self.grad[0];
    for (std::size_t i = 0; i < pz.val.size(); ++i) {
      pz.grad[i] += g * (soft[i] - py.val[i]);
    }
  });
}

Tensor elementwise(std::string_view op_tag, const Tensor& a, const Tensor* b) {
  auto binary = [&]() -> const Tensor& {
    if (b == nullptr || !b->defined()) {
      throw ValueError("elementwise: op '" + std::string(op_tag) +
                       "' needs a second operand");
    }
    return *b;
  };
  if (op_tag == "add") return add(a, binary());
  if (op_tag == "sub") return sub(a, binary());
  if (op_tag == "mul") return mul(a, binary());
  if (op_tag == "tanh") return tanh(a);
  if (op_tag == "relu") return relu(a);
  if (op_tag == "row_softmax") return row_softmax(a);
  throw ValueError("elementwise: unknown op tag '" + std::string(op_tag) + "'");
}

// --- reverse sweep ----------------------------------------------------------

void backward(const Tensor& loss) {
  const auto& root = deref(loss, "backward");
  if (root.rows != 1 || root.cols != 1)
    throw ShapeError("backward: loss must be 1x1, got " + shape_str(root));
  TensorNode* rn = loss.node().get();
  if (rn->backward_done) {
    throw AutogradError(
        "backward: graph already consumed; rebuild the forward pass");
  }
  if (!rn->requires_grad) {
    throw AutogradError("backward: no gradient path from loss to any parameter");
  }

  // Post-order DFS over the requires_grad subgraph; reversed, it processes
  // every consumer before its inputs, so each node is visited exactly once
  // with its gradient complete.
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> visited;
  struct Frame {
    TensorNode* n;
    std::size_t next;
  };
  std::vector<Frame> stack{{rn, 0}};
  visited.insert(rn);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.n->parents.size()) {
      TensorNode* p = f.n->parents[f.next++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(f.n);
      stack.pop_back();
    }
  }

  rn->grad.assign(1, 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorNode* n = *it;
    if (n->backprop && !n->grad.empty()) n->backprop(*n);
  }

  // Free the graph; values and leaf gradients stay readable.
  for (TensorNode* n : order) {
    n->backprop = nullptr;
    n->parents.clear();
  }
  rn->backward_done = true;
}

}  // namespace ehg
