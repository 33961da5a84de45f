#include "tpem/autodiff/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpem/error.hpp"

namespace tpem::ad {
namespace {

[[noreturn]] void shape_error(std::string_view op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " + b.shape_string());
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::push(Tensor value, bool requires_grad, std::function<void(Tape&, std::uint32_t)> backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::constant(Tensor value) { return push(std::move(value), false, nullptr); }

Var Tape::leaf(Tensor value, bool requires_grad) { return push(std::move(value), requires_grad, nullptr); }

Var Tape::bind(const Tensor& value, Tensor* grad_sink) {
  Node node;
  node.borrowed = &value;
  node.grad_sink = grad_sink;
  node.requires_grad = grad_sink != nullptr;
  if (grad_sink != nullptr && !grad_sink->same_shape(value)) grad_sink->reset(value.rows(), value.cols());
  nodes_.push_back(std::move(node));
  return Var(static_cast<std::uint32_t>(nodes_.size() - 1));
}

void Tape::check(Var v, std::string_view op) const {
  if (!v.valid() || v.index() >= nodes_.size()) {
    throw Error(Error::Category::Internal, std::string(op) + ": variable does not belong to this tape");
  }
}

const Tensor& Tape::value_at(std::uint32_t index) const {
  const Node& n = nodes_[index];
  return n.borrowed != nullptr ? *n.borrowed : n.value;
}

const Tensor& Tape::value(Var v) const {
  check(v, "value");
  return value_at(v.index());
}

Tensor Tape::grad(Var v) const {
  check(v, "grad");
  const Node& n = nodes_[v.index()];
  if (n.grad_sink != nullptr) return *n.grad_sink;
  if (!n.grad.empty()) return n.grad;
  const Tensor& val = value_at(v.index());
  return Tensor(val.rows(), val.cols());
}

bool Tape::requires_grad(Var v) const {
  check(v, "requires_grad");
  return nodes_[v.index()].requires_grad;
}

Tensor& Tape::grad_mut(std::uint32_t index) {
  Node& n = nodes_[index];
  if (n.grad_sink != nullptr) return *n.grad_sink;
  if (n.grad.empty()) {
    const Tensor& val = value_at(index);
    n.grad.reset(val.rows(), val.cols());
  }
  return n.grad;
}

void Tape::clear() { nodes_.clear(); }

Var Tape::matmul(Var a, Var b) {
  check(a, "matmul");
  check(b, "matmul");
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.cols() != y.rows()) shape_error("matmul", x, y);
  const std::size_t m = x.rows(), k = x.cols(), n = y.cols();
  Tensor out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = out.data() + i * n;
    const double* xrow = x.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = xrow[p];
      const double* yrow = y.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += xv * yrow[j];
    }
  }
  const std::uint32_t ia = a.index(), ib = b.index();
  return push(std::move(out), needs(ia) || needs(ib), [ia, ib, m, k, n](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.value_at(ia);
    const Tensor& y = t.value_at(ib);
    if (t.needs(ia)) {
      Tensor& gx = t.grad_mut(ia);
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = g.data() + i * n;
        double* gxrow = gx.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
          const double* yrow = y.data() + p * n;
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * yrow[j];
          gxrow[p] += acc;
        }
      }
    }
    if (t.needs(ib)) {
      Tensor& gy = t.grad_mut(ib);
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = g.data() + i * n;
        const double* xrow = x.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
          const double xv = xrow[p];
          double* gyrow = gy.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) gyrow[j] += xv * grow[j];
        }
      }
    }
  });
}

Var Tape::transpose(Var a) {
  check(a, "transpose");
  const Tensor& x = value(a);
  Tensor out(x.cols(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(j, i) = x(i, j);
  const std::uint32_t ia = a.index();
  return push(std::move(out), needs(ia), [ia](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_mut(ia);
    for (std::size_t i = 0; i < gx.rows(); ++i)
      for (std::size_t j = 0; j < gx.cols(); ++j) gx(i, j) += g(j, i);
  });
}

Var Tape::add(Var a, Var b) {
  check(a, "add");
  check(b, "add");
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error("add", x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
  const std::uint32_t ia = a.index(), ib = b.index();
  return push(std::move(out), needs(ia) || needs(ib), [ia, ib](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    for (std::uint32_t in : {ia, ib}) {
      if (!t.needs(in)) continue;
      Tensor& gi = t.grad_mut(in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

Var Tape::sub(Var a, Var b) {
  check(a, "sub");
  check(b, "sub");
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error("sub", x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= y[i];
  const std::uint32_t ia = a.index(), ib = b.index();
  return push(std::move(out), needs(ia) || needs(ib), [ia, ib](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    if (t.needs(ia)) {
      Tensor& gx = t.grad_mut(ia);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (t.needs(ib)) {
      Tensor& gy = t.grad_mut(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] -= g[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  check(a, "mul");
  check(b, "mul");
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (!x.same_shape(y)) shape_error("mul", x, y);
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= y[i];
  const std::uint32_t ia = a.index(), ib = b.index();
  return push(std::move(out), needs(ia) || needs(ib), [ia, ib](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.value_at(ia);
    const Tensor& y = t.value_at(ib);
    if (t.needs(ia)) {
      Tensor& gx = t.grad_mut(ia);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i];
    }
    if (t.needs(ib)) {
      Tensor& gy = t.grad_mut(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] += g[i] * x[i];
    }
  });
}

Var Tape::affine(Var a, double scale, double shift) {
  check(a, "affine");
  Tensor out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * out[i] + shift;
  const std::uint32_t ia = a.index();
  return push(std::move(out), needs(ia), [ia, scale](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gx = t.grad_mut(ia);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += scale * g[i];
  });
}

Var Tape::concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis must be 0 or 1");
  for (Var p : parts) check(p, "concat");
  const Tensor& first = value(parts.front());
  std::size_t rows = 0, cols = 0;
  for (Var p : parts) {
    const Tensor& v = value(p);
    if (axis == 0) {
      if (v.cols() != first.cols()) shape_error("concat(axis=0)", first, v);
      rows += v.rows();
      cols = v.cols();
    } else {
      if (v.rows() != first.rows()) shape_error("concat(axis=1)", first, v);
      cols += v.cols();
      rows = v.rows();
    }
  }
  Tensor out(rows, cols);
  std::size_t offset = 0;
  bool any_grad = false;
  std::vector<std::uint32_t> ids;
  ids.reserve(parts.size());
  for (Var p : parts) {
    const Tensor& v = value(p);
    for (std::size_t i = 0; i < v.rows(); ++i)
      for (std::size_t j = 0; j < v.cols(); ++j) {
        if (axis == 0)
          out(offset + i, j) = v(i, j);
        else
          out(i, offset + j) = v(i, j);
      }
    offset += axis == 0 ? v.rows() : v.cols();
    any_grad = any_grad || needs(p.index());
    ids.push_back(p.index());
  }
  return push(std::move(out), any_grad, [ids = std::move(ids), axis](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    std::size_t offset = 0;
    for (std::uint32_t in : ids) {
      const Tensor& v = t.value_at(in);
      if (t.needs(in)) {
        Tensor& gi = t.grad_mut(in);
        for (std::size_t i = 0; i < v.rows(); ++i)
          for (std::size_t j = 0; j < v.cols(); ++j) gi(i, j) += axis == 0 ? g(offset + i, j) : g(i, offset + j);
      }
      offset += axis == 0 ? v.rows() : v.cols();
    }
  });
}

Var Tape::sigmoid(Var a) {
  check(a, "sigmoid");
  Tensor out = value(a);
  for (double& v : out.values()) v = stable_sigmoid(v);
  const std::uint32_t ia = a.index();
  return push(std::move(out), needs(ia), [ia](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_mut(ia);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var Tape::tanh(Var a) {
  check(a, "tanh");
  Tensor out = value(a);
  for (double& v : out.values()) v = std::tanh(v);
  const std::uint32_t ia = a.index();
  return push(std::move(out), needs(ia), [ia](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& gx = t.grad_mut(ia);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Tape::softmax(Var a) {
  check(a, "softmax");
  Tensor out = value(a);
  if (out.empty()) throw ShapeError("softmax: empty operand");
  const double mx = *std::max_element(out.values().begin(), out.values().end());
  double total = 0.0;
  for (double& v : out.values()) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : out.values()) v /= total;
  const std::uint32_t ia = a.index();
  return push(std::move(out), needs(ia), [ia](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    double dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
    Tensor& gx = t.grad_mut(ia);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += y[i] * (g[i] - dot);
  });
}

Var Tape::embedding(Var table, std::size_t id) {
  check(table, "embedding");
  const Tensor& w = value(table);
  if (id >= w.rows()) {
    throw ShapeError("embedding: id " + std::to_string(id) + " out of range for table " + w.shape_string());
  }
  const std::size_t d = w.cols();
  Tensor out(d, 1);
  std::copy_n(w.data() + id * d, d, out.data());
  const std::uint32_t it = table.index();
  return push(std::move(out), needs(it), [it, id, d](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    double* row = t.grad_mut(it).data() + id * d;
    for (std::size_t j = 0; j < d; ++j) row[j] += g[j];
  });
}

Var Tape::embedding_bag(Var table, std::span<const int> ids) {
  check(table, "embedding_bag");
  const Tensor& w = value(table);
  const std::size_t d = w.cols();
  Tensor out(d, 1);
  std::vector<int> bag(ids.begin(), ids.end());
  for (int id : bag) {
    if (id < 0 || static_cast<std::size_t>(id) >= w.rows()) {
      throw ShapeError("embedding_bag: id " + std::to_string(id) + " out of range for table " + w.shape_string());
    }
    const double* row = w.data() + static_cast<std::size_t>(id) * d;
    for (std::size_t j = 0; j < d; ++j) out[j] += row[j];
  }
  const std::uint32_t it = table.index();
  return push(std::move(out), needs(it), [it, d, bag = std::move(bag)](Tape& t, std::uint32_t self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& gw = t.grad_mut(it);
    for (int id : bag) {
      double* row = gw.data() + static_cast<std::size_t>(id) * d;
      for (std::size_t j = 0; j < d; ++j) row[j] += g[j];
    }
  });
}

Var Tape::sum(Var a) {
  check(a, "sum");
  const Tensor& x = value(a);
  double total = 0.0;
  for (double v : x.values()) total += v;
  const std::uint32_t ia = a.index();
  return push(Tensor(1, 1, total), needs(ia), [ia](Tape& t, std::uint32_t self) {
    const double g = t.nodes_[self].grad[0];
    for (double& v : t.grad_mut(ia).values()) v += g;
  });
}

Var Tape::cross_entropy(Var logits, std::size_t target) {
  check(logits, "cross_entropy");
  const Tensor& x = value(logits);
  if (x.cols() != 1 || x.empty()) throw ShapeError("cross_entropy: logits must be a column, got " + x.shape_string());
  if (target >= x.rows()) {
    throw ShapeError("cross_entropy: target " + std::to_string(target) + " out of range for " + x.shape_string());
  }
  const double mx = *std::max_element(x.values().begin(), x.values().end());
  double total = 0.0;
  for (double v : x.values()) total += std::exp(v - mx);
  const double loss = mx + std::log(total) - x[target];
  if (!std::isfinite(loss)) throw NumericError("cross_entropy: non-finite loss");
  const std::uint32_t il = logits.index();
  return push(Tensor(1, 1, loss), needs(il), [il, target](Tape& t, std::uint32_t self) {
    const double g = t.nodes_[self].grad[0];
    const Tensor& x = t.value_at(il);
    const double mx = *std::max_element(x.values().begin(), x.values().end());
    double total = 0.0;
    for (double v : x.values()) total += std::exp(v - mx);
    Tensor& gx = t.grad_mut(il);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = std::exp(x[i] - mx) / total;
      gx[i] += g * (p - (i == target ? 1.0 : 0.0));
    }
  });
}

Var Tape::binary_cross_entropy(Var logits, std::span<const double> labels) {
  check(logits, "binary_cross_entropy");
  const Tensor& x = value(logits);
  if (x.size() != labels.size() || x.empty()) {
    throw ShapeError("binary_cross_entropy: logits " + x.shape_string() + " vs " + std::to_string(labels.size()) +
                     " labels");
  }
  const double n = static_cast<double>(x.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i];
    loss += std::max(z, 0.0) - z * labels[i] + std::log1p(std::exp(-std::abs(z)));
  }
  loss /= n;
  if (!std::isfinite(loss)) throw NumericError("binary_cross_entropy: non-finite loss");
  const std::uint32_t il = logits.index();
  std::vector<double> y(labels.begin(), labels.end());
  return push(Tensor(1, 1, loss), needs(il), [il, n, y = std::move(y)](Tape& t, std::uint32_t self) {
    const double g = t.nodes_[self].grad[0];
    const Tensor& x = t.value_at(il);
    Tensor& gx = t.grad_mut(il);
    for (std::size_t i = 0; i < x.size(); ++i) gx[i] += g * (stable_sigmoid(x[i]) - y[i]) / n;
  });
}

void Tape::backward(Var loss) {
  check(loss, "backward");
  const Tensor& l = value(loss);
  if (l.size() != 1) throw ShapeError("backward: loss must be scalar, got " + l.shape_string());
  if (!needs(loss.index())) return;
  grad_mut(loss.index())[0] += 1.0;
  for (std::uint32_t i = loss.index() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, i);
  }
}

}  // namespace tpem::ad
