#include "cnnlstm/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "cnnlstm/error.hpp"
#include "cnnlstm/tensor_json.hpp"

namespace cnnlstm::nn {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += " x ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_))
    throw ShapeError("tensor data has " + std::to_string(data_.size()) + " values for shape " +
                     shape_string(shape_));
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void Tensor::add(const Tensor& other) {
  if (other.shape_ != shape_)
    throw ShapeError("cannot add " + shape_string(other.shape_) + " to " + shape_string(shape_));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_shape(const Tensor& t, const Shape& shape, std::string_view what) {
  if (t.shape() != shape)
    throw ShapeError(std::string(what) + ": expected " + shape_string(shape) + ", got " +
                     shape_string(t.shape()));
}

void require_finite(const Tensor& t, std::string_view where) {
  if (!t.all_finite()) throw NonFiniteError("non-finite value in " + std::string(where));
}

nlohmann::json tensor_to_json(const Tensor& t) {
  return {{"shape", t.shape()},
          {"data", std::vector<double>(t.data().begin(), t.data().end())}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
  try {
    return Tensor(j.at("shape").get<Shape>(), j.at("data").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tensor JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace cnnlstm::nn
