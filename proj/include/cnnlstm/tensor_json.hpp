#pragma once

#include "json.hpp"

#include "cnnlstm/tensor.hpp"

namespace cnnlstm::nn {

/// Debug dump format: {"shape": [...], "data": [...]}. Doubles are written
/// with round-trip precision, so a dump reloads bit-exactly.
nlohmann::json tensor_to_json(const Tensor& t);
/// Throws ParseError on a malformed object or a shape/data size mismatch.
Tensor tensor_from_json(const nlohmann::json& j);

}  // namespace cnnlstm::nn
