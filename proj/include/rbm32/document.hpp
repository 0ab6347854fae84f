#pragma once

// JSON tensor documents:
//
//   {"format_version": "1", "p": [p000, p001, ..., p111]}
//   {"format_version": "1", "p": {"p000": ..., "p111": ...}}
//
// with an optional "exact": ["num/den", ...] array of eight rationals.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rbm32/rational.hpp"
#include "rbm32/tensor.hpp"

namespace rbm32 {

inline constexpr const char* kFormatVersion = "1";

/// Unparseable JSON or a document that does not have the expected shape.
class MalformedDocument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TensorDocument {
  std::string format_version = kFormatVersion;
  Tensor8 p{};
  std::optional<Array8<Rational>> exact;
};

/// Throws MalformedDocument.
TensorDocument parse_tensor_document(std::string_view text);
TensorDocument tensor_document_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TensorDocument& doc);

/// Validates (or with `normalize`, rescales) the entries; throws InvalidTensor.
ProbTensor to_prob_tensor(const TensorDocument& doc, bool normalize);

/// The "exact" field when present, otherwise the exact binary values of p.
/// The latter rarely sum to exactly one, so they are rescaled whenever
/// `normalize` is set or no exact field was given.
ExactTensor to_exact_tensor(const TensorDocument& doc, bool normalize);

nlohmann::json tensor_json(const Tensor8& t);

}  // namespace rbm32
