#include "rbm32/document.hpp"

#include <cmath>

namespace rbm32 {

namespace {

double number_at(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw MalformedDocument(where + " must be a number");
  return v.get<double>();
}

}  // namespace

TensorDocument tensor_document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedDocument("tensor document must be a JSON object");
  TensorDocument doc;
  if (j.contains("format_version")) {
    const auto& v = j.at("format_version");
    if (!v.is_string()) throw MalformedDocument("format_version must be a string");
    doc.format_version = v.get<std::string>();
    if (doc.format_version != kFormatVersion)
      throw MalformedDocument("unsupported format_version '" + doc.format_version + "'");
  }
  if (!j.contains("p")) throw MalformedDocument("tensor document needs a \"p\" field");
  const auto& p = j.at("p");
  if (p.is_array()) {
    if (p.size() != kStates) throw MalformedDocument("\"p\" must have 8 entries");
    for (int s = 0; s < kStates; ++s) doc.p[s] = number_at(p[s], "p[" + std::to_string(s) + "]");
  } else if (p.is_object()) {
    if (p.size() != kStates) throw MalformedDocument("\"p\" must have exactly the keys p000..p111");
    for (int s = 0; s < kStates; ++s) {
      std::string key = "p" + state_label(s);
      if (!p.contains(key)) throw MalformedDocument("\"p\" is missing key " + key);
      doc.p[s] = number_at(p.at(key), key);
    }
  } else {
    throw MalformedDocument("\"p\" must be an array or an object");
  }
  if (j.contains("exact")) {
    const auto& e = j.at("exact");
    if (!e.is_array() || e.size() != kStates) throw MalformedDocument("\"exact\" must be an array of 8 strings");
    Array8<Rational> q;
    for (int s = 0; s < kStates; ++s) {
      if (!e[s].is_string()) throw MalformedDocument("\"exact\" entries must be strings such as \"1/3\"");
      try {
        q[s] = parse_rational(e[s].get<std::string>());
      } catch (const std::invalid_argument& err) {
        throw MalformedDocument(std::string("exact[") + std::to_string(s) + "]: " + err.what());
      }
    }
    doc.exact = q;
  }
  return doc;
}

TensorDocument parse_tensor_document(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedDocument(std::string("malformed JSON: ") + e.what());
  }
  return tensor_document_from_json(j);
}

nlohmann::json tensor_json(const Tensor8& t) { return nlohmann::json(std::vector<double>(t.begin(), t.end())); }

nlohmann::json to_json(const TensorDocument& doc) {
  nlohmann::json j;
  j["format_version"] = doc.format_version;
  j["p"] = tensor_json(doc.p);
  if (doc.exact) {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& q : *doc.exact) e.push_back(to_string(q));
    j["exact"] = e;
  }
  return j;
}

ProbTensor to_prob_tensor(const TensorDocument& doc, bool normalize) {
  if (doc.exact) {
    ExactTensor e = to_exact_tensor(doc, normalize);
    return e.to_double();
  }
  return normalize ? ProbTensor::normalized(doc.p) : ProbTensor(doc.p);
}

ExactTensor to_exact_tensor(const TensorDocument& doc, bool normalize) {
  if (doc.exact) return normalize ? ExactTensor::normalized(*doc.exact) : ExactTensor(*doc.exact);
  if (!normalize) (void)ProbTensor(doc.p);
  Array8<Rational> q;
  for (int s = 0; s < kStates; ++s) {
    if (!std::isfinite(doc.p[s])) throw InvalidTensor("entries must be finite");
    q[s] = exact_from_double(doc.p[s]);
  }
  return ExactTensor::normalized(q);
}

}  // namespace rbm32
