#include "recu/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace recu {

using nlohmann::json;

namespace {

json dense_matrix(const Layer& layer) {
  const Eigen::MatrixXd a = layer.dense_weights();
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json sparse_matrix(const Layer& layer) {
  json entries = json::array();
  const SparseMatrix& w = layer.weights();
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
      entries.push_back(json::array({it.row(), it.col(), it.value()}));
    }
  }
  return json{{"rows", w.rows()}, {"cols", w.cols()}, {"entries", std::move(entries)}};
}

std::string pointer(const std::string& base, std::size_t index) { return base + "/" + std::to_string(index); }

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("expected a number", where);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError("non-finite number", where);
  return x;
}

long long nonnegative_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ParseError("expected a non-negative integer", where);
  return v.get<long long>();
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'", where);
  return *it;
}

Layer parse_layer(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ParseError("layer must be an object", where);
  const json& b = member(obj, "b", where);
  if (!b.is_array() || b.empty()) throw ParseError("bias must be a non-empty array", where + "/b");
  Eigen::VectorXd bias(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) bias[static_cast<Eigen::Index>(i)] = finite_number(b[i], pointer(where + "/b", i));

  if (auto it = obj.find("A"); it != obj.end()) {
    const json& a = *it;
    const std::string at = where + "/A";
    if (!a.is_array() || a.size() != b.size()) throw ParseError("A must have one row per bias entry", at);
    std::size_t cols = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const json& row = a[i];
      if (!row.is_array() || row.empty()) throw ParseError("matrix row must be a non-empty array", pointer(at, i));
      if (i == 0) cols = row.size();
      if (row.size() != cols) throw ParseError("ragged matrix row", pointer(at, i));
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double v = finite_number(row[j], pointer(pointer(at, i), j));
        if (v != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      }
    }
    SparseMatrix w(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(cols));
    w.setFromTriplets(triplets.begin(), triplets.end());
    return Layer(std::move(w), std::move(bias));
  }

  const std::string at = where + "/A_sparse";
  const json& s = member(obj, "A_sparse", where);
  if (!s.is_object()) throw ParseError("A_sparse must be an object", at);
  const long long rows = nonnegative_integer(member(s, "rows", at), at + "/rows");
  const long long cols = nonnegative_integer(member(s, "cols", at), at + "/cols");
  if (rows != static_cast<long long>(b.size())) throw ParseError("A_sparse rows must equal bias length", at + "/rows");
  if (cols == 0) throw ParseError("A_sparse needs at least one column", at + "/cols");
  const json& entries = member(s, "entries", at);
  if (!entries.is_array()) throw ParseError("entries must be an array", at + "/entries");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string ep = pointer(at + "/entries", e);
    const json& t = entries[e];
    if (!t.is_array() || t.size() != 3) throw ParseError("entry must be [row, col, value]", ep);
    const long long i = nonnegative_integer(t[0], ep + "/0");
    const long long j = nonnegative_integer(t[1], ep + "/1");
    if (i >= rows || j >= cols) throw ParseError("entry index out of range", ep);
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), finite_number(t[2], ep + "/2"));
  }
  SparseMatrix w(rows, cols);
  w.setFromTriplets(triplets.begin(), triplets.end(), [](const double&, const double& b) { return b; });
  return Layer(std::move(w), std::move(bias));
}

}  // namespace

std::string serialize(const Network& net, MatrixEncoding encoding) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    bool dense = encoding == MatrixEncoding::dense;
    if (encoding == MatrixEncoding::automatic) {
      dense = static_cast<long long>(layer.rows()) * static_cast<long long>(layer.cols()) <= kDenseEntryLimit;
    }
    json obj;
    if (dense) {
      obj["A"] = dense_matrix(layer);
    } else {
      obj["A_sparse"] = sparse_matrix(layer);
    }
    json b = json::array();
    for (Eigen::Index i = 0; i < layer.bias().size(); ++i) b.push_back(layer.bias()[i]);
    obj["b"] = std::move(b);
    layers.push_back(std::move(obj));
  }
  json doc;
  doc["activation"] = net.activation().name();
  doc["input_dim"] = net.input_dim();
  doc["layers"] = std::move(layers);
  return doc.dump();
}

Network deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  } catch (const json::exception& e) {
    throw ParseError(e.what(), "/");
  }
  if (!doc.is_object()) throw ParseError("document must be an object", "/");

  const json& act = member(doc, "activation", "");
  if (!act.is_string()) throw ParseError("activation must be a string", "/activation");
  Activation activation;
  try {
    activation = Activation::from_name(act.get<std::string>());
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), "/activation");
  }

  const long long input_dim = nonnegative_integer(member(doc, "input_dim", ""), "/input_dim");
  const json& layers_json = member(doc, "layers", "");
  if (!layers_json.is_array() || layers_json.empty()) throw ParseError("layers must be a non-empty array", "/layers");

  std::vector<Layer> layers;
  layers.reserve(layers_json.size());
  Eigen::Index expected_cols = static_cast<Eigen::Index>(input_dim);
  for (std::size_t l = 0; l < layers_json.size(); ++l) {
    const std::string where = pointer("/layers", l);
    try {
      layers.push_back(parse_layer(layers_json[l], where));
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ParseError*>(&e)) throw;
      throw ParseError(e.what(), where);
    }
    if (layers.back().cols() != expected_cols) {
      throw ParseError("layer has " + std::to_string(layers.back().cols()) + " columns, expected " +
                           std::to_string(expected_cols),
                       where);
    }
    expected_cols = layers.back().rows();
  }
  try {
    return Network(input_dim, std::move(layers), activation);
  } catch (const ShapeError& e) {
    throw ParseError(e.what(), "/layers");
  }
}

void save_network(const Network& net, const std::filesystem::path& path, MatrixEncoding encoding) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << serialize(net, encoding) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

}  // namespace recu
