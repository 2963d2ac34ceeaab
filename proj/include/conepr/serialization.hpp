#pragma once

#include "conepr/design.hpp"
#include "conepr/feasibility.hpp"
#include "conepr/linalg.hpp"
#include "conepr/types.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <utility>

// JSON encodings used by the CLI and the file-based workflows.  Matrices
// travel as {"rows", "cols", "data"} with data in row-major order; plain
// vectors as JSON arrays (a {"data": [...]} wrapper is accepted on input).

namespace conepr {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInputError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidInputError("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

template <typename Scalar>
json to_json(const Matrix<Scalar>& M) {
  json data = json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

template <typename Scalar>
Matrix<Scalar> matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw InvalidInputError(what + ": expected {\"rows\", \"cols\", \"data\"}");
  }
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows <= 0 || cols <= 0 || !data.is_array() ||
      static_cast<Index>(data.size()) != rows * cols) {
    throw InvalidInputError(what + ": data length does not match rows x cols");
  }
  Matrix<Scalar> M(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j2 = 0; j2 < cols; ++j2) M(i, j2) = data[static_cast<std::size_t>(k++)];
  require_finite(M, what.c_str());
  return M;
}

template <typename Scalar>
json to_json(const Vector<Scalar>& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <typename Scalar>
Vector<Scalar> vector_from_json(const json& j, const std::string& what) {
  const json* arr = &j;
  if (j.is_object() && j.contains("data")) {
    arr = &j.at("data");
  }
  if (!arr->is_array()) {
    throw InvalidInputError(what + ": expected an array of numbers");
  }
  Vector<Scalar> v(static_cast<Index>(arr->size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = (*arr)[static_cast<std::size_t>(i)];
  require_finite(v, what.c_str());
  return v;
}

template <typename Scalar>
json to_json(const UnionOfCones<Scalar>& u) {
  json cones = json::array();
  for (const auto& c : u.cones) cones.push_back(to_json<Scalar>(c.X));
  return json{{"cones", std::move(cones)}};
}

template <typename Scalar>
UnionOfCones<Scalar> union_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cones") || !j.at("cones").is_array() ||
      j.at("cones").empty()) {
    throw InvalidInputError("union: expected {\"cones\": [matrix, ...]}");
  }
  std::vector<ConeGenerator<Scalar>> cones;
  int k = 0;
  for (const auto& cj : j.at("cones")) {
    cones.emplace_back(matrix_from_json<Scalar>(cj, "union cone " + std::to_string(k++)));
  }
  return UnionOfCones<Scalar>(std::move(cones));
}

template <typename Scalar>
json to_json(const MeasurementEnsemble<Scalar>& E) {
  json vectors = json::array();
  for (Index k = 0; k < E.vectors.cols(); ++k) {
    vectors.push_back(to_json<Scalar>(Vector<Scalar>(E.vectors.col(k))));
  }
  json j{{"gamma", E.gamma},
         {"iso", to_json<Scalar>(E.iso.map)},
         {"anchor", to_json<Scalar>(E.anchor)},
         {"deltas", to_json<Scalar>(E.deltas)},
         {"vectors", std::move(vectors)}};
  if (!E.cone_ref.empty()) {
    j["cone_ref"] = E.cone_ref;
  }
  return j;
}

template <typename Scalar>
MeasurementEnsemble<Scalar> ensemble_from_json(const json& j) {
  for (const char* key : {"gamma", "iso", "anchor", "deltas", "vectors"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw InvalidInputError(std::string("ensemble: missing \"") + key + "\"");
    }
  }
  MeasurementEnsemble<Scalar> E;
  E.gamma = j.at("gamma").get<Index>();
  E.iso.map = matrix_from_json<Scalar>(j.at("iso"), "ensemble iso");
  E.iso.is_identity =
      E.iso.map.rows() == E.iso.map.cols() && E.iso.map.isIdentity(Scalar(0));
  E.anchor = vector_from_json<Scalar>(j.at("anchor"), "ensemble anchor");
  E.deltas = vector_from_json<Scalar>(j.at("deltas"), "ensemble deltas");
  if (j.contains("cone_ref")) {
    E.cone_ref = j.at("cone_ref").get<std::string>();
  }

  const auto& vecs = j.at("vectors");
  if (!vecs.is_array() || static_cast<Index>(vecs.size()) != E.gamma) {
    throw InvalidInputError("ensemble: \"vectors\" must hold gamma columns");
  }
  const Index n = E.iso.ambient_dim();
  E.vectors.resize(n, E.gamma);
  for (Index k = 0; k < E.gamma; ++k) {
    const Vector<Scalar> col =
        vector_from_json<Scalar>(vecs[static_cast<std::size_t>(k)], "ensemble vector");
    if (col.size() != n) {
      throw InvalidInputError("ensemble: vector length disagrees with the isometry");
    }
    E.vectors.col(k) = col;
  }
  if (E.gamma != E.iso.gamma() || E.anchor.size() != E.gamma ||
      E.deltas.size() != E.gamma - 1) {
    throw InvalidInputError("ensemble: field shapes disagree with gamma");
  }
  return E;
}

template <typename Scalar>
json to_json(const DetectorBank<Scalar>& bank) {
  json dets = json::array();
  for (const auto& [key, det] : bank.detectors) {
    dets.push_back(json{{"positive_cone", det.positive_cone},
                        {"null_cone", det.null_cone},
                        {"g", to_json<Scalar>(det.g)},
                        {"margin", det.min_positive_margin}});
  }
  return json{{"ambient_dim", bank.ambient_dim},
              {"cone_count", bank.cone_count},
              {"detectors", std::move(dets)}};
}

template <typename Scalar>
DetectorBank<Scalar> bank_from_json(const json& j) {
  for (const char* key : {"ambient_dim", "cone_count", "detectors"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw InvalidInputError(std::string("detector bank: missing \"") + key + "\"");
    }
  }
  DetectorBank<Scalar> bank;
  bank.ambient_dim = j.at("ambient_dim").get<Index>();
  bank.cone_count = j.at("cone_count").get<int>();
  for (const auto& dj : j.at("detectors")) {
    PairDetector<Scalar> det;
    det.positive_cone = dj.at("positive_cone").get<int>();
    det.null_cone = dj.at("null_cone").get<int>();
    det.g = vector_from_json<Scalar>(dj.at("g"), "detector g");
    det.min_positive_margin = dj.at("margin").get<Scalar>();
    if (det.g.size() != bank.ambient_dim) {
      throw InvalidInputError("detector bank: detector dimension mismatch");
    }
    const auto key = std::minmax(det.positive_cone, det.null_cone);
    bank.detectors[{key.first, key.second}] = std::move(det);
  }
  return bank;
}

}  // namespace conepr
