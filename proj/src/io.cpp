#include "pencilkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "pencilkit/errors.hpp"

namespace pencilkit::io {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw structural_error("expected complex scalar as [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw structural_error("expected matrix as array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return CMatrix(0, 0);
  if (!j[0].is_array()) throw structural_error("expected matrix rows as arrays");
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!j[static_cast<size_t>(i)].is_array() ||
        static_cast<Index>(j[static_cast<size_t>(i)].size()) != cols)
      throw structural_error("ragged matrix rows");
    for (Index c = 0; c < cols; ++c)
      m(i, c) = complex_from_json(j[static_cast<size_t>(i)][static_cast<size_t>(c)]);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw structural_error("expected vector as array");
  CVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i)
    v(i) = complex_from_json(j[static_cast<size_t>(i)]);
  return v;
}

json real_vector_to_json(const RVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVector real_vector_from_json(const json& j) {
  if (!j.is_array()) throw structural_error("expected array of reals");
  RVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const json& e = j[static_cast<size_t>(i)];
    if (!e.is_number()) throw structural_error("expected real number");
    v(i) = e.get<double>();
  }
  return v;
}

json colligation_to_json(const Colligation& c) {
  return json{{"A", matrix_to_json(c.A)},
              {"phi", matrix_to_json(c.phi)},
              {"sigma", matrix_to_json(c.sigma)}};
}

Colligation colligation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("phi") ||
      !j.contains("sigma"))
    throw structural_error("colligation object needs keys A, phi, sigma");
  CMatrix a = matrix_from_json(j.at("A"));
  CMatrix phi = matrix_from_json(j.at("phi"));
  CMatrix sigma = matrix_from_json(j.at("sigma"));
  if (phi.size() == 0 && phi.rows() == 0)
    phi = CMatrix(0, a.rows());  // allow [] for an empty channel map
  return Colligation::validated(std::move(a), std::move(phi),
                                std::move(sigma));
}

json pencil_to_json(const PencilSystem& p) {
  json j = colligation_to_json(p.colligation);
  j["B"] = matrix_to_json(p.B);
  return j;
}

PencilSystem pencil_from_json(const json& j) {
  if (!j.is_object() || !j.contains("B"))
    throw structural_error("pencil system object needs key B");
  Colligation c = colligation_from_json(j);
  CMatrix b = matrix_from_json(j.at("B"));
  return PencilSystem::validated(std::move(c), std::move(b));
}

json chain_to_json(const ChainSpec& c) {
  json factors = json::array();
  for (const ChainFactor& f : c.factors)
    factors.push_back(json{{"b", f.b},
                           {"lambda", complex_to_json(f.lambda1)},
                           {"beta", f.beta}});
  return json{{"factors", std::move(factors)}};
}

ChainSpec chain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors"))
    throw structural_error("chain spec needs key \"factors\"");
  std::vector<ChainFactor> factors;
  for (const json& e : j.at("factors")) {
    ChainFactor f;
    f.b = e.at("b").get<double>();
    f.lambda1 = complex_from_json(e.at("lambda"));
    f.beta = e.at("beta").get<double>();
    factors.push_back(f);
  }
  return ChainSpec::validated(std::move(factors));
}

ContinuousLimitSpec continuous_from_json(const json& j) {
  if (!j.is_object() || !j.contains("l") || !j.contains("b") ||
      !j.contains("a"))
    throw structural_error("continuous chain spec needs keys l, b, a");
  const double l = j.at("l").get<double>();
  RVector b = real_vector_from_json(j.at("b"));
  RVector a = real_vector_from_json(j.at("a"));
  return ContinuousLimitSpec::validated(
      l, std::vector<double>(b.data(), b.data() + b.size()),
      std::vector<double>(a.data(), a.data() + a.size()));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw structural_error("JSON parse failure in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw structural_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

std::string csv_format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ",";
    out_ << names[i];
  }
  out_ << "\n";
}

void CsvWriter::field(double x) {
  if (row_started_) out_ << ",";
  out_ << csv_format(x);
  row_started_ = true;
}

void CsvWriter::field(Complex z) {
  field(z.real());
  field(z.imag());
}

void CsvWriter::field(const std::string& s) {
  if (row_started_) out_ << ",";
  out_ << s;
  row_started_ = true;
}

void CsvWriter::end_row() {
  out_ << "\n";
  row_started_ = false;
}

}  // namespace pencilkit::io
