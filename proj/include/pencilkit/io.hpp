#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pencilkit/core.hpp"
#include "pencilkit/coupling.hpp"
#include "pencilkit/types.hpp"

namespace pencilkit::io {

using json = nlohmann::json;

/// Complex scalars are two-element arrays [re, im]; matrices are arrays of
/// row arrays of such pairs. A colligation object carries keys "A", "phi",
/// "sigma"; a pencil system adds "B".
json complex_to_json(Complex z);
Complex complex_from_json(const json& j);
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);
json real_vector_to_json(const RVector& v);
RVector real_vector_from_json(const json& j);

json colligation_to_json(const Colligation& c);
Colligation colligation_from_json(const json& j);
json pencil_to_json(const PencilSystem& p);
PencilSystem pencil_from_json(const json& j);

json chain_to_json(const ChainSpec& c);
ChainSpec chain_from_json(const json& j);
ContinuousLimitSpec continuous_from_json(const json& j);

/// Parse a file into JSON; throws ErrorKind::structural with the parser
/// message on malformed input.
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

/// CSV scalar format: scientific notation with 17 significant digits, so a
/// double round-trips exactly. Complex values occupy two adjacent columns.
std::string csv_format(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& names);
  void field(double x);
  void field(Complex z);
  void field(const std::string& s);
  void end_row();

 private:
  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace pencilkit::io
