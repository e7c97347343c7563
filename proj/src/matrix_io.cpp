#include "respond/core.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace respond {

void write_matrix(std::ostream& out, const Matrix& a) {
  require_square(a, "write_matrix");
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << std::setprecision(17);
  buf << a.rows() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      buf << i << ' ' << j << ' ' << a(i, j).real() << ' ' << a(i, j).imag() << '\n';
    }
  }
  out << buf.str();
}

Matrix read_matrix(std::istream& in) {
  const char* op = "read_matrix";
  std::string line;
  long long dim = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream head(line);
    head.imbue(std::locale::classic());
    if (!(head >> dim) || dim < 1) throw Error(ErrorCode::ParseError, op, "first line must be a positive dimension");
    break;
  }
  if (dim < 1) throw Error(ErrorCode::ParseError, op, "missing dimension line");
  Matrix a = Matrix::Zero(dim, dim);
  std::vector<char> seen(static_cast<std::size_t>(dim * dim), 0);
  long long count = 0;
  while (count < dim * dim && std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    long long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> i >> j >> re >> im)) throw Error(ErrorCode::ParseError, op, "malformed entry line: " + line);
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw Error(ErrorCode::ParseError, op, "index out of range: " + line);
    auto& flag = seen[static_cast<std::size_t>(i + j * dim)];
    if (flag) throw Error(ErrorCode::ParseError, op, "duplicate entry: " + line);
    flag = 1;
    a(i, j) = Complex(re, im);
    ++count;
  }
  if (count != dim * dim) throw Error(ErrorCode::ParseError, op, "expected dim^2 entry lines");
  return a;
}

}  // namespace respond
