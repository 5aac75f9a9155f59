#include "cosetlab/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cosetlab/errors.hpp"
#include "cosetlab/report.hpp"

namespace cosetlab {

namespace {

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw UsageError("bad number '" + tok + "'");
  return v;
}

std::string next_token(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw UsageError(std::string("unexpected end of input while reading ") + what);
  return tok;
}

void expect(std::istream& is, const std::string& word) {
  const std::string tok = next_token(is, word.c_str());
  if (tok != word) throw UsageError("expected '" + word + "', found '" + tok + "'");
}

std::size_t parse_size(const std::string& tok) {
  std::size_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw UsageError("bad size '" + tok + "'");
  return v;
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
  if (m.rows() != m.cols()) throw UsageError("write_matrix: matrix is not square");
  os << "matrix " << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_exact(m(i, j).real()) << ' ' << format_exact(m(i, j).imag());
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  expect(is, "matrix");
  const std::size_t dim = parse_size(next_token(is, "dimension"));
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = parse_double(next_token(is, "matrix entry"));
      const double im = parse_double(next_token(is, "matrix entry"));
      m(i, j) = cplx(re, im);
    }
  return m;
}

void write_povm(std::ostream& os, const POVM& povm) {
  os << "povm " << povm.size() << ' ' << povm.dim() << '\n';
  for (std::size_t i = 0; i < povm.size(); ++i) {
    os << "element " << povm.label(i) << '\n';
    write_matrix(os, povm.element(i).matrix());
  }
}

POVM read_povm(std::istream& is) {
  expect(is, "povm");
  const std::size_t count = parse_size(next_token(is, "element count"));
  const std::size_t dim = parse_size(next_token(is, "dimension"));
  std::vector<std::string> labels;
  std::vector<HermitianOperator> elements;
  for (std::size_t i = 0; i < count; ++i) {
    expect(is, "element");
    labels.push_back(next_token(is, "label"));
    Matrix m = read_matrix(is);
    if (static_cast<std::size_t>(m.rows()) != dim) throw UsageError("POVM element dimension mismatch");
    elements.emplace_back(std::move(m));
  }
  return POVM(std::move(labels), std::move(elements));
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  write_matrix(os, m);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open '" + path + "'");
  return read_matrix(is);
}

}  // namespace cosetlab
