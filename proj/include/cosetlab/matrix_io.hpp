#pragma once

#include <iosfwd>
#include <string>

#include "cosetlab/linop.hpp"
#include "cosetlab/measurements.hpp"

namespace cosetlab {

// Plain-text interchange format:
//
//   matrix <dim>
//   <re> <im> <re> <im> ...      one line per row, dim pairs
//
// Numbers are written in shortest round-trip form, so a write/read cycle
// reproduces every entry exactly. A POVM is
//
//   povm <count> <dim>
//   element <label>
//   matrix <dim>
//   ...
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

void write_povm(std::ostream& os, const POVM& povm);
POVM read_povm(std::istream& is);

void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

}  // namespace cosetlab
