#pragma once

#include <iosfwd>
#include <string>

#include "permbound/matrix.hpp"

namespace permbound {

// Text format: a "rows cols" header line followed by `rows` lines of
// whitespace-separated entries. A first line containing a comma selects
// header-less CSV instead. Blank lines and lines starting with '#' are skipped.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

// Header format with 17 significant digits per entry.
void write_matrix(std::ostream& out, const Matrix& a);
std::string format_matrix(const Matrix& a);

}  // namespace permbound
