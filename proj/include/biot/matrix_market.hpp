#pragma once

#include <string>

#include "biot/csr.hpp"

namespace biot {

// Coordinate-format ASCII export, "matrix coordinate real symmetric" header,
// 1-based indices, lower triangle only. The input must be symmetric.
void write_matrix_market(const CsrMatrix& A, const std::string& path);

CsrMatrix read_matrix_market(const std::string& path);

}  // namespace biot
