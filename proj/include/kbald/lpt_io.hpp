#pragma once

#include <string>

#include "kbald/tensor.hpp"

namespace kbald {

// Binary log-prob tensor file: a 32-byte header ("LPT1" magic, 4 zero
// pad bytes, then N, S, C as 64-bit little-endian unsigned integers)
// followed by N*S*C 64-bit little-endian IEEE-754 log-probabilities in
// [i][s][c] row-major order. Total size is exactly 32 + 8*N*S*C bytes.

void write_lpt(const std::string& path, const LogProbTensor& t);

// Reads and validates; errors name the offending byte offset or row.
LogProbTensor read_lpt(const std::string& path);

}  // namespace kbald
