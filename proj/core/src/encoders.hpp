#pragma once

#include "hmdiris/iriscode.hpp"

namespace hmdiris::detail {

void check_pair(const NormalizedIris& iris, const IrisMask& mask);
std::size_t dct_stride(const DctParams& p);

}  // namespace hmdiris::detail
