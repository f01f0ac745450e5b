#pragma once

#include <string>

namespace advrc {

// p* vs c1, c2 and the c2 envelope over p* in [2, 20].
void write_constants_csv(const std::string& path);

// p* vs |M^T|_{2,p*} and |M|_{p*,2} for the 4x4 identity and one seeded
// Gaussian 4x4 matrix, p* in [1, 10].
void write_norm_comparison_csv(const std::string& path);

}  // namespace advrc
