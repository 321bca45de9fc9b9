#ifndef RCDT_MODEL_IO_HPP
#define RCDT_MODEL_IO_HPP

#include <string>
#include <vector>

#include "rcdt/subspace.hpp"

namespace rcdt {

// Binary model container, little-endian, CRC32 (zlib) over the whole payload:
//   magic  "RCDTNS01"
//   u32    K, m, n, flags (bit0 = translation enrichment)
//   f64    variance_fraction, epsilon
//   u32    height, width
//   f64    angle list [n]
//   f64    t_min, t_max
//   per class: u32 class_id, u32 d, f64 basis[m*n*d] column-major,
//              u32 n_sv, f64 singular_values[n_sv]
//   u32    crc32

std::vector<unsigned char> serialize_model(const Model& model);
Model deserialize_model(const std::vector<unsigned char>& bytes);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

} // namespace rcdt

#endif // RCDT_MODEL_IO_HPP
