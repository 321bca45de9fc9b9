#ifndef RCDT_FIELD_IO_HPP
#define RCDT_FIELD_IO_HPP

#include <string>

#include "rcdt/rcdt.hpp"

namespace rcdt {

// R-CDT field container, little-endian, CRC32 over the payload:
//   magic "RCDTFLD1", u32 m, u32 n, f64 t_min, f64 t_max,
//   f64 angles[n], f64 values[m*n] column-major, u32 crc32

void save_field(const RcdtField& field, const std::string& path);
RcdtField load_field(const std::string& path);

} // namespace rcdt

#endif // RCDT_FIELD_IO_HPP
