#ifndef RCDT_PGM_HPP
#define RCDT_PGM_HPP

#include <Eigen/Core>
#include <string>

namespace rcdt {

/// Reads a P2 (ASCII) or P5 (binary) PGM image, 8- or 16-bit.
Eigen::MatrixXd read_pgm(const std::string& path);

/// Writes an 8-bit P5 PGM, scaling by the image maximum.
void write_pgm(const Eigen::MatrixXd& image, const std::string& path);

} // namespace rcdt

#endif // RCDT_PGM_HPP
