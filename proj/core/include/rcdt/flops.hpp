#ifndef RCDT_FLOPS_HPP
#define RCDT_FLOPS_HPP

#include <vector>

namespace rcdt {

// Analytic floating-point operation model. Counts are closed-form estimates
// using a fixed cost per primitive (documented next to each formula in
// flops.cpp), not instrumented measurements.

struct FlopConfig {
    int m = 0;        // t-axis points
    int n_angles = 0;
    int height = 0;
    int width = 0;
    std::vector<int> train_per_class; // class sizes
    std::vector<int> ranks;           // retained rank per class
    long n_test = 0;
};

struct FlopCounts {
    double transform_train = 0; // R-CDT of every training image
    double svd_train = 0;       // orthogonalization
    double enrich_train = 0;    // spanning-set projections
    double train_total = 0;
    double test_per_image = 0;
    double test_total = 0;
};

/// R-CDT cost of one image (normalize + Radon + per-angle CDT).
double transform_flops(int m, int n_angles, int height, int width);

/// Dense SVD/orthonormalization cost model for an r x c column stack.
double svd_flops(long rows, long cols);

FlopCounts count_flops(const FlopConfig& config);

} // namespace rcdt

#endif // RCDT_FLOPS_HPP
