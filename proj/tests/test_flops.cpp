#include <doctest.h>

#include "rcdt/flops.hpp"

using namespace rcdt;

namespace {

FlopConfig mnist_scale(int per_class, int rank) {
    FlopConfig f;
    f.m = 40;
    f.n_angles = 64;
    f.height = 28;
    f.width = 28;
    f.train_per_class.assign(10, per_class);
    f.ranks.assign(10, rank);
    f.n_test = 10000;
    return f;
}

} // namespace

TEST_CASE("transform term scales linearly, SVD term faster") {
    const FlopCounts a = count_flops(mnist_scale(256, 258));
    const FlopCounts b = count_flops(mnist_scale(512, 514));

    CHECK(b.transform_train == doctest::Approx(2.0 * a.transform_train));
    CHECK(b.svd_train > 2.0 * a.svd_train);
    CHECK(b.train_total ==
          doctest::Approx(b.transform_train + b.enrich_train + b.svd_train));
}

TEST_CASE("per-image test cost is independent of the test set size") {
    FlopConfig a = mnist_scale(64, 66);
    FlopConfig b = mnist_scale(64, 66);
    a.n_test = 100;
    b.n_test = 10000;
    CHECK(count_flops(a).test_per_image == count_flops(b).test_per_image);
    CHECK(count_flops(b).test_total ==
          doctest::Approx(100.0 * count_flops(a).test_total));
}

TEST_CASE("training dwarfs per-image testing at MNIST scale") {
    const FlopCounts c = count_flops(mnist_scale(1024, 1026));
    CHECK(c.train_total / c.test_per_image >= 1e3);
}

TEST_CASE("argument validation") {
    FlopConfig bad = mnist_scale(4, 6);
    bad.ranks.pop_back();
    CHECK_THROWS(count_flops(bad));
}
