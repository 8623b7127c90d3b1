#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cocopf/linalg.hpp"
#include "cocopf/rng.hpp"

using namespace cocopf;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("stream_seed separates tags and components") {
    CHECK(stream_seed("a", {1, 2}) != stream_seed("b", {1, 2}));
    CHECK(stream_seed("a", {1, 2}) != stream_seed("a", {2, 1}));
    CHECK(stream_seed("a", {1, 2}) == stream_seed("a", {1, 2}));
}

TEST_CASE("uniform stays in range and looks flat") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.uniform(-5.0, 5.0);
        CHECK(v >= -5.0);
        CHECK(v < 5.0);
        sum += v;
    }
    CHECK(std::abs(sum / n) < 0.05); // sd of the mean is ~0.009
}

TEST_CASE("normal moments") {
    Rng rng(11);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        sum += v;
        sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("index is unbiased over small ranges") {
    Rng rng(3);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i)
        ++counts[rng.index(7)];
    for (int c : counts) {
        const double freq = static_cast<double>(c) / n;
        CHECK(freq > 0.13);
        CHECK(freq < 0.156);
    }
    CHECK_THROWS_AS(rng.index(0), std::invalid_argument);
}

TEST_CASE("random orthogonal matrices are orthogonal") {
    for (int n : {2, 5, 13}) {
        Rng rng(100 + n);
        const auto q = linalg::random_orthogonal(n, rng);
        CHECK(linalg::orthogonality_error(q, n) <= 1e-10);
    }
}

TEST_CASE("jacobi eigen recovers a known decomposition") {
    // A = diag(1, 4) rotated by 45 degrees: eigenvalues 1 and 4.
    const double c = std::sqrt(0.5);
    std::vector<double> r = {c, -c, c, c};
    std::vector<double> a(4, 0.0);
    const std::vector<double> d = {1.0, 4.0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                a[i * 2 + j] += r[i * 2 + k] * d[k] * r[j * 2 + k];
    std::vector<double> vals, vecs;
    REQUIRE(linalg::jacobi_eigen(a, 2, vals, vecs));
    CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(4.0).epsilon(1e-12));
    // Reconstruct A from the decomposition.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k < 2; ++k)
                s += vecs[i * 2 + k] * vals[k] * vecs[j * 2 + k];
            CHECK(s == doctest::Approx(a[i * 2 + j]).epsilon(1e-10));
        }
}
