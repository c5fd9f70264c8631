#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "credamp/kmeans1d.hpp"

using namespace credamp;

namespace {

// Exact 1-D k-means by dynamic programming over sorted prefixes. O(k n^2),
// plenty for oracle sizes. Returns the optimal within-cluster sum of squares.
double dp_optimal_wcss(std::vector<double> x, int k) {
    std::sort(x.begin(), x.end());
    const int n = static_cast<int>(x.size());
    std::vector<double> pre(n + 1, 0.0), pre2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        pre[i + 1] = pre[i] + x[i];
        pre2[i + 1] = pre2[i] + x[i] * x[i];
    }
    auto cost = [&](int i, int j) {  // ssq of x[i..j), i < j
        double s = pre[j] - pre[i];
        double s2 = pre2[j] - pre2[i];
        double m = static_cast<double>(j - i);
        return s2 - s * s / m;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(k + 1, std::vector<double>(n + 1, inf));
    d[0][0] = 0.0;
    for (int c = 1; c <= k; ++c)
        for (int j = c; j <= n; ++j)
            for (int i = c - 1; i < j; ++i)
                d[c][j] = std::min(d[c][j], d[c - 1][i] + cost(i, j));
    return d[k][n];
}

}  // namespace

TEST_CASE("kmeans_1d: perfectly separated groups") {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) {
        v.push_back(0.0);
        v.push_back(0.5);
        v.push_back(1.0);
    }
    auto r = kmeans_1d(v, 3);
    REQUIRE(r.centroids.size() == 3);
    CHECK(r.centroids[0] == doctest::Approx(0.0));
    CHECK(r.centroids[1] == doctest::Approx(0.5));
    CHECK(r.centroids[2] == doctest::Approx(1.0));
    CHECK(r.wcss == doctest::Approx(0.0));
}

TEST_CASE("kmeans_1d: two-point mean") {
    std::vector<double> v = {0.1, 0.11, 0.9};
    auto r = kmeans_1d(v, 2);
    REQUIRE(r.centroids.size() == 2);
    CHECK(r.centroids[0] == doctest::Approx(0.105));
    CHECK(r.centroids[1] == doctest::Approx(0.9));
}

TEST_CASE("kmeans_1d: fewer distinct values than clusters") {
    std::vector<double> v = {0.2, 0.2, 0.8, 0.8};
    CHECK_THROWS_AS(kmeans_1d(v, 3), DataError);
}

TEST_CASE("kmeans_1d assignments are monotone in score") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(80);
        for (auto& x : v) x = static_cast<double>(gen()) / gen.max();
        auto r = kmeans_1d(v, 3);
        std::vector<std::pair<double, int>> pairs;
        for (std::size_t i = 0; i < v.size(); ++i) pairs.emplace_back(v[i], r.assignment[i]);
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i)
            CHECK(pairs[i - 1].second <= pairs[i].second);
    }
}

TEST_CASE("kmeans_1d centroids are permutation invariant") {
    std::mt19937 gen(13);
    std::vector<double> v(60);
    for (auto& x : v) x = static_cast<double>(gen()) / gen.max();
    auto base = kmeans_1d(v, 3);
    for (int rep = 0; rep < 4; ++rep) {
        std::shuffle(v.begin(), v.end(), gen);
        auto r = kmeans_1d(v, 3);
        for (int c = 0; c < 3; ++c)
            CHECK(r.centroids[c] == doctest::Approx(base.centroids[c]).epsilon(1e-12));
    }
}

TEST_CASE("kmeans_1d reaches the DP optimum on most random inputs") {
    std::mt19937 gen(17);
    int flagged = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        int n = 20 + static_cast<int>(gen() % 181);
        std::vector<double> v(n);
        for (auto& x : v) x = static_cast<double>(gen()) / gen.max();
        auto r = kmeans_1d(v, 3);
        double best = dp_optimal_wcss(v, 3);
        CHECK(r.wcss >= best - 1e-9);
        if (r.wcss > best + 1e-9) ++flagged;  // local optimum
    }
    CHECK(flagged <= trials / 20);  // <= 5% flagged rate
}
