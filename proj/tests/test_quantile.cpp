#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "credamp/quantile.hpp"

using namespace credamp;

namespace {

// Independent sort-and-split oracle: recompute the j/k quantile boundaries
// naively, merge duplicates, and assign by scanning the cut list.
std::vector<int> oracle_assign(const std::vector<double>& values, int k) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double p) {
        double h = p * static_cast<double>(sorted.size() - 1);
        auto lo = static_cast<std::size_t>(h);
        if (lo + 1 >= sorted.size()) return sorted.back();
        return sorted[lo] * (1.0 - (h - lo)) + sorted[lo + 1] * (h - lo);
    };
    std::vector<double> edges;
    for (int j = 0; j <= k; ++j) edges.push_back(q(static_cast<double>(j) / k));
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<double> cuts;
    if (edges.size() >= 3) cuts.assign(edges.begin() + 1, edges.end() - 1);

    std::vector<int> out;
    for (double v : values) {
        int b = 0;
        while (b < static_cast<int>(cuts.size()) && v > cuts[b]) ++b;
        out.push_back(b);
    }
    return out;
}

}  // namespace

TEST_CASE("quantile_bins: evenly split distinct values") {
    std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8};
    auto qb = quantile_bins(v, 4);
    CHECK(qb.assignment == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3});
    CHECK(qb.edges.bin_count() == 4);
}

TEST_CASE("quantile_bins: all values equal collapses to one bin") {
    std::vector<double> v(12, 7.0);
    auto qb = quantile_bins(v, 4);
    CHECK(qb.edges.bin_count() == 1);
    for (int b : qb.assignment) CHECK(b == 0);
}

TEST_CASE("quantile_bins: duplicate edges merge to fewer bins") {
    std::vector<double> v = {0, 0, 0, 0, 1, 2, 3, 4};
    auto qb = quantile_bins(v, 4);
    CHECK(qb.edges.bin_count() == 3);
    CHECK(qb.assignment == std::vector<int>{0, 0, 0, 0, 1, 1, 2, 2});
    CHECK(qb.assignment == oracle_assign(v, 4));
}

TEST_CASE("quantile_bins errors") {
    CHECK_THROWS_AS(quantile_bins(std::vector<double>{}, 4), DataError);
    CHECK_THROWS_AS(quantile_bins(std::vector<double>{1, 2, 3}, 1), ConfigError);
}

TEST_CASE("quantile_bins matches the sort-and-split oracle on random vectors") {
    std::mt19937 gen(123);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(gen() % 400);
        bool tie_heavy = trial % 3 == 0;
        std::vector<double> v(n);
        for (auto& x : v) {
            if (tie_heavy)
                x = static_cast<double>(gen() % 3);  // >=90% ties for small ranges
            else
                x = static_cast<double>(gen() % 10000);
        }
        int k = 2 + static_cast<int>(gen() % 5);
        auto qb = quantile_bins(v, k);
        CHECK(qb.assignment == oracle_assign(v, k));
        CHECK(qb.edges.bin_count() <= k);
    }
}

TEST_CASE("quantile_bins monotonicity and balance properties") {
    std::mt19937 gen(456);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 8 + static_cast<int>(gen() % 200);
        std::vector<double> v(n);
        for (auto& x : v) x = static_cast<double>(gen()) / gen.max();
        // All-distinct with probability ~1; enforce it anyway.
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        std::shuffle(v.begin(), v.end(), gen);

        int k = 4;
        auto qb = quantile_bins(v, k);

        // Monotonicity: max of bin i <= min of bin i+1.
        std::map<int, std::pair<double, double>> ranges;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto [it, fresh] = ranges.try_emplace(qb.assignment[i], v[i], v[i]);
            if (!fresh) {
                it->second.first = std::min(it->second.first, v[i]);
                it->second.second = std::max(it->second.second, v[i]);
            }
        }
        double prev_max = -1e300;
        for (auto& [bin, range] : ranges) {
            CHECK(range.first >= prev_max);
            prev_max = range.second;
        }

        // Balance: distinct values, sizes differ by at most 1.
        std::map<int, int> sizes;
        for (int b : qb.assignment) ++sizes[b];
        int lo = 1 << 30, hi = 0;
        for (auto& [bin, s] : sizes) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("quantile_bins edges are permutation invariant") {
    std::mt19937 gen(789);
    std::vector<double> v(57);
    for (auto& x : v) x = static_cast<double>(gen() % 50);
    auto a = quantile_bins(v, 4);
    std::vector<std::pair<double, int>> tagged;
    for (std::size_t i = 0; i < v.size(); ++i) tagged.emplace_back(v[i], a.assignment[i]);
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(tagged.begin(), tagged.end(), gen);
        std::vector<double> w;
        for (auto& [val, bin] : tagged) w.push_back(val);
        auto b = quantile_bins(w, 4);
        CHECK(b.edges.cuts == a.edges.cuts);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(b.assignment[i] == tagged[i].second);
    }
}
