#include <doctest.h>

#include "tripa/fenwick.hpp"
#include "tripa/rng.hpp"
#include "tripa/simulator.hpp"

#include <cmath>
#include <map>
#include <set>
#include <vector>

using namespace tripa;

namespace {

// naive reference for the prefix-sum tree
struct NaiveWeights {
    std::vector<std::uint64_t> w;
    std::uint64_t prefix(std::size_t count) const {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < count; ++i) s += w[i];
        return s;
    }
    std::size_t find(std::uint64_t target) const {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc += w[i];
            if (target < acc) return i;
        }
        return w.size();
    }
};

double binomial_z(std::int64_t observed, double prob, std::int64_t trials) {
    const double t = static_cast<double>(trials);
    return (observed - t * prob) / std::sqrt(t * prob * (1 - prob));
}

}  // namespace

TEST_CASE("rng determinism and stream separation") {
    Rng a(42, 0), b(42, 0), c(42, 1);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        all_equal = all_equal && x == b.next();
        any_diff = any_diff || x != c.next();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("rng ranges") {
    Rng rng(7, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 10000; ++i) CHECK(rng.below(17) < 17);
    // rough uniformity of below()
    std::int64_t bins[6] = {};
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++bins[rng.below(6)];
    for (const auto count : bins) CHECK(std::abs(binomial_z(count, 1.0 / 6, n)) < 4.0);
}

TEST_CASE("fenwick matches naive reference under random appends and adds") {
    Rng rng(3, 0);
    FenwickTree tree;
    NaiveWeights naive;
    for (int op = 0; op < 2000; ++op) {
        if (naive.w.empty() || rng.u01() < 0.3) {
            const std::uint64_t w = rng.below(5);
            tree.append(w);
            naive.w.push_back(w);
        } else {
            const auto i = static_cast<std::size_t>(rng.below(naive.w.size()));
            tree.add(i, 1);
            naive.w[i] += 1;
        }
    }
    REQUIRE(tree.size() == naive.w.size());
    CHECK(tree.total() == naive.prefix(naive.w.size()));
    for (std::size_t i = 0; i <= naive.w.size(); ++i) CHECK(tree.prefix(i) == naive.prefix(i));
    for (std::size_t i = 0; i < naive.w.size(); ++i) CHECK(tree.value(i) == naive.w[i]);
    for (std::uint64_t target = 0; target < tree.total(); target += 7)
        CHECK(tree.find(target) == naive.find(target));
}

TEST_CASE("sample_weighted single element and empty index") {
    FenwickTree tree;
    Rng rng(1, 0);
    CHECK_THROWS_AS(sample_weighted(tree, rng), std::logic_error);
    tree.append(5);
    for (int i = 0; i < 50; ++i) CHECK(sample_weighted(tree, rng) == 0);
}

TEST_CASE("sample_weighted frequencies follow the weights") {
    Rng rng(11, 0);
    const int n = 100000;

    FenwickTree uniform;
    for (int i = 0; i < 3; ++i) uniform.append(1);
    std::int64_t count_u[3] = {};
    for (int i = 0; i < n; ++i) ++count_u[sample_weighted(uniform, rng)];
    for (const auto c : count_u) CHECK(std::abs(binomial_z(c, 1.0 / 3, n)) < 3.0);

    FenwickTree skewed;
    skewed.append(1);
    skewed.append(2);
    skewed.append(3);
    std::int64_t count_s[3] = {};
    for (int i = 0; i < n; ++i) ++count_s[sample_weighted(skewed, rng)];
    const double expected[3] = {1.0 / 6, 1.0 / 3, 1.0 / 2};
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(binomial_z(count_s[i], expected[i], n)) < 3.0);
}

TEST_CASE("uniform distinct pairs and triples") {
    Rng rng(5, 0);
    SUBCASE("population 3, count 3 always yields the full set") {
        for (int i = 0; i < 200; ++i) {
            const auto t = sample_uniform_triple(3, rng);
            const std::set<std::uint32_t> s(t.begin(), t.end());
            CHECK(s == std::set<std::uint32_t>{0, 1, 2});
        }
    }
    SUBCASE("population 3 pairs are uniform") {
        const int n = 100000;
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> counts;
        for (int i = 0; i < n; ++i) {
            auto pr = sample_uniform_pair(3, rng);
            if (pr[0] > pr[1]) std::swap(pr[0], pr[1]);
            ++counts[{pr[0], pr[1]}];
        }
        REQUIRE(counts.size() == 3);
        for (const auto& [key, c] : counts)
            CHECK(std::abs(binomial_z(c, 1.0 / 3, n)) < 3.0);
    }
    SUBCASE("population 5 triples are uniform over the 10 subsets") {
        const int n = 100000;
        std::map<std::set<std::uint32_t>, std::int64_t> counts;
        for (int i = 0; i < n; ++i) {
            const auto t = sample_uniform_triple(5, rng);
            ++counts[std::set<std::uint32_t>(t.begin(), t.end())];
        }
        REQUIRE(counts.size() == 10);
        for (const auto& [key, c] : counts)
            CHECK(std::abs(binomial_z(c, 1.0 / 10, n)) < 3.0);
    }
    SUBCASE("too small populations are rejected") {
        CHECK_THROWS_AS(sample_uniform_pair(1, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_uniform_triple(2, rng), std::invalid_argument);
    }
}
