// Randomized invariants over synsets drawn uniformly from the unit sphere.

#include "oracle.hpp"
#include "test_support.hpp"

#include "synset/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

using namespace synset;
using test_support::oracleVectors;
using test_support::randomSynset;

namespace
{
constexpr double eps = 1e-9;

class RandomSynsets : public ::testing::Test
{
protected:
    std::mt19937_64 rng{20180917};

    ResolvedSynset next()
    {
        std::uniform_int_distribution< std::size_t > n_dist{3, 8}, dim_dist{2, 10};
        const auto                                   n = n_dist(rng);
        return randomSynset(rng, n, dim_dist(rng));
    }
};
} // namespace

TEST_F(RandomSynsets, InteriorIffMaximalRank)
{
    for (int trial = 0; trial < 300; ++trial)
    {
        const auto s = next();
        const auto report = analyzeSynset(s);
        const auto max_r2 = 2 * static_cast< long >(partitionCount(s.size()));
        for (std::size_t focus = 0; focus < s.size(); ++focus)
        {
            const auto a = rankAndCentrality(s, focus);
            EXPECT_EQ(interiorMembership(s, focus), a.rank_doubled == max_r2);
            EXPECT_EQ(a.in_interior, a.rank_doubled == max_r2);
        }
        for (const auto& w : report.words)
            EXPECT_EQ(w.in_interior, w.rank_doubled == max_r2);
    }
}

TEST_F(RandomSynsets, BoundsHold)
{
    for (int trial = 0; trial < 300; ++trial)
    {
        const auto       s = next();
        const SubsetSums sums{s};
        const auto       count = static_cast< long >(partitionCount(s.size()));
        for (std::size_t focus = 0; focus < s.size(); ++focus)
        {
            const auto outcomes = sums.outcomes(focus, eps);
            ASSERT_EQ(static_cast< long >(outcomes.size()), count);
            for (const auto& o : outcomes)
            {
                EXPECT_LE(std::abs(o.centrality_delta), 4.0);
                EXPECT_LE(std::abs(o.r_doubled), 2);
                EXPECT_EQ(o.r_doubled, sgnEps(o.sim1 - o.sim, eps) + sgnEps(o.sim2 - o.sim, eps));
                EXPECT_NEAR(o.centrality_delta, (o.sim1 - o.sim) + (o.sim2 - o.sim), 1e-12);
                for (const double v : {o.sim, o.sim1, o.sim2})
                {
                    EXPECT_LE(v, 1.0);
                    EXPECT_GE(v, -1.0);
                }
            }
            const auto a = sums.attributes(focus, eps);
            EXPECT_LE(std::abs(a.rank_doubled), 2 * count);
            EXPECT_LE(std::abs(a.centrality), 4.0 * static_cast< double >(count));
        }
    }
}

TEST_F(RandomSynsets, OptimizedMatchesNaiveOracle)
{
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto       s       = next();
        const auto       vectors = oracleVectors(s);
        const SubsetSums sums{s};
        for (std::size_t focus = 0; focus < s.size(); ++focus)
        {
            std::map< std::uint32_t, oracle::Outcome > by_s1;
            for (const auto& o : oracle::outcomes(vectors, focus, eps))
                by_s1[o.s1_full] = o;
            const auto fast = sums.outcomes(focus, eps);
            ASSERT_EQ(fast.size(), by_s1.size());
            for (const auto& o : fast)
            {
                const auto [s1, s2] = expandPartition(o.partition, s.size());
                const auto it       = by_s1.find(s1);
                ASSERT_NE(it, by_s1.end());
                EXPECT_EQ(it->second.s2_full, s2);
                EXPECT_EQ(o.r_doubled, it->second.r2);
                EXPECT_NEAR(o.sim, it->second.sim, 1e-9);
                EXPECT_NEAR(o.sim1, it->second.sim1, 1e-9);
                EXPECT_NEAR(o.sim2, it->second.sim2, 1e-9);
                EXPECT_NEAR(o.centrality_delta, it->second.delta, 1e-9);

                // the direct per-partition route agrees as well
                const auto direct = partitionOutcome(s, focus, o.partition, eps);
                EXPECT_EQ(direct.r_doubled, o.r_doubled);
                EXPECT_NEAR(direct.centrality_delta, o.centrality_delta, 1e-9);
            }
        }
    }
}

TEST_F(RandomSynsets, SwappingBlocksSwapsSimilarities)
{
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto s = next();
        for (std::size_t focus = 0; focus < s.size(); ++focus)
            for (const auto mask : enumeratePartitions(s.size() - 1))
            {
                const auto [m1, m2] = expandPartition(Partition{focus, mask}, s.size());
                const auto                                rows = detail::unitRows(s);
                std::vector< std::span< const double > > b1, b2;
                for (std::size_t i = 0; i < s.size(); ++i)
                {
                    if ((m1 >> i) & 1u)
                        b1.emplace_back(rows[i]);
                    if ((m2 >> i) & 1u)
                        b2.emplace_back(rows[i]);
                }
                auto b1v = b1, b2v = b2;
                b1v.emplace_back(rows[focus]);
                b2v.emplace_back(rows[focus]);

                const auto o = partitionOutcome(s, focus, Partition{focus, mask}, eps);
                // labels swapped: S1' = S2, S2' = S1
                const double sim     = setSimilarity(b2, b1);
                const double sim1    = setSimilarity(b2v, b1);
                const double sim2    = setSimilarity(b2, b1v);
                EXPECT_EQ(sim, o.sim);
                EXPECT_EQ(sim1, o.sim2);
                EXPECT_EQ(sim2, o.sim1);
                EXPECT_EQ(sgnEps(sim1 - sim, eps) + sgnEps(sim2 - sim, eps), o.r_doubled);
                EXPECT_EQ((sim1 - sim) + (sim2 - sim), o.centrality_delta);
            }
    }
}

TEST_F(RandomSynsets, PermutingWordsPermutesRows)
{
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto s        = next();
        auto       shuffled = s;
        std::shuffle(shuffled.words.begin(), shuffled.words.end(), rng);
        const auto a = analyzeSynset(s);
        const auto b = analyzeSynset(shuffled);
        std::map< std::string, WordAttributes > by_token;
        for (const auto& w : b.words)
            by_token[w.token] = w;
        for (const auto& w : a.words)
        {
            const auto& other = by_token.at(w.token);
            EXPECT_EQ(w.rank_doubled, other.rank_doubled);
            EXPECT_NEAR(w.centrality, other.centrality, 1e-9);
            EXPECT_EQ(w.in_interior, other.in_interior);
        }
        auto ia = a.interior, ib = b.interior;
        std::sort(ia.begin(), ia.end());
        std::sort(ib.begin(), ib.end());
        EXPECT_EQ(ia, ib);
    }
}

TEST_F(RandomSynsets, InteriorIffMaximalRankUnderCoarseTolerance)
{
    // A coarse band turns many near-ties into zeros; the equivalence must still hold.
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto s      = next();
        const auto max_r2 = 2 * static_cast< long >(partitionCount(s.size()));
        for (const double band : {1e-3, 5e-2})
            for (std::size_t focus = 0; focus < s.size(); ++focus)
            {
                const GeometryOptions options{band, 16};
                EXPECT_EQ(interiorMembership(s, focus, options),
                          rankAndCentrality(s, focus, options).rank_doubled == max_r2);
            }
    }
}
