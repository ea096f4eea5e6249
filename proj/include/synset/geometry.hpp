#ifndef SYNSET_GEOMETRY_HPP
#define SYNSET_GEOMETRY_HPP

// Synset interior, rank and centrality.
//
// For a word v of a synset S (|S| = n >= 3) every unordered split of S \ {v}
// into two nonempty blocks S1 | S2 is visited. With sim = sim{S1, S2},
// sim1 = sim{S1 + v, S2} and sim2 = sim{S1, S2 + v}:
//
//   r_v(p)          = (sgn(sim1 - sim) + sgn(sim2 - sim)) / 2
//   centrality(v,p) = (sim1 - sim) + (sim2 - sim)
//
// rank(v) and centrality(v) are the sums over all 2^(n-2) - 1 splits, and v
// lies in the interior iff both deltas are positive for every split, which
// happens exactly when rank(v) reaches 2^(n-2) - 1. Half-valued r_v is kept
// exact by storing 2 * r_v as an integer.

#include "synset/embeddings.hpp"
#include "synset/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace synset
{
/// Tables grow as 2^n * n, so this is the largest size the engine accepts at all.
inline constexpr std::size_t hard_max_synset_size = 20;

struct GeometryOptions
{
    /// Differences within [-eps, eps] count as ties, both in sgn and in interior membership.
    double      eps             = 1e-9;
    std::size_t max_synset_size = 16;
};

struct ResolvedWord
{
    std::string token;  ///< as written in the synset file
    WordVector  vector; ///< vector.token is the model key that matched
};

struct ResolvedSynset
{
    std::string                  id;
    std::optional< std::string > headword;
    std::vector< ResolvedWord >  words;
    std::size_t                  source_size = 0; ///< word count before OOV filtering

    [[nodiscard]] std::size_t size() const noexcept { return words.size(); }
};

/// One unordered split of S \ {v}. Bit k of `mask` refers to the k-th word of the
/// synset once the focus word is skipped; 1 places it in S1, 0 in S2. Canonical
/// masks always have bit 0 set.
struct Partition
{
    std::size_t   focus_index = 0;
    std::uint32_t mask        = 0;
};

struct PartitionOutcome
{
    Partition partition;
    double    sim              = 0.0;
    double    sim1             = 0.0;
    double    sim2             = 0.0;
    int       r_doubled        = 0; ///< 2 * r_v(p), in {-2, ..., 2}
    double    centrality_delta = 0.0;
};

struct WordAttributes
{
    std::string token;
    std::string model_key;
    long        rank_doubled    = 0;
    double      centrality      = 0.0;
    bool        in_interior     = false;
    std::size_t partition_count = 0;

    [[nodiscard]] double rank() const noexcept { return static_cast< double >(rank_doubled) / 2.0; }
};

struct SynsetReport
{
    std::string                   id;
    std::optional< std::string >  headword;
    std::size_t                   n           = 0;
    std::size_t                   source_size = 0;
    std::vector< WordAttributes > words;    ///< rank desc, centrality desc, token asc
    std::vector< std::string >    interior; ///< interior tokens, in `words` order
};

/// 2^(n-2) - 1: the number of splits of S \ {v} into two nonempty blocks.
constexpr std::size_t partitionCount(std::size_t synset_size) noexcept
{
    return synset_size < 3 ? 0 : (std::size_t{1} << (synset_size - 2)) - 1;
}

inline int sgnEps(double x, double eps) noexcept
{
    if (std::abs(x) <= eps)
        return 0;
    return x > 0.0 ? 1 : -1;
}

/// Canonical masks over m >= 2 elements, ascending: (k << 1) | 1 for k = 0 .. 2^(m-1) - 2.
/// Element 0 is always in S1, so each unordered split appears once.
inline std::vector< std::uint32_t > enumeratePartitions(std::size_t m)
{
    if (m < 2)
        throw SynsetSizeError("partitions need at least 2 elements, got " + std::to_string(m));
    if (m > 31)
        throw SynsetSizeError("too many elements to enumerate partitions: " + std::to_string(m));
    const std::uint32_t           count = (std::uint32_t{1} << (m - 1)) - 1;
    std::vector< std::uint32_t > masks;
    masks.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k)
        masks.push_back((k << 1) | 1u);
    return masks;
}

/// Maps a partition mask over S \ {v} onto the full synset: returns (S1, S2) masks over n bits.
inline std::pair< std::uint32_t, std::uint32_t > expandPartition(const Partition& p, std::size_t n)
{
    std::uint32_t s1 = 0, s2 = 0;
    std::size_t   bit = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (i == p.focus_index)
            continue;
        ((p.mask >> bit) & 1u ? s1 : s2) |= std::uint32_t{1} << i;
        ++bit;
    }
    return {s1, s2};
}

namespace detail
{
inline void checkSynsetSize(const ResolvedSynset& synset, std::size_t max_size)
{
    if (synset.size() < 3)
        throw SynsetSizeError("synset '" + synset.id + "' has " + std::to_string(synset.size()) +
                              " words; rank and centrality need at least 3");
    const auto cap = std::min(max_size, hard_max_synset_size);
    if (synset.size() > cap)
        throw SynsetSizeError("synset '" + synset.id + "' has " + std::to_string(synset.size()) +
                              " words, above the size cap of " + std::to_string(cap));
}

inline void checkFocus(const ResolvedSynset& synset, std::size_t focus)
{
    if (focus >= synset.size())
        throw Error("focus index " + std::to_string(focus) + " out of range for synset '" + synset.id + "'");
}

inline std::string degenerateContext(const ResolvedSynset& synset, std::size_t focus, std::uint32_t mask)
{
    return "synset '" + synset.id + "', focus '" + synset.words[focus].token + "', partition mask " +
           std::to_string(mask);
}

inline PartitionOutcome makeOutcome(const Partition& p, double sim, double sim1, double sim2, double eps)
{
    const double d1 = sim1 - sim;
    const double d2 = sim2 - sim;
    return PartitionOutcome{p, sim, sim1, sim2, sgnEps(d1, eps) + sgnEps(d2, eps), d1 + d2};
}
/// Member vectors widened to double and renormalized there.
inline std::vector< std::vector< double > > unitRows(const ResolvedSynset& synset)
{
    std::vector< std::vector< double > > rows;
    rows.reserve(synset.size());
    for (const auto& w : synset.words)
    {
        const auto v    = w.vector.span();
        const double n  = checkedNorm(dot(v, v));
        auto&        row = rows.emplace_back(v.begin(), v.end());
        for (auto& c : row)
            c /= n;
    }
    return rows;
}
} // namespace detail

/// Outcome of one partition, computed directly from the member vectors.
inline PartitionOutcome partitionOutcome(const ResolvedSynset& synset, std::size_t focus, const Partition& partition,
                                         double eps)
{
    detail::checkSynsetSize(synset, hard_max_synset_size);
    detail::checkFocus(synset, focus);
    const std::size_t m = synset.size() - 1;
    if ((partition.mask & 1u) == 0 || partition.mask >= (std::uint32_t{1} << m) - 1)
        throw Error("partition mask " + std::to_string(partition.mask) + " is not canonical over " +
                    std::to_string(m) + " words");

    const auto [s1_mask, s2_mask] = expandPartition(Partition{focus, partition.mask}, synset.size());
    const auto                                rows = detail::unitRows(synset);
    std::vector< std::span< const double > > s1, s2;
    for (std::size_t i = 0; i < synset.size(); ++i)
    {
        if ((s1_mask >> i) & 1u)
            s1.emplace_back(rows[i]);
        else if ((s2_mask >> i) & 1u)
            s2.emplace_back(rows[i]);
    }
    try
    {
        const double sim = setSimilarity(s1, s2);
        auto         s1v = s1;
        s1v.emplace_back(rows[focus]);
        const double sim1 = setSimilarity(s1v, s2);
        auto         s2v  = s2;
        s2v.emplace_back(rows[focus]);
        const double sim2 = setSimilarity(s1, s2v);
        return detail::makeOutcome(Partition{focus, partition.mask}, sim, sim1, sim2, eps);
    }
    catch (const DegenerateGeometry& e)
    {
        throw DegenerateGeometry(std::string{e.what()} + " (" +
                                 detail::degenerateContext(synset, focus, partition.mask) + ")");
    }
}

/// Precomputed subset sums for a whole synset.
///
/// Works in Gram space: with G the matrix of pairwise inner products, the
/// inner product of two block sums is a sum of G entries. For every mask
/// over the synset the engine keeps the row sums sum_{j in mask} G(i, j),
/// built incrementally from the mask with its lowest bit cleared, and the
/// squared norm of the block sum. A partition then costs O(n) instead of
/// O(n * dim), and the whole synset O(n^2 * dim + n * 2^n).
class SubsetSums
{
public:
    explicit SubsetSums(const ResolvedSynset& synset, std::size_t max_size = hard_max_synset_size)
        : synset_(&synset), n_(synset.size())
    {
        detail::checkSynsetSize(synset, max_size);
        const auto dim = synset.words.front().vector.dimension();
        for (const auto& w : synset.words)
            if (w.vector.dimension() != dim)
                throw DimensionMismatch("synset '" + synset.id + "' mixes vector dimensions");

        // inner products of the rows renormalized in double: stored float rows are unit
        // only to float precision, and identical rows must give entries of exactly 1
        std::vector< double > gram(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                gram[i * n_ + j] = gram[j * n_ + i] =
                    detail::dot(synset.words[i].vector.span(), synset.words[j].vector.span());
        std::vector< double > diag(n_);
        for (std::size_t i = 0; i < n_; ++i)
        {
            detail::checkedNorm(gram[i * n_ + i]);
            diag[i] = gram[i * n_ + i];
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                gram[i * n_ + j] = i == j ? 1.0 : gram[i * n_ + j] / std::sqrt(diag[i] * diag[j]);

        const std::size_t masks = std::size_t{1} << n_;
        cross_.assign(masks * n_, 0.0);
        squared_norm_.assign(masks, 0.0);
        for (std::size_t mask = 1; mask < masks; ++mask)
        {
            const auto low  = static_cast< std::size_t >(std::countr_zero(mask));
            const auto rest = mask & (mask - 1);
            for (std::size_t i = 0; i < n_; ++i)
                cross_[mask * n_ + i] = cross_[rest * n_ + i] + gram[i * n_ + low];
            double q = 0.0;
            for (std::size_t i = 0; i < n_; ++i)
                if ((mask >> i) & 1u)
                    q += cross_[mask * n_ + i];
            squared_norm_[mask] = q;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Same result as partitionOutcome, from the precomputed tables.
    [[nodiscard]] PartitionOutcome outcome(std::size_t focus, std::uint32_t mask, double eps) const
    {
        const auto [a, b]  = expandPartition(Partition{focus, mask}, n_);
        const auto focus_b = std::uint32_t{1} << focus;
        try
        {
            const double ab    = crossDot(a, b);
            const double norm_a = detail::checkedNorm(squared_norm_[a]);
            const double norm_b = detail::checkedNorm(squared_norm_[b]);
            const double sim    = clampUnit(ab / (norm_a * norm_b));
            const double sim1 =
                clampUnit((ab + cross_[b * n_ + focus]) / (detail::checkedNorm(squared_norm_[a | focus_b]) * norm_b));
            const double sim2 =
                clampUnit((ab + cross_[a * n_ + focus]) / (norm_a * detail::checkedNorm(squared_norm_[b | focus_b])));
            return detail::makeOutcome(Partition{focus, mask}, sim, sim1, sim2, eps);
        }
        catch (const DegenerateGeometry& e)
        {
            throw DegenerateGeometry(std::string{e.what()} + " (" + detail::degenerateContext(*synset_, focus, mask) +
                                     ")");
        }
    }

    /// Outcomes for every canonical partition of S \ {focus}, in enumeration order.
    [[nodiscard]] std::vector< PartitionOutcome > outcomes(std::size_t focus, double eps) const
    {
        detail::checkFocus(*synset_, focus);
        std::vector< PartitionOutcome > result;
        result.reserve(partitionCount(n_));
        for (const auto mask : enumeratePartitions(n_ - 1))
            result.push_back(outcome(focus, mask, eps));
        return result;
    }

    [[nodiscard]] WordAttributes attributes(std::size_t focus, double eps) const
    {
        detail::checkFocus(*synset_, focus);
        const auto& word = synset_->words[focus];
        WordAttributes attrs{word.token, word.vector.token, 0, 0.0, true, partitionCount(n_)};
        for (const auto mask : enumeratePartitions(n_ - 1))
        {
            const auto o = outcome(focus, mask, eps);
            attrs.rank_doubled += o.r_doubled;
            attrs.centrality += o.centrality_delta;
            attrs.in_interior = attrs.in_interior && o.sim1 - o.sim > eps && o.sim2 - o.sim > eps;
        }
        return attrs;
    }

    /// Strict improvement on both sides for every split; stops at the first failure.
    [[nodiscard]] bool inInterior(std::size_t focus, double eps) const
    {
        detail::checkFocus(*synset_, focus);
        for (const auto mask : enumeratePartitions(n_ - 1))
        {
            const auto o = outcome(focus, mask, eps);
            if (!(o.sim1 > o.sim + eps && o.sim2 > o.sim + eps))
                return false;
        }
        return true;
    }

private:
    static double clampUnit(double x) noexcept { return std::clamp(x, -1.0, 1.0); }

    [[nodiscard]] double crossDot(std::uint32_t a, std::uint32_t b) const noexcept
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            if ((a >> i) & 1u)
                acc += cross_[b * n_ + i];
        return acc;
    }

    const ResolvedSynset*  synset_;
    std::size_t            n_;
    std::vector< double > cross_;
    std::vector< double > squared_norm_;
};

inline WordAttributes rankAndCentrality(const ResolvedSynset& synset, std::size_t focus,
                                        const GeometryOptions& options = {})
{
    return SubsetSums{synset, options.max_synset_size}.attributes(focus, options.eps);
}

inline bool interiorMembership(const ResolvedSynset& synset, std::size_t focus, const GeometryOptions& options = {})
{
    return SubsetSums{synset, options.max_synset_size}.inInterior(focus, options.eps);
}

/// Centrality on the eps grid: values closer than rounding noise compare equal, so
/// the report order does not depend on summation order.
inline long long centralityKey(double centrality, double eps) noexcept
{
    return eps > 0.0 ? std::llround(std::floor(centrality / eps + 0.5)) : std::llround(centrality * 1e12);
}

/// Deterministic report order: rank desc, centrality (eps grid) desc, token asc.
inline auto reportOrder(double eps)
{
    return [eps](const WordAttributes& lhs, const WordAttributes& rhs) {
        if (lhs.rank_doubled != rhs.rank_doubled)
            return lhs.rank_doubled > rhs.rank_doubled;
        const auto lc = centralityKey(lhs.centrality, eps);
        const auto rc = centralityKey(rhs.centrality, eps);
        if (lc != rc)
            return lc > rc;
        return lhs.token < rhs.token;
    };
}

inline SynsetReport analyzeSynset(const ResolvedSynset& synset, const GeometryOptions& options = {})
{
    const SubsetSums sums{synset, options.max_synset_size};

    SynsetReport report{synset.id, synset.headword, synset.size(), synset.source_size, {}, {}};
    report.words.reserve(synset.size());
    for (std::size_t focus = 0; focus < synset.size(); ++focus)
        report.words.push_back(sums.attributes(focus, options.eps));
    std::sort(report.words.begin(), report.words.end(), reportOrder(options.eps));
    for (const auto& w : report.words)
        if (w.in_interior)
            report.interior.push_back(w.token);
    return report;
}
} // namespace synset

#endif // SYNSET_GEOMETRY_HPP
