#ifndef SYNSET_EMBEDDINGS_HPP
#define SYNSET_EMBEDDINGS_HPP

// Pretrained word2vec-format models (text and binary) and the similarity
// primitives every synset computation is built from. Rows are normalized to
// unit length at load time, so cosine similarity is a plain dot product.

#include "synset/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace synset
{
/// Sums whose norm falls at or below this are treated as cancelled out.
inline constexpr double degenerate_norm = 1e-12;

struct WordVector
{
    std::string        token;
    std::vector< float > components;

    [[nodiscard]] std::span< const float > span() const noexcept { return components; }
    [[nodiscard]] std::size_t              dimension() const noexcept { return components.size(); }
};

/// Immutable vocabulary plus a row-major vocab_size x dimension matrix of unit rows.
class EmbeddingModel
{
public:
    /// Validates and normalizes `raw` (row-major, words.size() x dimension).
    /// Throws ModelFormatError on duplicate tokens, non-finite or zero-norm rows.
    static EmbeddingModel fromRows(std::vector< std::string > words, std::vector< float > raw, std::size_t dimension)
    {
        if (dimension == 0)
            throw ModelFormatError("dimension must be positive");
        if (words.empty())
            throw ModelFormatError("vocabulary must not be empty");
        if (raw.size() != words.size() * dimension)
            throw ModelFormatError("matrix size " + std::to_string(raw.size()) + " does not match " +
                                   std::to_string(words.size()) + " x " + std::to_string(dimension));

        EmbeddingModel model;
        model.dimension_ = dimension;
        model.index_.reserve(words.size());
        for (std::size_t row = 0; row < words.size(); ++row)
        {
            if (!model.index_.emplace(words[row], row).second)
                throw ModelFormatError("duplicate token '" + words[row] + "'");
            normalizeRow(std::span< float >{raw}.subspan(row * dimension, dimension), words[row]);
        }
        model.words_   = std::move(words);
        model.vectors_ = std::move(raw);
        return model;
    }

    [[nodiscard]] std::size_t                        dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t                        size() const noexcept { return words_.size(); }
    [[nodiscard]] const std::vector< std::string >& words() const noexcept { return words_; }

    [[nodiscard]] std::span< const float > row(std::size_t i) const
    {
        return std::span< const float >{vectors_}.subspan(i * dimension_, dimension_);
    }

    [[nodiscard]] std::optional< std::size_t > find(std::string_view token) const
    {
        // heterogeneous lookup for unordered_map needs C++20 transparent hashing support in libstdc++ 12+
        const auto it = index_.find(std::string{token});
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] bool contains(std::string_view token) const { return find(token).has_value(); }

    /// Normalized row for `token`, or nullopt when it is out of vocabulary. Case-sensitive.
    [[nodiscard]] std::optional< WordVector > vector(std::string_view token) const
    {
        const auto row_index = find(token);
        if (!row_index)
            return std::nullopt;
        const auto r = row(*row_index);
        return WordVector{std::string{token}, std::vector< float >(r.begin(), r.end())};
    }

private:
    EmbeddingModel() = default;

    static void normalizeRow(std::span< float > row, const std::string& token)
    {
        double sum_sq = 0.0;
        for (const float c : row)
        {
            if (!std::isfinite(c))
                throw ModelFormatError("non-finite component in vector for '" + token + "'");
            sum_sq += static_cast< double >(c) * c;
        }
        const double norm = std::sqrt(sum_sq);
        if (!(norm > 0.0))
            throw ModelFormatError("zero-norm vector for '" + token + "' cannot be normalized");
        for (float& c : row)
            c = static_cast< float >(c / norm);
    }

    std::size_t                                    dimension_ = 0;
    std::vector< std::string >                     words_;
    std::vector< float >                           vectors_;
    std::unordered_map< std::string, std::size_t > index_;
};

namespace detail
{
inline std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n";
    const auto                 b  = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template < typename T >
bool parseNumber(std::string_view s, T& out)
{
    const auto* end          = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

struct ModelHeader
{
    std::size_t vocab_size;
    std::size_t dimension;
};

inline ModelHeader parseHeader(std::string_view line, const std::string& path)
{
    line           = trim(line);
    const auto sep = line.find(' ');
    ModelHeader header{};
    if (line.empty() || sep == std::string_view::npos || !parseNumber(line.substr(0, sep), header.vocab_size) ||
        !parseNumber(trim(line.substr(sep + 1)), header.dimension))
        throw ModelFormatError(path + ": malformed header, expected '<vocab_size> <dimension>'");
    if (header.vocab_size == 0 || header.dimension == 0)
        throw ModelFormatError(path + ": header declares an empty model");
    return header;
}

inline std::ifstream openForRead(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in{path, mode};
    if (!in)
        throw ModelFormatError("cannot open model file '" + path.string() + "'");
    return in;
}

inline float fromLittleEndian(std::uint32_t bits)
{
    if constexpr (std::endian::native == std::endian::big)
        bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
    return std::bit_cast< float >(bits);
}

inline std::uint32_t toLittleEndian(float value)
{
    auto bits = std::bit_cast< std::uint32_t >(value);
    if constexpr (std::endian::native == std::endian::big)
        bits = ((bits & 0xFFu) << 24) | ((bits & 0xFF00u) << 8) | ((bits >> 8) & 0xFF00u) | (bits >> 24);
    return bits;
}
} // namespace detail

/// Loads the word2vec text format: header `<vocab> <dim>`, then `<token> <c1> ... <c_dim>` per line.
inline EmbeddingModel loadTextModel(const std::filesystem::path& path)
{
    auto        in   = detail::openForRead(path);
    const auto  name = path.string();
    std::string line;
    if (!std::getline(in, line))
        throw ModelFormatError(name + ": malformed header, file is empty");
    const auto header = detail::parseHeader(line, name);

    std::vector< std::string > words;
    std::vector< float >       raw;
    words.reserve(header.vocab_size);
    raw.reserve(header.vocab_size * header.dimension);

    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto entry = detail::trim(line);
        if (entry.empty())
            continue;
        if (words.size() == header.vocab_size)
            throw ModelFormatError(name + ":" + std::to_string(line_no) + ": more entries than the header declares");

        auto       pos = entry.find(' ');
        const auto tok = entry.substr(0, pos);
        std::size_t count = 0;
        while (pos != std::string_view::npos)
        {
            const auto start = entry.find_first_not_of(' ', pos);
            if (start == std::string_view::npos)
                break;
            pos              = entry.find(' ', start);
            const auto field = entry.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
            float      value = 0.0f;
            if (!detail::parseNumber(field, value))
                throw ModelFormatError(name + ":" + std::to_string(line_no) + ": bad component '" + std::string{field} +
                                       "'");
            if (!std::isfinite(value))
                throw ModelFormatError(name + ":" + std::to_string(line_no) + ": non-finite component");
            raw.push_back(value);
            ++count;
        }
        if (count != header.dimension)
            throw ModelFormatError(name + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(header.dimension) + " components, found " + std::to_string(count));
        words.emplace_back(tok);
    }
    if (words.size() != header.vocab_size)
        throw ModelFormatError(name + ": truncated, header declares " + std::to_string(header.vocab_size) +
                               " entries but file has " + std::to_string(words.size()));
    try
    {
        return EmbeddingModel::fromRows(std::move(words), std::move(raw), header.dimension);
    }
    catch (const ModelFormatError& e)
    {
        throw ModelFormatError(name + ": " + e.what());
    }
}

/// Loads the word2vec binary format: ASCII header line, then per entry the token,
/// one 0x20 byte, `dim` little-endian float32 values and an optional 0x0A.
inline EmbeddingModel loadBinaryModel(const std::filesystem::path& path)
{
    auto        in   = detail::openForRead(path, std::ios::in | std::ios::binary);
    const auto  name = path.string();
    std::string header_line;
    if (!std::getline(in, header_line))
        throw ModelFormatError(name + ": malformed header, file is empty");
    const auto header = detail::parseHeader(header_line, name);

    std::vector< std::string > words;
    std::vector< float >       raw(header.vocab_size * header.dimension);
    words.reserve(header.vocab_size);
    std::vector< std::uint32_t > buffer(header.dimension);

    const auto truncated = [&] {
        return ModelFormatError(name + ": truncated, header declares " + std::to_string(header.vocab_size) +
                                " entries but only " + std::to_string(words.size()) + " are complete");
    };

    for (std::size_t row = 0; row < header.vocab_size; ++row)
    {
        std::string token;
        int         ch = in.get();
        while (ch == '\n' || ch == '\r')
            ch = in.get();
        while (ch != EOF && ch != ' ')
        {
            token.push_back(static_cast< char >(ch));
            ch = in.get();
        }
        if (ch == EOF)
            throw truncated();
        if (token.empty())
            throw ModelFormatError(name + ": empty token at entry " + std::to_string(row + 1));

        in.read(reinterpret_cast< char* >(buffer.data()), static_cast< std::streamsize >(buffer.size() * sizeof(float)));
        if (in.gcount() != static_cast< std::streamsize >(buffer.size() * sizeof(float)))
            throw truncated();
        std::transform(buffer.begin(), buffer.end(), raw.begin() + static_cast< std::ptrdiff_t >(row * header.dimension),
                       detail::fromLittleEndian);
        words.push_back(std::move(token));
    }
    try
    {
        return EmbeddingModel::fromRows(std::move(words), std::move(raw), header.dimension);
    }
    catch (const ModelFormatError& e)
    {
        throw ModelFormatError(name + ": " + e.what());
    }
}

/// Picks the reader by extension: `.bin` is binary, anything else text.
inline EmbeddingModel loadModel(const std::filesystem::path& path)
{
    return path.extension() == ".bin" ? loadBinaryModel(path) : loadTextModel(path);
}

/// Writes components with 9 significant digits, which round-trips float32 exactly.
inline void writeTextModel(const EmbeddingModel& model, const std::filesystem::path& path)
{
    std::ofstream out{path};
    if (!out)
        throw ModelFormatError("cannot open '" + path.string() + "' for writing");
    out << model.size() << ' ' << model.dimension() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < model.size(); ++i)
    {
        out << model.words()[i];
        for (const float c : model.row(i))
        {
            std::snprintf(buf, sizeof buf, " %.9g", static_cast< double >(c));
            out << buf;
        }
        out << '\n';
    }
}

inline void writeBinaryModel(const EmbeddingModel& model, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::out | std::ios::binary};
    if (!out)
        throw ModelFormatError("cannot open '" + path.string() + "' for writing");
    out << model.size() << ' ' << model.dimension() << '\n';
    for (std::size_t i = 0; i < model.size(); ++i)
    {
        out << model.words()[i] << ' ';
        for (const float c : model.row(i))
        {
            const auto bits = detail::toLittleEndian(c);
            out.write(reinterpret_cast< const char* >(&bits), sizeof bits);
        }
        out << '\n';
    }
}

namespace detail
{
inline std::span< const float > componentsOf(std::span< const float > v) noexcept
{
    return v;
}
inline std::span< const float > componentsOf(const WordVector& v) noexcept
{
    return v.span();
}
inline std::span< const double > componentsOf(std::span< const double > v) noexcept
{
    return v;
}
inline std::span< const double > componentsOf(const std::vector< double >& v) noexcept
{
    return v;
}

template < typename A, typename B >
double dot(std::span< A > a, std::span< B > b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast< double >(a[i]) * static_cast< double >(b[i]);
    return acc;
}
} // namespace detail

namespace detail
{
inline std::span< const float > componentsOf(const std::vector< float >& v) noexcept
{
    return v;
}

template < typename Range >
std::vector< double > sumOf(const Range& vectors)
{
    auto it = std::begin(vectors);
    if (it == std::end(vectors))
        throw DegenerateGeometry("empty vector set");
    std::vector< double > sum(componentsOf(*it).size(), 0.0);
    for (; it != std::end(vectors); ++it)
    {
        const auto v = componentsOf(*it);
        if (v.size() != sum.size())
            throw DimensionMismatch("dimension mismatch: " + std::to_string(v.size()) + " vs " +
                                    std::to_string(sum.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            sum[i] += v[i];
    }
    return sum;
}

inline double checkedNorm(double squared)
{
    const double norm = std::sqrt(squared);
    if (!(norm > degenerate_norm))
        throw DegenerateGeometry("vectors cancel out: sum norm " + std::to_string(norm));
    return norm;
}
} // namespace detail

/// (a, b) / (|a| |b|), clamped to [-1, 1]. For unit rows this is the bare inner product.
template < typename A, typename B >
double cosine(const A& a, const B& b)
{
    const auto va = detail::componentsOf(a);
    const auto vb = detail::componentsOf(b);
    const double ab = detail::dot(va, vb);
    const double na = detail::checkedNorm(detail::dot(va, va));
    const double nb = detail::checkedNorm(detail::dot(vb, vb));
    return std::clamp(ab / (na * nb), -1.0, 1.0);
}

/// Unit vector along the sum of `vectors`. Throws DegenerateGeometry if the sum cancels out.
template < typename Range >
std::vector< double > normalizedMean(const Range& vectors)
{
    auto       sum  = detail::sumOf(vectors);
    const auto norm = detail::checkedNorm(detail::dot(std::span< const double >{sum}, std::span< const double >{sum}));
    for (double& c : sum)
        c /= norm;
    return sum;
}

/// Similarity of two word sets: the cosine between their normalized means, computed
/// from the raw sums so that singleton sets reduce exactly to `cosine`.
template < typename RangeA, typename RangeB >
double setSimilarity(const RangeA& a, const RangeB& b)
{
    return cosine(detail::sumOf(a), detail::sumOf(b));
}
} // namespace synset

#endif // SYNSET_EMBEDDINGS_HPP
