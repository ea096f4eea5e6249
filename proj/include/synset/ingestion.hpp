#ifndef SYNSET_INGESTION_HPP
#define SYNSET_INGESTION_HPP

#include "synset/embeddings.hpp"
#include "synset/error.hpp"
#include "synset/geometry.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace synset
{
struct RawSynset
{
    std::string                  id;
    std::optional< std::string > headword;
    std::vector< std::string >   words;
};

enum class SynsetFormat
{
    Tsv,
    Jsonl
};

enum class OovMode
{
    DropWord,
    SkipSynset,
    Fail
};

struct OovPolicy
{
    OovMode                    mode = OovMode::DropWord;
    std::vector< std::string > tag_suffixes; ///< tried in order after the exact token, e.g. "_NOUN"
    bool                       lowercase_fallback = false;
};

enum class ResolutionStatus
{
    Resolved,
    TooSmallAfterFilter,
    Skipped
};

struct DroppedWord
{
    std::string token;
    std::string reason;
};

struct ResolutionOutcome
{
    std::optional< ResolvedSynset > resolved;
    std::vector< DroppedWord >      dropped_words;
    ResolutionStatus                status = ResolutionStatus::Skipped;
    std::size_t                     source_size = 0;
};

inline std::string_view toString(ResolutionStatus status) noexcept
{
    switch (status)
    {
    case ResolutionStatus::Resolved:
        return "resolved";
    case ResolutionStatus::TooSmallAfterFilter:
        return "too-small-after-filter";
    case ResolutionStatus::Skipped:
        return "skipped";
    }
    return "unknown";
}

inline std::string_view toString(OovMode mode) noexcept
{
    switch (mode)
    {
    case OovMode::DropWord:
        return "drop-word";
    case OovMode::SkipSynset:
        return "skip-synset";
    case OovMode::Fail:
        return "fail";
    }
    return "unknown";
}

inline std::optional< OovMode > parseOovMode(std::string_view s) noexcept
{
    if (s == "drop-word")
        return OovMode::DropWord;
    if (s == "skip-synset")
        return OovMode::SkipSynset;
    if (s == "fail")
        return OovMode::Fail;
    return std::nullopt;
}

namespace detail
{
inline void appendUtf8(std::string& out, char32_t cp)
{
    if (cp < 0x80)
        out.push_back(static_cast< char >(cp));
    else if (cp < 0x800)
    {
        out.push_back(static_cast< char >(0xC0 | (cp >> 6)));
        out.push_back(static_cast< char >(0x80 | (cp & 0x3F)));
    }
    else if (cp < 0x10000)
    {
        out.push_back(static_cast< char >(0xE0 | (cp >> 12)));
        out.push_back(static_cast< char >(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast< char >(0x80 | (cp & 0x3F)));
    }
    else
    {
        out.push_back(static_cast< char >(0xF0 | (cp >> 18)));
        out.push_back(static_cast< char >(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast< char >(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast< char >(0x80 | (cp & 0x3F)));
    }
}

inline char32_t lowerCodePoint(char32_t cp) noexcept
{
    if (cp >= U'A' && cp <= U'Z')
        return cp + 0x20;
    if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) // Latin-1 capitals
        return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) // Cyrillic А..Я
        return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) // Ѐ..Џ, including Ё
        return cp + 0x50;
    return cp;
}
} // namespace detail

/// Lowercases ASCII, Latin-1 and basic Cyrillic letters; other bytes pass through unchanged.
inline std::string utf8Lower(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();)
    {
        const auto  lead = static_cast< unsigned char >(s[i]);
        std::size_t len  = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
        if (len == 0 || i + len > s.size())
        {
            out.push_back(s[i++]);
            continue;
        }
        char32_t cp = len == 1 ? lead : lead & (0xFF >> (len + 1));
        bool     ok = true;
        for (std::size_t k = 1; k < len; ++k)
        {
            const auto cont = static_cast< unsigned char >(s[i + k]);
            ok              = ok && (cont & 0xC0) == 0x80;
            cp              = (cp << 6) | (cont & 0x3F);
        }
        if (!ok)
        {
            out.push_back(s[i++]);
            continue;
        }
        detail::appendUtf8(out, detail::lowerCodePoint(cp));
        i += len;
    }
    return out;
}

namespace detail
{
inline std::vector< std::string_view > split(std::string_view s, char sep)
{
    std::vector< std::string_view > parts;
    std::size_t                     start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

inline RawSynset parseTsvLine(std::string_view line, const std::string& name, std::size_t line_no)
{
    const auto fields = split(line, '\t');
    if (fields.size() != 3)
        throw SynsetParseError(name, line_no,
                               "expected 3 tab-separated fields <id> <headword> <words>, found " +
                                   std::to_string(fields.size()));
    RawSynset synset;
    synset.id = std::string{trim(fields[0])};
    if (const auto head = trim(fields[1]); !head.empty())
        synset.headword = std::string{head};
    if (!trim(fields[2]).empty())
        for (const auto word : split(fields[2], '|'))
        {
            const auto w = trim(word);
            if (w.empty())
                throw SynsetParseError(name, line_no, "empty word in word list");
            synset.words.emplace_back(w);
        }
    return synset;
}

inline RawSynset parseJsonLine(std::string_view line, const std::string& name, std::size_t line_no)
{
    nlohmann::json obj;
    try
    {
        obj = nlohmann::json::parse(line);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw SynsetParseError(name, line_no, std::string{"invalid JSON: "} + e.what());
    }
    if (!obj.is_object())
        throw SynsetParseError(name, line_no, "expected a JSON object");
    RawSynset synset;
    const auto id = obj.find("id");
    if (id == obj.end() || !id->is_string())
        throw SynsetParseError(name, line_no, "missing string field 'id'");
    synset.id = id->get< std::string >();
    if (const auto head = obj.find("headword"); head != obj.end() && !head->is_null())
    {
        if (!head->is_string())
            throw SynsetParseError(name, line_no, "field 'headword' must be a string");
        synset.headword = head->get< std::string >();
    }
    const auto words = obj.find("words");
    if (words == obj.end() || !words->is_array())
        throw SynsetParseError(name, line_no, "missing array field 'words'");
    for (const auto& w : *words)
    {
        if (!w.is_string() || w.get_ref< const std::string& >().empty())
            throw SynsetParseError(name, line_no, "every entry of 'words' must be a nonempty string");
        synset.words.push_back(w.get< std::string >());
    }
    return synset;
}
} // namespace detail

/// Parses one synset per line. Blank lines and lines starting with '#' are ignored.
/// TSV: `<id>\t<headword>\t<word1>|<word2>|...`; JSONL: {"id", "headword"?, "words": [...]}.
inline std::vector< RawSynset > parseSynsets(std::istream& in, SynsetFormat format, const std::string& name = "<input>")
{
    std::vector< RawSynset >          synsets;
    std::unordered_set< std::string > ids;
    std::string                       line;
    std::size_t                       line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF"))
            view.remove_prefix(3);
        if (!view.empty() && view.back() == '\r')
            view.remove_suffix(1);
        if (detail::trim(view).empty() || detail::trim(view).front() == '#')
            continue;

        auto synset = format == SynsetFormat::Tsv ? detail::parseTsvLine(view, name, line_no)
                                                  : detail::parseJsonLine(view, name, line_no);
        if (synset.id.empty())
            throw SynsetParseError(name, line_no, "empty synset id");
        if (synset.words.empty())
            throw SynsetParseError(name, line_no, "synset '" + synset.id + "' has an empty word list");
        std::unordered_set< std::string > seen;
        for (const auto& w : synset.words)
            if (!seen.insert(w).second)
                throw SynsetParseError(name, line_no, "duplicate word '" + w + "' in synset '" + synset.id + "'");
        if (!ids.insert(synset.id).second)
            throw SynsetParseError(name, line_no, "duplicate synset id '" + synset.id + "'");
        synsets.push_back(std::move(synset));
    }
    return synsets;
}

inline std::vector< RawSynset > parseSynsets(const std::filesystem::path& path, SynsetFormat format)
{
    std::ifstream in{path};
    if (!in)
        throw Error("cannot open synset file '" + path.string() + "'");
    return parseSynsets(in, format, path.string());
}

/// Candidate model keys for `token`, in lookup order: exact, token + each suffix,
/// then the same for the lowercased token when enabled and different.
inline std::vector< std::string > lookupCandidates(std::string_view token, const OovPolicy& policy)
{
    std::vector< std::string > keys;
    const auto                 add_forms = [&](const std::string& base) {
        keys.push_back(base);
        for (const auto& suffix : policy.tag_suffixes)
            keys.push_back(base + suffix);
    };
    add_forms(std::string{token});
    if (policy.lowercase_fallback)
        if (auto lower = utf8Lower(token); lower != token)
            add_forms(lower);
    return keys;
}

inline void validate(const OovPolicy& policy)
{
    std::set< std::string > seen;
    for (const auto& s : policy.tag_suffixes)
        if (!seen.insert(s).second)
            throw Error("duplicate tag suffix '" + s + "'");
}

/// Resolves every word of `synset` against `model`; the first candidate key present wins.
inline ResolutionOutcome resolve(const RawSynset& synset, const EmbeddingModel& model, const OovPolicy& policy)
{
    validate(policy);
    ResolutionOutcome outcome;
    outcome.source_size = synset.words.size();

    ResolvedSynset resolved{synset.id, synset.headword, {}, synset.words.size()};
    for (const auto& token : synset.words)
    {
        const auto               candidates = lookupCandidates(token, policy);
        std::optional< WordVector > hit;
        for (const auto& key : candidates)
            if ((hit = model.vector(key)))
                break;
        if (hit)
        {
            resolved.words.push_back(ResolvedWord{token, std::move(*hit)});
            continue;
        }
        std::string tried;
        for (const auto& key : candidates)
            tried += (tried.empty() ? "" : ", ") + key;
        if (policy.mode == OovMode::Fail)
            throw ResolutionError("synset '" + synset.id + "': word '" + token + "' is out of vocabulary (tried " +
                                  tried + ")");
        outcome.dropped_words.push_back(DroppedWord{token, "out of vocabulary (tried " + tried + ")"});
    }

    if (policy.mode == OovMode::SkipSynset && !outcome.dropped_words.empty())
        outcome.status = ResolutionStatus::Skipped;
    else if (resolved.words.size() < 3)
        outcome.status = ResolutionStatus::TooSmallAfterFilter;
    else
    {
        outcome.status   = ResolutionStatus::Resolved;
        outcome.resolved = std::move(resolved);
    }
    return outcome;
}
} // namespace synset

#endif // SYNSET_INGESTION_HPP
