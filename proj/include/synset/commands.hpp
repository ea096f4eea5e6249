#ifndef SYNSET_COMMANDS_HPP
#define SYNSET_COMMANDS_HPP

// The analyze / partitions / compare / audit commands. Each takes a RunConfig
// and writes its report to `out`, warnings and diagnostics to `err`, and
// returns the process exit status: 0 success, 1 fatal error, 2 nothing analyzed.

#include "synset/embeddings.hpp"
#include "synset/error.hpp"
#include "synset/geometry.hpp"
#include "synset/ingestion.hpp"
#include "synset/render.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace synset
{
enum class OutputFormat
{
    Table,
    Csv,
    Json
};

enum class Command
{
    Analyze,
    Partitions,
    Compare,
    Audit
};

namespace exit_code
{
inline constexpr int success        = 0;
inline constexpr int fatal          = 1;
inline constexpr int nothing_done   = 2;
} // namespace exit_code

struct RunConfig
{
    std::vector< std::filesystem::path > models;
    std::filesystem::path                synsets;
    SynsetFormat                         synset_format = SynsetFormat::Tsv;
    GeometryOptions                      geometry;
    OovPolicy                            oov;
    OutputFormat                         output = OutputFormat::Table;
    std::size_t                          jobs   = 1;
    std::string                          synset_id;  ///< partitions only
    std::string                          focus_word; ///< partitions only
};

inline void validate(const RunConfig& config)
{
    if (!(config.geometry.eps > 0.0))
        throw Error("--eps must be positive");
    if (config.geometry.max_synset_size < 3)
        throw Error("--max-synset-size must be at least 3");
    if (config.geometry.max_synset_size > hard_max_synset_size)
        throw Error("--max-synset-size must not exceed " + std::to_string(hard_max_synset_size));
    validate(config.oov);
}

/// Result of pushing one raw synset through resolution and analysis.
struct SynsetResult
{
    std::string                  id;
    std::optional< std::string > headword;
    ResolutionOutcome            resolution;
    std::optional< SynsetReport > report;
    std::string                  status; ///< resolution status, or "degenerate" / "too-large" when analysis refused
    std::string                  reason; ///< empty when analyzed
};

namespace detail
{
inline SynsetResult processSynset(const RawSynset& raw, const EmbeddingModel& model, const RunConfig& config)
{
    SynsetResult result{raw.id, raw.headword, resolve(raw, model, config.oov), std::nullopt, "", ""};
    result.status = std::string{toString(result.resolution.status)};
    switch (result.resolution.status)
    {
    case ResolutionStatus::Skipped:
        result.reason = std::to_string(result.resolution.dropped_words.size()) +
                        " word(s) out of vocabulary under skip-synset";
        return result;
    case ResolutionStatus::TooSmallAfterFilter:
        result.reason = std::to_string(result.resolution.source_size - result.resolution.dropped_words.size()) +
                        " of " + std::to_string(result.resolution.source_size) + " words resolved, need at least 3";
        return result;
    case ResolutionStatus::Resolved:
        break;
    }
    try
    {
        result.report = analyzeSynset(*result.resolution.resolved, config.geometry);
    }
    catch (const SynsetSizeError& e)
    {
        result.status = "too-large";
        result.reason = e.what();
    }
    catch (const DegenerateGeometry& e)
    {
        result.status = "degenerate";
        result.reason = e.what();
    }
    return result;
}

/// Processes synsets on up to `jobs` threads; results keep input order.
inline std::vector< SynsetResult > processAll(const std::vector< RawSynset >& synsets, const EmbeddingModel& model,
                                              const RunConfig& config)
{
    std::vector< SynsetResult >       results(synsets.size());
    std::vector< std::exception_ptr > errors(synsets.size());
    std::atomic< std::size_t >        next{0};
    const auto                        worker = [&] {
        for (std::size_t i = next++; i < synsets.size(); i = next++)
        {
            try
            {
                results[i] = processSynset(synsets[i], model, config);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = std::clamp< std::size_t >(config.jobs, 1, std::max< std::size_t >(synsets.size(), 1));
    if (threads == 1)
        worker();
    else
    {
        std::vector< std::jthread > pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

inline void warnDropped(const std::vector< SynsetResult >& results, std::ostream& err, std::string_view label = "")
{
    for (const auto& r : results)
    {
        for (const auto& d : r.resolution.dropped_words)
            err << "warning: " << label << "synset '" << r.id << "': dropped '" << d.token << "': " << d.reason
                << '\n';
        if (!r.report)
            err << "warning: " << label << "synset '" << r.id << "' not analyzed (" << r.status << "): " << r.reason
                << '\n';
    }
}

inline std::string jsonHeadword(const std::optional< std::string >& headword)
{
    return headword ? render::jsonString(*headword) : "null";
}

inline std::string jsonDropped(const std::vector< DroppedWord >& dropped)
{
    std::string s = "[";
    for (std::size_t i = 0; i < dropped.size(); ++i)
        s += std::string{i ? ", " : ""} + "{\"token\": " + render::jsonString(dropped[i].token) +
             ", \"reason\": " + render::jsonString(dropped[i].reason) + "}";
    return s + "]";
}

inline std::string jsonWord(const WordAttributes& w)
{
    return "{\"token\": " + render::jsonString(w.token) + ", \"model_key\": " + render::jsonString(w.model_key) +
           ", \"rank\": " + render::rank(w.rank_doubled) + ", \"centrality\": " + render::centrality(w.centrality) +
           ", \"interior\": " + (w.in_interior ? "true" : "false") + "}";
}

inline std::vector< std::string > orderedTokens(const SynsetReport& report)
{
    std::vector< std::string > tokens;
    for (const auto& w : report.words)
        tokens.push_back(w.token);
    return tokens;
}

inline void writeSkippedJson(std::ostream& out, const std::vector< SynsetResult >& results)
{
    out << "  \"skipped\": [";
    bool first = true;
    for (const auto& r : results)
    {
        if (r.report)
            continue;
        out << (first ? "\n" : ",\n") << "    {\"id\": " << render::jsonString(r.id) << ", \"status\": "
            << render::jsonString(r.status) << ", \"reason\": " << render::jsonString(r.reason)
            << ", \"dropped\": " << jsonDropped(r.resolution.dropped_words) << "}";
        first = false;
    }
    out << (first ? "]" : "\n  ]");
}

inline std::vector< RawSynset > loadSynsets(const RunConfig& config)
{
    return parseSynsets(config.synsets, config.synset_format);
}

inline const EmbeddingModel& requireModels(const RunConfig& config, std::size_t count,
                                           std::vector< EmbeddingModel >& storage)
{
    if (config.models.size() != count)
        throw Error("this command needs exactly " + std::to_string(count) + " --model argument(s), got " +
                    std::to_string(config.models.size()));
    for (const auto& path : config.models)
        storage.push_back(loadModel(path));
    return storage.front();
}
} // namespace detail

// ---------------------------------------------------------------------------
// analyze

inline void writeAnalyzeJson(std::ostream& out, const std::vector< SynsetResult >& results)
{
    std::size_t analyzed = 0;
    out << "{\n  \"command\": \"analyze\",\n  \"synsets\": [";
    for (const auto& r : results)
    {
        if (!r.report)
            continue;
        const auto& rep = *r.report;
        out << (analyzed ? ",\n" : "\n") << "    {\n"
            << "      \"id\": " << render::jsonString(rep.id) << ",\n"
            << "      \"headword\": " << detail::jsonHeadword(rep.headword) << ",\n"
            << "      \"n\": " << rep.n << ",\n"
            << "      \"source_size\": " << rep.source_size << ",\n"
            << "      \"partition_count\": " << partitionCount(rep.n) << ",\n"
            << "      \"interior\": " << render::jsonStringArray(rep.interior) << ",\n"
            << "      \"words\": [\n";
        for (std::size_t i = 0; i < rep.words.size(); ++i)
            out << "        " << detail::jsonWord(rep.words[i]) << (i + 1 < rep.words.size() ? ",\n" : "\n");
        out << "      ],\n"
            << "      \"dropped\": " << detail::jsonDropped(r.resolution.dropped_words) << "\n"
            << "    }";
        ++analyzed;
    }
    out << (analyzed ? "\n  ],\n" : "],\n");
    detail::writeSkippedJson(out, results);
    out << ",\n  \"summary\": {\"total\": " << results.size() << ", \"analyzed\": " << analyzed
        << ", \"skipped\": " << results.size() - analyzed << "}\n}\n";
}

inline void writeAnalyzeCsv(std::ostream& out, const std::vector< SynsetResult >& results)
{
    out << "synset_id,headword,n,partition_count,token,model_key,rank,centrality,interior\n";
    for (const auto& r : results)
    {
        if (!r.report)
            continue;
        const auto& rep = *r.report;
        for (const auto& w : rep.words)
            out << render::csvField(rep.id) << ',' << render::csvField(rep.headword.value_or("")) << ',' << rep.n
                << ',' << partitionCount(rep.n) << ',' << render::csvField(w.token) << ','
                << render::csvField(w.model_key) << ',' << render::rank(w.rank_doubled) << ','
                << render::centrality(w.centrality) << ',' << (w.in_interior ? "true" : "false") << '\n';
    }
}

inline void writeAnalyzeTable(std::ostream& out, const std::vector< SynsetResult >& results)
{
    for (const auto& r : results)
    {
        if (!r.report)
            continue;
        const auto& rep = *r.report;
        out << "synset " << rep.id;
        if (rep.headword)
            out << " (" << *rep.headword << ")";
        out << "  n=" << rep.n << "  partitions per word=" << partitionCount(rep.n) << "  IntS={"
            << render::join(rep.interior, ", ") << "}\n";
        render::Table table{{"token", "model key", "rank", "centrality", "IntS"}};
        for (const auto& w : rep.words)
            table.addRow({w.token, w.model_key, render::rank(w.rank_doubled), render::centrality(w.centrality),
                          w.in_interior ? "+" : "-"});
        table.print(out, "  ");
        out << '\n';
    }
    std::size_t analyzed = 0;
    for (const auto& r : results)
    {
        if (r.report)
            ++analyzed;
        else
            out << "skipped " << r.id << " (" << r.status << "): " << r.reason << '\n';
    }
    out << "total " << results.size() << ", analyzed " << analyzed << ", skipped " << results.size() - analyzed
        << '\n';
}

inline void writeAnalyze(std::ostream& out, const std::vector< SynsetResult >& results, OutputFormat format)
{
    switch (format)
    {
    case OutputFormat::Json:
        return writeAnalyzeJson(out, results);
    case OutputFormat::Csv:
        return writeAnalyzeCsv(out, results);
    case OutputFormat::Table:
        return writeAnalyzeTable(out, results);
    }
}

inline int cmdAnalyze(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    validate(config);
    std::vector< EmbeddingModel > models;
    const auto&                   model   = detail::requireModels(config, 1, models);
    const auto                    results = detail::processAll(detail::loadSynsets(config), model, config);
    detail::warnDropped(results, err);
    writeAnalyze(out, results, config.output);
    const bool any = std::any_of(results.begin(), results.end(), [](const auto& r) { return r.report.has_value(); });
    if (!any)
    {
        err << "no synsets analyzed\n";
        return exit_code::nothing_done;
    }
    return exit_code::success;
}

// ---------------------------------------------------------------------------
// partitions

struct PartitionRow
{
    std::vector< std::string > s1;
    std::vector< std::string > s2;
    PartitionOutcome           outcome;
};

struct PartitionDump
{
    std::string                 synset_id;
    std::string                 focus;
    std::string                 model_key;
    std::size_t                 n = 0;
    std::vector< PartitionRow > rows;
    long                        rank_doubled = 0; ///< sum of the rows
    double                      centrality   = 0.0;
    bool                        in_interior  = true;
};

/// Per-partition detail for one word; totals are summed from the rows themselves.
inline PartitionDump buildPartitionDump(const ResolvedSynset& synset, std::string_view focus_word,
                                        const GeometryOptions& options)
{
    const auto it = std::find_if(synset.words.begin(), synset.words.end(), [&](const ResolvedWord& w) {
        return w.token == focus_word || w.vector.token == focus_word;
    });
    if (it == synset.words.end())
        throw Error("word '" + std::string{focus_word} + "' is not in resolved synset '" + synset.id + "'");
    const auto focus = static_cast< std::size_t >(it - synset.words.begin());

    PartitionDump    dump{synset.id, it->token, it->vector.token, synset.size(), {}, 0, 0.0, true};
    const SubsetSums sums{synset, options.max_synset_size};
    for (const auto& o : sums.outcomes(focus, options.eps))
    {
        const auto [s1, s2] = expandPartition(o.partition, synset.size());
        PartitionRow row{{}, {}, o};
        for (std::size_t i = 0; i < synset.size(); ++i)
        {
            if ((s1 >> i) & 1u)
                row.s1.push_back(synset.words[i].token);
            else if ((s2 >> i) & 1u)
                row.s2.push_back(synset.words[i].token);
        }
        dump.rank_doubled += o.r_doubled;
        dump.centrality += o.centrality_delta;
        dump.in_interior = dump.in_interior && o.sim1 - o.sim > options.eps && o.sim2 - o.sim > options.eps;
        dump.rows.push_back(std::move(row));
    }
    return dump;
}

inline void writePartitions(std::ostream& out, const PartitionDump& dump, OutputFormat format)
{
    switch (format)
    {
    case OutputFormat::Json:
    {
        out << "{\n  \"command\": \"partitions\",\n  \"synset\": " << render::jsonString(dump.synset_id)
            << ",\n  \"focus\": " << render::jsonString(dump.focus)
            << ",\n  \"model_key\": " << render::jsonString(dump.model_key) << ",\n  \"n\": " << dump.n
            << ",\n  \"partitions\": [\n";
        for (std::size_t i = 0; i < dump.rows.size(); ++i)
        {
            const auto& row = dump.rows[i];
            const auto& o   = row.outcome;
            out << "    {\"index\": " << i + 1 << ", \"mask\": " << o.partition.mask
                << ", \"s1\": " << render::jsonStringArray(row.s1) << ", \"s2\": " << render::jsonStringArray(row.s2)
                << ", \"sim\": " << render::similarity(o.sim) << ", \"sim1\": " << render::similarity(o.sim1)
                << ", \"sim2\": " << render::similarity(o.sim2) << ", \"rank\": " << render::rank(o.r_doubled)
                << ", \"centrality\": " << render::centrality(o.centrality_delta) << "}"
                << (i + 1 < dump.rows.size() ? ",\n" : "\n");
        }
        out << "  ],\n  \"totals\": {\"partition_count\": " << dump.rows.size()
            << ", \"rank\": " << render::rank(dump.rank_doubled)
            << ", \"centrality\": " << render::centrality(dump.centrality)
            << ", \"interior\": " << (dump.in_interior ? "true" : "false") << "}\n}\n";
        return;
    }
    case OutputFormat::Csv:
        out << "index,s1,s2,sim,sim1,sim2,rank,centrality\n";
        for (std::size_t i = 0; i < dump.rows.size(); ++i)
        {
            const auto& row = dump.rows[i];
            const auto& o   = row.outcome;
            out << i + 1 << ',' << render::csvField(render::join(row.s1, " ")) << ','
                << render::csvField(render::join(row.s2, " ")) << ',' << render::similarity(o.sim) << ','
                << render::similarity(o.sim1) << ',' << render::similarity(o.sim2) << ','
                << render::rank(o.r_doubled) << ',' << render::centrality(o.centrality_delta) << '\n';
        }
        out << "total,,,,,," << render::rank(dump.rank_doubled) << ',' << render::centrality(dump.centrality) << '\n';
        return;
    case OutputFormat::Table:
    {
        out << "synset " << dump.synset_id << ", word " << dump.focus << " (" << dump.model_key << "), "
            << dump.rows.size() << " partitions of the remaining " << dump.n - 1 << " words\n";
        render::Table table{{"#", "S1", "S2", "sim", "sim1", "sim2", "d rank", "d centrality"}};
        for (std::size_t i = 0; i < dump.rows.size(); ++i)
        {
            const auto& row = dump.rows[i];
            const auto& o   = row.outcome;
            table.addRow({std::to_string(i + 1), "{" + render::join(row.s1, ", ") + "}",
                          "{" + render::join(row.s2, ", ") + "}", render::similarity(o.sim),
                          render::similarity(o.sim1), render::similarity(o.sim2), render::rank(o.r_doubled),
                          render::centrality(o.centrality_delta)});
        }
        table.addRow({"total", "", "", "", "", "", render::rank(dump.rank_doubled), render::centrality(dump.centrality)});
        table.print(out, "  ");
        out << "  interior: " << (dump.in_interior ? "yes" : "no") << '\n';
        return;
    }
    }
}

inline int cmdPartitions(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    validate(config);
    if (config.synset_id.empty() || config.focus_word.empty())
        throw Error("partitions needs --synset-id and --word");
    std::vector< EmbeddingModel > models;
    const auto&                   model   = detail::requireModels(config, 1, models);
    const auto                    synsets = detail::loadSynsets(config);
    const auto raw = std::find_if(synsets.begin(), synsets.end(), [&](const auto& s) { return s.id == config.synset_id; });
    if (raw == synsets.end())
        throw Error("unknown synset id '" + config.synset_id + "'");
    const auto outcome = resolve(*raw, model, config.oov);
    for (const auto& d : outcome.dropped_words)
        err << "warning: synset '" << raw->id << "': dropped '" << d.token << "': " << d.reason << '\n';
    if (!outcome.resolved)
        throw Error("synset '" + raw->id + "' did not resolve (" + std::string{toString(outcome.status)} + ")");
    writePartitions(out, buildPartitionDump(*outcome.resolved, config.focus_word, config.geometry), config.output);
    return exit_code::success;
}

// ---------------------------------------------------------------------------
// compare

struct ModelColumn
{
    std::string                  status;
    std::size_t                  n = 0;
    std::optional< std::size_t > interior_size; ///< absent when the synset was not analyzed
    std::vector< std::string >   interior;
    std::vector< std::string >   ordered_words;
};

struct ComparisonRow
{
    std::string                  id;
    std::optional< std::string > headword;
    ModelColumn                  first;
    ModelColumn                  second;

    [[nodiscard]] bool differs() const noexcept { return first.interior_size != second.interior_size; }
};

inline ModelColumn toColumn(const SynsetResult& r)
{
    ModelColumn col{r.status, 0, std::nullopt, {}, {}};
    if (r.resolution.resolved)
        col.n = r.resolution.resolved->size();
    if (r.report)
    {
        col.interior_size = r.report->interior.size();
        col.interior      = r.report->interior;
        col.ordered_words = detail::orderedTokens(*r.report);
    }
    return col;
}

inline std::vector< ComparisonRow > compareResults(const std::vector< SynsetResult >& a,
                                                   const std::vector< SynsetResult >& b)
{
    std::vector< ComparisonRow > rows;
    for (std::size_t i = 0; i < a.size(); ++i)
        rows.push_back(ComparisonRow{a[i].id, a[i].headword, toColumn(a[i]), toColumn(b[i])});
    return rows;
}

inline void writeCompare(std::ostream& out, const std::vector< ComparisonRow >& rows,
                         const std::vector< std::filesystem::path >& models, OutputFormat format)
{
    const auto size_text = [](const ModelColumn& c) {
        return c.interior_size ? std::to_string(*c.interior_size) : std::string{"-"};
    };
    const auto differing = static_cast< std::size_t >(
        std::count_if(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.differs(); }));
    switch (format)
    {
    case OutputFormat::Json:
    {
        const auto column = [](const ModelColumn& c) {
            return "{\"status\": " + render::jsonString(c.status) + ", \"n\": " + std::to_string(c.n) +
                   ", \"interior_size\": " + (c.interior_size ? std::to_string(*c.interior_size) : "null") +
                   ", \"interior\": " + render::jsonStringArray(c.interior) +
                   ", \"words\": " + render::jsonStringArray(c.ordered_words) + "}";
        };
        out << "{\n  \"command\": \"compare\",\n  \"models\": [" << render::jsonString(models[0].string()) << ", "
            << render::jsonString(models[1].string()) << "],\n  \"rows\": [";
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            const auto& r = rows[i];
            out << (i ? ",\n" : "\n") << "    {\"id\": " << render::jsonString(r.id)
                << ", \"headword\": " << detail::jsonHeadword(r.headword)
                << ", \"differs\": " << (r.differs() ? "true" : "false") << ",\n     \"models\": ["
                << column(r.first) << ",\n                 " << column(r.second) << "]}";
        }
        out << (rows.empty() ? "],\n" : "\n  ],\n") << "  \"summary\": {\"total\": " << rows.size()
            << ", \"differing\": " << differing << "}\n}\n";
        return;
    }
    case OutputFormat::Csv:
        out << "synset_id,headword,status_1,n_1,ints_size_1,ints_1,words_1,status_2,n_2,ints_size_2,ints_2,words_2,"
               "differs\n";
        for (const auto& r : rows)
        {
            out << render::csvField(r.id) << ',' << render::csvField(r.headword.value_or(""));
            for (const auto* c : {&r.first, &r.second})
                out << ',' << c->status << ',' << c->n << ',' << (c->interior_size ? std::to_string(*c->interior_size) : "")
                    << ',' << render::csvField(render::join(c->interior, " ")) << ','
                    << render::csvField(render::join(c->ordered_words, " "));
            out << ',' << (r.differs() ? "true" : "false") << '\n';
        }
        return;
    case OutputFormat::Table:
    {
        out << "model 1: " << models[0].string() << "\nmodel 2: " << models[1].string() << "\n\n";
        render::Table table{{"synset", "n (1)", "|IntS| (1)", "n (2)", "|IntS| (2)", ""}};
        for (const auto& r : rows)
            table.addRow({r.id, std::to_string(r.first.n), size_text(r.first), std::to_string(r.second.n),
                          size_text(r.second), r.differs() ? "*" : ""});
        table.print(out);
        out << '\n';
        for (const auto& r : rows)
        {
            out << r.id << (r.headword ? " (" + *r.headword + ")" : "") << '\n';
            int label = 1;
            for (const auto* c : {&r.first, &r.second})
            {
                if (c->interior_size)
                    out << "  " << label << ": IntS={" << render::join(c->interior, ", ") << "}  ordered: "
                        << render::join(c->ordered_words, ", ") << '\n';
                else
                    out << "  " << label << ": not analyzed (" << c->status << ")\n";
                ++label;
            }
        }
        out << "total " << rows.size() << ", differing |IntS| " << differing << '\n';
        return;
    }
    }
}

inline int cmdCompare(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    validate(config);
    std::vector< EmbeddingModel > models;
    detail::requireModels(config, 2, models);
    const auto synsets = detail::loadSynsets(config);
    const auto first   = detail::processAll(synsets, models[0], config);
    const auto second  = detail::processAll(synsets, models[1], config);
    detail::warnDropped(first, err, "model 1: ");
    detail::warnDropped(second, err, "model 2: ");
    const auto rows = compareResults(first, second);
    writeCompare(out, rows, config.models, config.output);
    const bool any = std::any_of(rows.begin(), rows.end(), [](const ComparisonRow& r) {
        return r.first.interior_size.has_value() || r.second.interior_size.has_value();
    });
    if (!any)
    {
        err << "no synsets analyzed\n";
        return exit_code::nothing_done;
    }
    return exit_code::success;
}

// ---------------------------------------------------------------------------
// audit

struct AuditSummary
{
    std::size_t total    = 0;
    std::size_t analyzed = 0;
    std::size_t skipped  = 0;
    std::size_t weak     = 0;
};

/// A synset is weak when it was analyzed and its interior is empty.
inline AuditSummary summarizeAudit(const std::vector< SynsetResult >& results)
{
    AuditSummary s{results.size(), 0, 0, 0};
    for (const auto& r : results)
    {
        if (!r.report)
        {
            ++s.skipped;
            continue;
        }
        ++s.analyzed;
        if (r.report->interior.empty())
            ++s.weak;
    }
    return s;
}

inline void writeAudit(std::ostream& out, const std::vector< SynsetResult >& results, OutputFormat format)
{
    const auto summary = summarizeAudit(results);
    const auto is_weak = [](const SynsetResult& r) { return r.report && r.report->interior.empty(); };
    switch (format)
    {
    case OutputFormat::Json:
    {
        out << "{\n  \"command\": \"audit\",\n  \"weak\": [";
        bool first = true;
        for (const auto& r : results)
        {
            if (!is_weak(r))
                continue;
            out << (first ? "\n" : ",\n") << "    {\"id\": " << render::jsonString(r.id)
                << ", \"headword\": " << detail::jsonHeadword(r.headword) << ", \"n\": " << r.report->n
                << ", \"words\": [";
            for (std::size_t i = 0; i < r.report->words.size(); ++i)
                out << (i ? ", " : "") << detail::jsonWord(r.report->words[i]);
            out << "]}";
            first = false;
        }
        out << (first ? "],\n" : "\n  ],\n");
        detail::writeSkippedJson(out, results);
        out << ",\n  \"summary\": {\"total\": " << summary.total << ", \"analyzed\": " << summary.analyzed
            << ", \"skipped\": " << summary.skipped << ", \"weak\": " << summary.weak << "}\n}\n";
        return;
    }
    case OutputFormat::Csv:
        out << "synset_id,headword,n,words\n";
        for (const auto& r : results)
            if (is_weak(r))
                out << render::csvField(r.id) << ',' << render::csvField(r.headword.value_or("")) << ','
                    << r.report->n << ',' << render::csvField(render::join(detail::orderedTokens(*r.report), " "))
                    << '\n';
        return;
    case OutputFormat::Table:
    {
        render::Table table{{"weak synset", "headword", "n", "words (by rank, centrality)"}};
        for (const auto& r : results)
            if (is_weak(r))
                table.addRow({r.id, r.headword.value_or(""), std::to_string(r.report->n),
                              render::join(detail::orderedTokens(*r.report), ", ")});
        if (summary.weak > 0)
        {
            table.print(out);
            out << '\n';
        }
        out << "total " << summary.total << ", analyzed " << summary.analyzed << ", skipped " << summary.skipped
            << ", weak " << summary.weak << '\n';
        return;
    }
    }
}

inline int cmdAudit(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    validate(config);
    std::vector< EmbeddingModel > models;
    const auto&                   model   = detail::requireModels(config, 1, models);
    const auto                    results = detail::processAll(detail::loadSynsets(config), model, config);
    detail::warnDropped(results, err);
    writeAudit(out, results, config.output);
    return exit_code::success;
}

/// Runs `command`, turning any library error into exit status 1 with a message on `err`.
inline int runCommand(Command command, const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try
    {
        switch (command)
        {
        case Command::Analyze:
            return cmdAnalyze(config, out, err);
        case Command::Partitions:
            return cmdPartitions(config, out, err);
        case Command::Compare:
            return cmdCompare(config, out, err);
        case Command::Audit:
            return cmdAudit(config, out, err);
        }
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
    }
    return exit_code::fatal;
}
} // namespace synset

#endif // SYNSET_COMMANDS_HPP
