#include "synset/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace
{
std::vector< std::string > splitCsv(const std::string& s)
{
    std::vector< std::string > items;
    std::stringstream          ss{s};
    std::string                item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            items.push_back(item);
    return items;
}

synset::SynsetFormat formatFromExtension(const std::filesystem::path& path)
{
    const auto ext = path.extension();
    return ext == ".jsonl" || ext == ".json" ? synset::SynsetFormat::Jsonl : synset::SynsetFormat::Tsv;
}
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synset interior, rank and centrality over word2vec embeddings"};
    app.require_subcommand(1);

    synset::RunConfig config;
    std::string       synset_format;
    std::string       output   = "table";
    std::string       oov_mode = "drop-word";
    std::string       tag_suffixes;
    std::string       out_path;

    const auto add_common = [&](CLI::App* cmd, std::size_t max_models) {
        cmd->add_option("--model", config.models,
                        max_models == 2 ? "Embedding model, given twice (.bin is binary, anything else text)"
                                        : "Embedding model (.bin is binary, anything else text)")
            ->required()
            ->expected(1, static_cast< int >(max_models))
            ->check(CLI::ExistingFile);
        cmd->add_option("--synsets", config.synsets, "Synset file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", synset_format, "Synset file format (default: by extension, .jsonl or tsv)")
            ->check(CLI::IsMember({"tsv", "jsonl"}));
        cmd->add_option("--output", output, "Report format")->check(CLI::IsMember({"table", "csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--eps", config.geometry.eps, "Tie tolerance for similarity differences")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--oov", oov_mode, "Out-of-vocabulary policy")
            ->check(CLI::IsMember({"drop-word", "skip-synset", "fail"}))
            ->capture_default_str();
        cmd->add_option("--tag-suffixes", tag_suffixes, "Comma-separated suffixes tried after the exact token, e.g. _NOUN,_ADJ");
        cmd->add_flag("--lowercase-fallback", config.oov.lowercase_fallback, "Also try the lowercased token");
        cmd->add_option("--max-synset-size", config.geometry.max_synset_size, "Refuse synsets larger than this")
            ->check(CLI::Range(std::size_t{3}, synset::hard_max_synset_size))
            ->capture_default_str();
        cmd->add_option("--jobs", config.jobs, "Synsets analyzed in parallel")->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--out", out_path, "Write the report here instead of standard output");
    };

    auto* analyze = app.add_subcommand("analyze", "Rank, centrality and interior of every synset");
    add_common(analyze, 1);
    auto* partitions = app.add_subcommand("partitions", "Per-partition detail for one word of one synset");
    add_common(partitions, 1);
    partitions->add_option("--synset-id", config.synset_id, "Synset id")->required();
    partitions->add_option("--word", config.focus_word, "Word (as written, or its model key)")->required();
    auto* compare = app.add_subcommand("compare", "Compare interiors under two models");
    add_common(compare, 2);
    auto* audit = app.add_subcommand("audit", "List weak synsets (empty interior)");
    add_common(audit, 1);

    CLI11_PARSE(app, argc, argv);

    config.synset_format = synset_format.empty() ? formatFromExtension(config.synsets)
                           : synset_format == "jsonl" ? synset::SynsetFormat::Jsonl
                                                      : synset::SynsetFormat::Tsv;
    config.output = output == "json" ? synset::OutputFormat::Json
                    : output == "csv" ? synset::OutputFormat::Csv
                                      : synset::OutputFormat::Table;
    config.oov.mode         = *synset::parseOovMode(oov_mode);
    config.oov.tag_suffixes = splitCsv(tag_suffixes);

    const std::map< const CLI::App*, synset::Command > commands{{analyze, synset::Command::Analyze},
                                                               {partitions, synset::Command::Partitions},
                                                               {compare, synset::Command::Compare},
                                                               {audit, synset::Command::Audit}};
    const auto command = commands.at(app.get_subcommands().front());
    if (command == synset::Command::Compare && config.models.size() != 2)
    {
        std::cerr << "error: compare needs --model twice\n";
        return synset::exit_code::fatal;
    }

    if (out_path.empty())
        return synset::runCommand(command, config, std::cout, std::cerr);
    std::ofstream out{out_path, std::ios::out | std::ios::binary};
    if (!out)
    {
        std::cerr << "error: cannot open '" << out_path << "' for writing\n";
        return synset::exit_code::fatal;
    }
    return synset::runCommand(command, config, out, std::cerr);
}
