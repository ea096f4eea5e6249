#ifndef SYNSET_RENDER_HPP
#define SYNSET_RENDER_HPP

// Byte-stable text rendering shared by the table, CSV and JSON writers.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace synset::render
{
/// Fixed-point rendering with `decimals` places; values that round to zero print unsigned.
inline std::string fixed(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s{buf};
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

inline std::string centrality(double value)
{
    return fixed(value, 4);
}

inline std::string similarity(double value)
{
    return fixed(value, 6);
}

/// Rank from its doubled integer form: "3", "-2", "0.5", "-1.5".
inline std::string rank(long doubled)
{
    const bool        negative = doubled < 0;
    const auto        mag      = negative ? -doubled : doubled;
    std::string       s        = negative ? "-" : "";
    s += std::to_string(mag / 2);
    if (mag % 2 != 0)
        s += ".5";
    return s;
}

inline std::string jsonString(std::string_view s)
{
    return nlohmann::json(std::string{s}).dump();
}

inline std::string jsonStringArray(const std::vector< std::string >& items)
{
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i)
        s += (i ? ", " : "") + jsonString(items[i]);
    return s + "]";
}

inline std::string csvField(std::string_view s)
{
    if (s.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string{s};
    std::string quoted = "\"";
    for (const char c : s)
    {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

inline std::string join(const std::vector< std::string >& items, std::string_view sep)
{
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i)
    {
        if (i)
            s += sep;
        s += items[i];
    }
    return s;
}

/// Terminal columns taken by UTF-8 text, counting one per code point.
inline std::size_t displayWidth(std::string_view s)
{
    return static_cast< std::size_t >(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast< unsigned char >(c) & 0xC0) != 0x80; }));
}

/// Left-aligned text table.
class Table
{
public:
    explicit Table(std::vector< std::string > header) : rows_{std::move(header)} {}

    void addRow(std::vector< std::string > row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out, std::string_view indent = "") const
    {
        std::vector< std::size_t > widths;
        for (const auto& row : rows_)
        {
            widths.resize(std::max(widths.size(), row.size()), 0);
            for (std::size_t c = 0; c < row.size(); ++c)
                widths[c] = std::max(widths[c], displayWidth(row[c]));
        }
        for (const auto& row : rows_)
        {
            std::string line{indent};
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                line += row[c];
                if (c + 1 < row.size())
                    line.append(widths[c] - displayWidth(row[c]) + 2, ' ');
            }
            out << line << '\n';
        }
    }

private:
    std::vector< std::vector< std::string > > rows_;
};
} // namespace synset::render

#endif // SYNSET_RENDER_HPP
