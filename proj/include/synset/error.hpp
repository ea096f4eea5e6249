#ifndef SYNSET_ERROR_HPP
#define SYNSET_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synset
{
/// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or truncated embedding model file.
class ModelFormatError : public Error
{
public:
    using Error::Error;
};

/// Vectors of different lengths were combined.
class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

/// A subset sum has (near) zero norm, so its normalized mean is undefined.
class DegenerateGeometry : public Error
{
public:
    using Error::Error;
};

/// Synset too small (fewer than 3 words) or above the configured cap.
class SynsetSizeError : public Error
{
public:
    using Error::Error;
};

/// Synset definition file problem, positioned at a 1-based line.
class SynsetParseError : public Error
{
public:
    SynsetParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line)
    {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A word could not be resolved and the OOV policy is `fail`.
class ResolutionError : public Error
{
public:
    using Error::Error;
};
} // namespace synset

#endif // SYNSET_ERROR_HPP
