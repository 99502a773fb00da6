#ifndef KSTAB_ERROR_HPP
#define KSTAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kstab {

/// Rejection of structurally invalid input or an operation outside its
/// domain.  `code` is a stable machine-readable tag (e.g. "Unbounded",
/// "ChopTooLarge"); `what()` carries the human-readable detail including
/// the offending facet/vertex where applicable.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& detail)
        : std::runtime_error("line " + std::to_string(line) + ": " + detail), line_(line) {}
    explicit ParseError(const std::string& detail) : std::runtime_error(detail), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace kstab

#endif
