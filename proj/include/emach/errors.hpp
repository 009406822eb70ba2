#pragma once

#include <stdexcept>
#include <string>

namespace emach {

/// Base of every error raised by the library. The CLI maps these to exit
/// codes; callers that only care about failure can catch this type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed machine or sample text.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvalidMachine : public Error { using Error::Error; };
class EmptyWord : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };
class NotIrreducible : public Error { using Error::Error; };
class NotUnifilar : public Error { using Error::Error; };
class NotGenerator : public Error { using Error::Error; };
class ImpossibleSymbol : public Error { using Error::Error; };
class InconsistentBlock : public Error { using Error::Error; };
class ClassExplosion : public Error { using Error::Error; };
class InsufficientData : public Error { using Error::Error; };
class NotIrreducibleShift : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };

}  // namespace emach
