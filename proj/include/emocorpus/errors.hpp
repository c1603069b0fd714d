#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emocorpus {

// Base of every error the library throws. The CLI maps data errors to exit
// code 1 and infrastructure errors (IoError, OracleError) to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IntegrityError : public Error {
public:
    IntegrityError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error { using Error::Error; };
class PairingError : public Error { using Error::Error; };
class PrerequisiteError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class EmptyCorpusError : public Error { using Error::Error; };
class InsufficientDataError : public Error { using Error::Error; };
class ScaleMismatchError : public Error { using Error::Error; };
class UndefinedWerError : public Error { using Error::Error; };
class PoolCoverageError : public Error { using Error::Error; };
class DegenerateError : public Error { using Error::Error; };

// Infrastructure failures.
class IoError : public Error { using Error::Error; };
class OracleError : public Error { using Error::Error; };

}  // namespace emocorpus
