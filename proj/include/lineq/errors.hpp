#pragma once

#include <stdexcept>
#include <string>

namespace lineq {

/// Base of every error thrown by the library. `code()` is the process exit
/// code the CLI reports for this error family.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int code() const { return 1; }
};

class TypeError : public Error {
public:
    using Error::Error;
    int code() const override { return 2; }
};

class CompositionMismatch : public TypeError {
public:
    CompositionMismatch(std::string expected, std::string found, std::string path)
        : TypeError("composition mismatch at " + path + ": expected " + expected + ", found " + found),
          expected_(std::move(expected)), found_(std::move(found)), path_(std::move(path)) {}
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }
    const std::string& path() const { return path_; }

private:
    std::string expected_, found_, path_;
};

class GeneratorNotInTheory : public TypeError {
public:
    GeneratorNotInTheory(std::string generator, std::string theory)
        : TypeError("generator " + generator + " is not available in " + theory),
          generator_(std::move(generator)), theory_(std::move(theory)) {}
    const std::string& generator() const { return generator_; }
    const std::string& theory() const { return theory_; }

private:
    std::string generator_, theory_;
};

class RelationMismatch : public TypeError {
public:
    using TypeError::TypeError;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, std::string expected)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected),
          line_(line), column_(column), expected_(std::move(expected)) {}
    int code() const override { return 3; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    int line_, column_;
    std::string expected_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
    int code() const override { return 4; }
};

class PreconditionTopInType : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class PreconditionNotRLess : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class PreconditionNotDiversified : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The distinguished variable of an adjunction occurs where it must not.
class VariableYOccurs : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotInSubcategory : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class TypeMismatch : public TypeError {
public:
    using TypeError::TypeError;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
    int code() const override { return 5; }
};

class InterfaceMismatch : public Error {
public:
    InterfaceMismatch(std::size_t position, std::string label_f, std::string label_g)
        : Error("interface mismatch at position " + std::to_string(position) + ": " + label_f +
                " vs " + label_g),
          position_(position) {}
    int code() const override { return 2; }
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class NoMatchAtPath : public Error {
public:
    using Error::Error;
    int code() const override { return 4; }
};

class SchemaNotInTheory : public Error {
public:
    using Error::Error;
    int code() const override { return 4; }
};

} // namespace lineq
