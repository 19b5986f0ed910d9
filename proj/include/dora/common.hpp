#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dora {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

// Malformed input document; `path` points at the offending node.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ResolutionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InstantiationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was requested against a bank state that does not allow it.
class StateError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class LexiconError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TransformError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dora
