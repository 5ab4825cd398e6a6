#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stochwave {

enum class ErrorCode {
    InvalidArgument,
    MeshMismatch,
    StencilOutOfRange,
    IncompleteTrajectory,
    WeightOverflow,
    DegenerateOrder,
    SingularUpdate,
    BlowUp,
    Coupling,
    Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what)
        : Error(ErrorCode::InvalidArgument, what) {}
};

class MeshMismatch : public Error {
public:
    explicit MeshMismatch(const std::string& what)
        : Error(ErrorCode::MeshMismatch, what) {}
};

/// Thrown when an operator needs a value outside the support of its input.
/// `index` is the doubled mesh index of the point that could not be formed.
class StencilOutOfRange : public Error {
public:
    StencilOutOfRange(const std::string& what, int index)
        : Error(ErrorCode::StencilOutOfRange, what), index_(index) {}

    int index() const noexcept { return index_; }

private:
    int index_;
};

class IncompleteTrajectory : public Error {
public:
    explicit IncompleteTrajectory(const std::string& what)
        : Error(ErrorCode::IncompleteTrajectory, what) {}
};

/// e^{exponent} does not fit in a double. Reduce s or lambda.
class WeightOverflow : public Error {
public:
    explicit WeightOverflow(double exponent);

    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

class DegenerateOrder : public Error {
public:
    explicit DegenerateOrder(const std::string& what)
        : Error(ErrorCode::DegenerateOrder, what) {}
};

class SingularUpdate : public Error {
public:
    SingularUpdate(int j, int n);

    int j() const noexcept { return j_; }
    int n() const noexcept { return n_; }

private:
    int j_;
    int n_;
};

/// A non-finite value appeared while stepping. (j, n) is the first offending
/// node; `path` is set when the failure happened inside an ensemble.
class BlowUp : public Error {
public:
    BlowUp(int j, int n, std::int64_t path = -1);

    int j() const noexcept { return j_; }
    int n() const noexcept { return n_; }
    std::int64_t path() const noexcept { return path_; }

private:
    int j_;
    int n_;
    std::int64_t path_;
};

class CouplingError : public Error {
public:
    explicit CouplingError(const std::string& what)
        : Error(ErrorCode::Coupling, what) {}
};

/// Configuration problem; `pointer` is a JSON-pointer style location.
class ConfigError : public Error {
public:
    ConfigError(const std::string& pointer, const std::string& what)
        : Error(ErrorCode::Config, pointer + ": " + what), pointer_(pointer) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace stochwave
