#pragma once

#include <stdexcept>
#include <string>

namespace ffqlat {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or malformed input (bad field config, bad JSON, zero divisor, ...).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// Two values from different field contexts were combined.
struct FieldMismatchError : Error {
    explicit FieldMismatchError(const std::string& msg) : Error(msg) {}
};

/// A lattice operation required a nonsingular Gram matrix.
struct SingularFormError : Error {
    explicit SingularFormError(const std::string& msg) : Error(msg) {}
};

/// The form is isotropic at the infinite place.
struct NotDefiniteError : Error {
    explicit NotDefiniteError(const std::string& msg) : Error(msg) {}
};

/// A configured work budget would be exceeded.
struct BudgetExceededError : Error {
    explicit BudgetExceededError(const std::string& msg) : Error(msg) {}
};

/// A Laurent series coefficient below the tracked precision was requested.
struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg) : Error(msg) {}
};

/// A spectrum did not extend far enough to determine the quantity asked for.
struct InsufficientBoundError : Error {
    explicit InsufficientBoundError(const std::string& msg) : Error(msg) {}
};

inline void check_budget(unsigned long long needed, unsigned long long budget,
                         const char* what) {
    if (budget != 0 && needed > budget)
        throw BudgetExceededError(std::string(what) + ": needs " + std::to_string(needed) +
                                  " > budget " + std::to_string(budget));
}

}  // namespace ffqlat
