#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace admcurve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (quotes, schedules, parameters).
class InputError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a closed-form function.
class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A quote makes the bound recursion undefined (zero rate followed by a
/// positive rate). `index` is 1-based, as in the quote table.
class DegenerateQuoteError : public Error {
public:
    DegenerateQuoteError(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A precondition of the model-free recursion fails (1 - S_{i-1} H_i <= 0).
class PreconditionError : public Error {
public:
    PreconditionError(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The quote set admits no nonincreasing curve that fits every quote.
class ArbitrageError : public Error {
public:
    ArbitrageError(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class CalibrationError : public Error {
public:
    CalibrationError(std::size_t instrument, const std::string& what)
        : Error(what), instrument_(instrument) {}
    /// 1-based position of the instrument being solved when the failure hit.
    std::size_t instrument() const noexcept { return instrument_; }

private:
    std::size_t instrument_;
};

/// No sign change of the residual inside the widest allowed level bracket.
class NoSolutionError : public CalibrationError {
public:
    NoSolutionError(std::size_t instrument, double lo, double hi, double residual_lo,
                    double residual_hi);
    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }
    double residual_lo() const noexcept { return res_lo_; }
    double residual_hi() const noexcept { return res_hi_; }

private:
    double lo_, hi_, res_lo_, res_hi_;
};

/// The implied forward curve goes non-positive on the given knot interval.
class InadmissibleError : public CalibrationError {
public:
    InadmissibleError(std::size_t instrument, std::optional<double> t_star,
                      const std::string& reason);
    std::optional<double> t_star() const noexcept { return t_star_; }

private:
    std::optional<double> t_star_;
};

}  // namespace admcurve
