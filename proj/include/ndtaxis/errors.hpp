#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ndtaxis {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidInitialData : public Error {
public:
    InvalidInitialData(const std::string& what, std::size_t cell)
        : Error(what), cell_(cell) {}
    std::size_t cell() const { return cell_; }

private:
    std::size_t cell_;
};

class PositivityViolation : public Error {
public:
    PositivityViolation(const std::string& what, std::size_t cell)
        : Error(what), cell_(cell) {}
    std::size_t cell() const { return cell_; }

private:
    std::size_t cell_;
};

}  // namespace ndtaxis
