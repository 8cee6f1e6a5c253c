#pragma once

#include <stdexcept>
#include <string>

namespace mstsim {

// Raised when a pipeline-internal precondition fails; the CLI maps this to exit code 3.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for unreadable/unwritable files; the CLI maps this to exit code 1.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Global switch between the serial reference kernels and the OpenMP ones.
// Both paths produce bit-identical results; tests compare them directly.
void set_parallel_enabled(bool on);
bool parallel_enabled();

}  // namespace mstsim
