#pragma once
// Error taxonomy for the folkstat library.
//
// error            - base for everything thrown by this library
// validation_error - bad caller input (unknown entity, out-of-range
//                    threshold, malformed trace line, ...); the CLI maps
//                    these to exit code 1
// Anything else escaping the library is treated as an internal error.

#include <stdexcept>
#include <string>

namespace folkstat {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

class unknown_entity_error : public validation_error {
public:
    explicit unknown_entity_error(const std::string& what) : validation_error(what) {}
};

class empty_input_error : public validation_error {
public:
    explicit empty_input_error(const std::string& what) : validation_error(what) {}
};

class domain_error : public validation_error {
public:
    explicit domain_error(const std::string& what) : validation_error(what) {}
};

class degenerate_input_error : public validation_error {
public:
    explicit degenerate_input_error(const std::string& what) : validation_error(what) {}
};

class rank_deficiency_error : public validation_error {
public:
    explicit rank_deficiency_error(const std::string& what) : validation_error(what) {}
};

class no_neighbors_error : public validation_error {
public:
    explicit no_neighbors_error(const std::string& what) : validation_error(what) {}
};

class span_too_short_error : public validation_error {
public:
    explicit span_too_short_error(const std::string& what) : validation_error(what) {}
};

class malformed_line_error : public validation_error {
public:
    malformed_line_error(std::size_t line, const std::string& reason)
        : validation_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace folkstat
