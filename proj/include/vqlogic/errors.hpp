#pragma once

#include <stdexcept>
#include <string>

namespace vqlogic {

// All library failures carry a short machine-readable code alongside the
// human-readable message. The CLI maps codes onto exit diagnostics.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct arity_error : error {
    explicit arity_error(const std::string& msg) : error("arity", msg) {}
};

struct capacity_error : error {
    explicit capacity_error(const std::string& msg) : error("capacity", msg) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& msg) : error("domain", msg) {}
};

struct shape_error : error {
    explicit shape_error(const std::string& msg) : error("shape", msg) {}
};

struct config_error : error {
    explicit config_error(const std::string& msg) : error("config", msg) {}
};

struct format_error : error {
    explicit format_error(const std::string& msg) : error("format", msg) {}
};

struct ingest_error : error {
    explicit ingest_error(const std::string& msg) : error("ingest", msg) {}
};

struct corruption_error : error {
    explicit corruption_error(const std::string& msg) : error("corrupt", msg) {}
};

struct unusable_class_error : error {
    explicit unusable_class_error(const std::string& msg) : error("unusable-class", msg) {}
};

struct selection_error : error {
    explicit selection_error(const std::string& msg) : error("selection", msg) {}
};

struct alignment_error : error {
    explicit alignment_error(const std::string& msg) : error("alignment", msg) {}
};

struct input_error : error {
    explicit input_error(const std::string& msg) : error("input", msg) {}
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error("io", msg) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& msg) : error("parse", msg) {}
};

} // namespace vqlogic
