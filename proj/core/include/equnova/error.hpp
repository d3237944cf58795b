#pragma once

#include <stdexcept>
#include <string>

namespace equnova {

/// Base for all errors raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input (JSONL, judgments, run files). Carries the 1-based line when known.
class parse_error : public error {
  public:
    parse_error(std::size_t line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), m_line(line)
    {}
    explicit parse_error(const std::string& what) : error(what) {}

    std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line = 0;
};

class duplicate_id_error : public error {
  public:
    explicit duplicate_id_error(std::string id)
        : error("duplicate id: " + id), m_id(std::move(id))
    {}
    const std::string& id() const noexcept { return m_id; }

  private:
    std::string m_id;
};

class not_found_error : public error {
  public:
    using error::error;
};

class invalid_argument_error : public error {
  public:
    using error::error;
};

/// A remote scorer could not be reached or answered with garbage.
class transport_error : public error {
  public:
    using error::error;
};

}  // namespace equnova
