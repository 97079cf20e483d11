#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geometer {

// Base of everything thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax-level failure in raw input bytes; carries the offending byte offset.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t byte_offset)
      : error(what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Well-formed input that violates a documented contract (bad tag, bad field).
class validation_error : public error {
 public:
  using error::error;
};

// A sentence cites a marker id that is missing from the source list.
class referential_error : public error {
 public:
  referential_error(const std::string& what, int marker_id)
      : error(what), marker_id_(marker_id) {}

  int marker_id() const noexcept { return marker_id_; }

 private:
  int marker_id_;
};

// Two sources share one marker id.
class duplication_error : public error {
 public:
  duplication_error(const std::string& what, int marker_id)
      : error(what), marker_id_(marker_id) {}

  int marker_id() const noexcept { return marker_id_; }

 private:
  int marker_id_;
};

// A metric was requested for an id that does not exist.
class lookup_error : public error {
 public:
  using error::error;
};

// The metric has no defined value for this input (zero-word transcript,
// empty run list). Raised instead of returning a silent zero.
class undefined_metric_error : public error {
 public:
  using error::error;
};

// Bad or incomplete configuration (priors table, lexicons, CLI config).
class config_error : public error {
 public:
  using error::error;
};

// Filesystem trouble.
class io_error : public error {
 public:
  using error::error;
};

class not_found_error : public io_error {
 public:
  using io_error::io_error;
};

}  // namespace geometer
