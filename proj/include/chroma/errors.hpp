#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chroma {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters: zero-size graphs, odd list sizes, mismatched vector
// lengths, malformed bijections.
struct invalid_argument_error : error {
  using error::error;
};

// Construction would exceed the configured vertex cap.
struct capacity_error : error {
  using error::error;
};

// Malformed input bytes. `offset` is the byte position of the first
// offending character where known.
struct parse_error : error {
  std::size_t offset;
  parse_error(const std::string& msg, std::size_t at)
      : error(msg + " (byte " + std::to_string(at) + ")"), offset(at) {}
};

// A solver ran out of its time budget. Whatever bounds were certified
// before the deadline are carried along.
struct budget_error : error {
  long long lower;
  long long upper;
  long long nodes;
  budget_error(const std::string& msg, long long lo = -1, long long hi = -1,
               long long visited = 0)
      : error(msg), lower(lo), upper(hi), nodes(visited) {}
};

// A list-coloring instance admits no proper coloring at all; raised by
// operations whose numeric result is only defined on feasible instances.
struct infeasible_error : error {
  using error::error;
};

// An always-on internal consistency check failed; indicates a bug, never
// a property of the input.
struct internal_error : error {
  using error::error;
};

}  // namespace chroma
