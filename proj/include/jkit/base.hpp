#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace jkit {

using Rat = mpq_class;

std::string rat_str(const Rat& r);

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error {
    std::size_t pos;
    ParseError(const std::string& what, std::size_t pos_)
        : Error(what + " (at position " + std::to_string(pos_) + ")"), pos(pos_) {}
};

struct ChartMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct EvalError : Error {
    using Error::Error;
};

struct Inconclusive : Error {
    using Error::Error;
};

// Chart variables are interned globally; a Var is a handle into the table.
// Ordering of variables is always by name so canonical forms do not depend
// on registration order.
class VarTable {
  public:
    static VarTable& instance();
    std::uint32_t intern(const std::string& name);
    const std::string& name(std::uint32_t id) const;

  private:
    mutable std::mutex mu_;
    std::deque<std::string> names_;  // stable references under growth
    std::map<std::string, std::uint32_t> ids_;
};

struct Var {
    std::uint32_t id = 0;

    static Var of(const std::string& name);
    const std::string& name() const;

    bool operator==(const Var& o) const { return id == o.id; }
    bool operator!=(const Var& o) const { return id != o.id; }
};

// Orders variables alphabetically by name.
struct VarLess {
    bool operator()(Var a, Var b) const { return a.name() < b.name(); }
};

using Point = std::map<Var, Rat, VarLess>;

std::string point_str(const Point& p);

}  // namespace jkit
