#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace confal {

using VarId = int;

// Fixed primitive indeterminates. d/l/m/n are the operator variables
// (rendered for the symbols usually written as the derivation and the three
// bracket variables); everything after them is a parameter. `cinv` is the
// designated inverse of `c`: monomials are kept reduced along c*cinv = 1,
// which makes the ring Laurent in c while every stored exponent stays
// nonnegative.
namespace vars {
inline constexpr VarId partial = 0; // "d"
inline constexpr VarId lambda = 1;  // "l"
inline constexpr VarId mu = 2;      // "m"
inline constexpr VarId nu = 3;      // "n"
inline constexpr VarId par_a = 4;   // "a"
inline constexpr VarId par_b = 5;   // "b"
inline constexpr VarId par_c = 6;   // "c"
inline constexpr VarId par_cinv = 7;
inline constexpr int builtin_count = 8;
} // namespace vars

// Session-wide name table. The builtins are always present; user parameters
// are appended on first use (declaring is idempotent).
class VarRegistry {
  public:
    static VarRegistry& instance()
    {
        static VarRegistry reg;
        return reg;
    }

    VarId lookup(const std::string& name) const
    {
        std::lock_guard lock(mutex_);
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    VarId declare(const std::string& name)
    {
        std::lock_guard lock(mutex_);
        auto it = index_.find(name);
        if (it != index_.end())
            return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        index_[name] = id;
        return id;
    }

    std::string name(VarId v) const
    {
        std::lock_guard lock(mutex_);
        return names_.at(static_cast<size_t>(v));
    }

    int count() const
    {
        std::lock_guard lock(mutex_);
        return static_cast<int>(names_.size());
    }

    static bool is_operator_var(VarId v) { return v >= 0 && v < 4; }

  private:
    VarRegistry()
        : names_{"d", "l", "m", "n", "a", "b", "c", "cinv"}
    {
        for (size_t i = 0; i < names_.size(); ++i)
            index_[names_[i]] = static_cast<VarId>(i);
    }

    mutable std::mutex mutex_;
    std::vector<std::string> names_;
    std::map<std::string, VarId> index_;
};

} // namespace confal
