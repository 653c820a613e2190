#pragma once

#include <string>
#include <vector>

namespace confal {

// Closed integer interval [lo, hi]; lo > hi is the empty window.
struct IndexWindow {
    int lo = 0;
    int hi = -1;
    IndexWindow() = default;
    IndexWindow(int l, int h) : lo(l), hi(h) {}
    static IndexWindow symmetric(int n) { return {-n, n}; }
    bool contains(int i) const { return lo <= i && i <= hi; }
    bool empty() const { return lo > hi; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
};

// Outcome of one identity check. Failures are ordinary data: mutation tests
// expect to see them.
struct CheckReport {
    std::string id;
    bool pass = true;
    std::string message;
    std::vector<std::string> witnesses;

    static CheckReport ok(std::string id, std::string msg = {})
    {
        CheckReport r;
        r.id = std::move(id);
        r.message = std::move(msg);
        return r;
    }
    static CheckReport fail(std::string id, std::string msg,
                            std::vector<std::string> witnesses = {})
    {
        CheckReport r;
        r.id = std::move(id);
        r.pass = false;
        r.message = std::move(msg);
        r.witnesses = std::move(witnesses);
        return r;
    }
};

inline bool all_pass(const std::vector<CheckReport>& reports)
{
    for (const auto& r : reports)
        if (!r.pass)
            return false;
    return true;
}

} // namespace confal
