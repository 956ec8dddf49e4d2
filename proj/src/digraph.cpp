#include <mcn/digraph.hpp>

#include <algorithm>
#include <stdexcept>

namespace mcn {

int Digraph::add_vertex()
{
    out_.emplace_back();
    in_.emplace_back();
    return size() - 1;
}

bool Digraph::add_edge(int from, int to)
{
    if (from < 0 || to < 0 || from >= size() || to >= size()) throw std::out_of_range("Digraph::add_edge");
    auto& o = out_[static_cast<std::size_t>(from)];
    auto it = std::lower_bound(o.begin(), o.end(), to);
    if (it != o.end() && *it == to) return false;
    o.insert(it, to);
    auto& i = in_[static_cast<std::size_t>(to)];
    i.insert(std::lower_bound(i.begin(), i.end(), from), from);
    return true;
}

bool Digraph::has_edge(int from, int to) const
{
    const auto& o = out(from);
    return std::binary_search(o.begin(), o.end(), to);
}

int Digraph::edge_count() const
{
    std::size_t total = 0;
    for (const auto& o : out_) total += o.size();
    return static_cast<int>(total);
}

std::vector<std::pair<int, int>> Digraph::edges() const
{
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < size(); ++v)
        for (int w : this->out(v)) out.emplace_back(v, w);
    return out;
}

int Digraph::weak_components(const std::vector<bool>& removed) const
{
    const int n = size();
    auto gone = [&](int v) { return !removed.empty() && removed[static_cast<std::size_t>(v)]; };
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (gone(s) || seen[static_cast<std::size_t>(s)]) continue;
        ++count;
        seen[static_cast<std::size_t>(s)] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto* adj : {&out(v), &in(v)})
                for (int w : *adj)
                    if (!gone(w) && !seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = true;
                        stack.push_back(w);
                    }
        }
    }
    return count;
}

std::vector<bool> Digraph::reachable_from(int v) const
{
    std::vector<bool> seen(static_cast<std::size_t>(size()), false);
    std::vector<int> stack{v};
    seen[static_cast<std::size_t>(v)] = true;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int w : out(x))
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

}  // namespace mcn
