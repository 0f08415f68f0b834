#include "truecon/poset.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "truecon/error.hpp"

namespace truecon {

void check_run(const Run& r, const Tsi& t) {
    StateId at = t.initial();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] >= t.transition_count()) throw NotARun("step " + std::to_string(i) + " is not a transition");
        if (t.source(r[i]) != at)
            throw NotARun("step " + std::to_string(i) + " (" + t.transition_name(r[i]) +
                          ") does not leave state " + t.state_name(at));
        at = t.target(r[i]);
    }
}

LabelledPoset run_poset(const Run& r, const Tsi& t) {
    check_run(r, t);
    const std::size_t n = r.size();
    LabelledPoset p;
    p.less.assign(n, std::vector<bool>(n, false));
    for (std::size_t j = 0; j < n; ++j) {
        p.labels.push_back(t.label(r[j]));
        // Everything below a dependent predecessor is below j as well; processing
        // i in increasing order keeps this a single pass.
        for (std::size_t i = 0; i < j; ++i) {
            if (t.independent(r[i], r[j])) continue;
            p.less[i][j] = true;
            for (std::size_t k = 0; k < i; ++k)
                if (p.less[k][i]) p.less[k][j] = true;
        }
    }
    return p;
}

namespace {

struct Signature {
    std::string label;
    std::size_t below = 0;
    std::size_t above = 0;
    auto key() const { return std::tie(label, below, above); }
    bool operator==(const Signature& o) const { return key() == o.key(); }
    bool operator<(const Signature& o) const { return key() < o.key(); }
};

std::vector<Signature> signatures(const LabelledPoset& p) {
    std::vector<Signature> sig(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        sig[i].label = p.labels[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p.less[j][i]) ++sig[i].below;
            if (p.less[i][j]) ++sig[i].above;
        }
    }
    return sig;
}

} // namespace

std::optional<std::vector<std::size_t>> poset_isomorphic(const LabelledPoset& p, const LabelledPoset& q) {
    const std::size_t n = p.size();
    if (q.size() != n) return std::nullopt;
    auto sp = signatures(p);
    auto sq = signatures(q);
    {
        auto a = sp, b = sq;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (!(a == b)) return std::nullopt;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sp[a] < sp[b]; });

    std::vector<std::size_t> image(n, n);
    std::vector<bool> used(n, false);

    auto consistent = [&](std::size_t depth, std::size_t x, std::size_t y) {
        for (std::size_t k = 0; k < depth; ++k) {
            std::size_t i = order[k];
            std::size_t j = image[i];
            if (p.less[i][x] != q.less[j][y] || p.less[x][i] != q.less[y][j]) return false;
        }
        return true;
    };

    auto search = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n) return true;
        std::size_t x = order[depth];
        for (std::size_t y = 0; y < n; ++y) {
            if (used[y] || !(sp[x] == sq[y]) || !consistent(depth, x, y)) continue;
            used[y] = true;
            image[x] = y;
            if (self(self, depth + 1)) return true;
            used[y] = false;
            image[x] = n;
        }
        return false;
    };
    if (!search(search, 0)) return std::nullopt;
    return image;
}

} // namespace truecon
