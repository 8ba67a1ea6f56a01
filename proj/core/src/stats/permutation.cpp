#include "preempt/stats/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "preempt/error.hpp"
#include "preempt/stats/descriptive.hpp"

namespace preempt::stats {

std::string OrderingTestResult::p_text() const {
    std::ostringstream os;
    if (matches == 0) {
        os << "< 1/" << permutations;
    } else {
        os << p;
    }
    return os.str();
}

double ordering_effect(std::span<const double> high, std::span<const double> low) {
    const double diff = mean(high) - mean(low);
    const double pooled = std::sqrt((variance(high) + variance(low)) / 2.0);
    if (pooled == 0.0) {
        if (diff == 0.0) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return diff / pooled;
}

namespace {

struct Layout {
    std::vector<int> labels;               // distinct construction labels, ascending
    std::vector<double> high_values, low_values;
    std::vector<std::size_t> high_cx, low_cx;  // construction index per item
};

Layout layout(std::span<const OrderingItem> items) {
    Layout l;
    for (const auto& it : items) l.labels.push_back(it.construction);
    std::sort(l.labels.begin(), l.labels.end());
    l.labels.erase(std::unique(l.labels.begin(), l.labels.end()), l.labels.end());
    if (l.labels.size() < 2) throw InputError("ordering test: needs at least 2 constructions");
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < l.labels.size(); ++i) index[l.labels[i]] = i;
    std::vector<std::size_t> nh(l.labels.size(), 0), nl(l.labels.size(), 0);
    for (const auto& it : items) {
        if (!std::isfinite(it.value)) throw InputError("ordering test: non-finite value");
        const auto c = index[it.construction];
        if (it.high) {
            l.high_values.push_back(it.value);
            l.high_cx.push_back(c);
            ++nh[c];
        } else {
            l.low_values.push_back(it.value);
            l.low_cx.push_back(c);
            ++nl[c];
        }
    }
    for (std::size_t c = 0; c < l.labels.size(); ++c) {
        if (nh[c] < 2 || nl[c] < 2) {
            throw InputError("ordering test: construction " + std::to_string(l.labels[c]) +
                             " needs at least 2 items in each group");
        }
    }
    return l;
}

std::vector<double> effects(const Layout& l, std::span<const std::size_t> high_cx, std::span<const std::size_t> low_cx) {
    const auto k = l.labels.size();
    std::vector<std::vector<double>> h(k), lo(k);
    for (std::size_t i = 0; i < high_cx.size(); ++i) h[high_cx[i]].push_back(l.high_values[i]);
    for (std::size_t i = 0; i < low_cx.size(); ++i) lo[low_cx[i]].push_back(l.low_values[i]);
    std::vector<double> d(k);
    for (std::size_t c = 0; c < k; ++c) d[c] = ordering_effect(h[c], lo[c]);
    return d;
}

struct Observed {
    std::vector<std::size_t> order;  // construction indices, largest d first
    std::vector<double> gaps;        // d[order[i]] - d[order[i+1]]
    std::vector<double> d;
};

Observed observe(const Layout& l) {
    Observed o;
    o.d = effects(l, l.high_cx, l.low_cx);
    o.order.resize(o.d.size());
    std::iota(o.order.begin(), o.order.end(), 0);
    std::stable_sort(o.order.begin(), o.order.end(), [&](std::size_t a, std::size_t b) { return o.d[a] > o.d[b]; });
    for (std::size_t i = 0; i + 1 < o.order.size(); ++i) {
        const double g = o.d[o.order[i]] - o.d[o.order[i + 1]];
        o.gaps.push_back(std::isnan(g) ? 0.0 : g);
    }
    return o;
}

bool matches(const Observed& o, const std::vector<double>& d) {
    for (std::size_t i = 0; i + 1 < o.order.size(); ++i) {
        const double a = d[o.order[i]];
        const double b = d[o.order[i + 1]];
        if (a == b && o.gaps[i] == 0.0) continue;  // also covers equal infinities
        if (!(a - b >= o.gaps[i])) return false;
    }
    return true;
}

OrderingTestResult start(const Layout& l, const Observed& o) {
    OrderingTestResult r;
    for (auto c : o.order) {
        r.constructions.push_back(l.labels[c]);
        r.observed_d.push_back(o.d[c]);
    }
    return r;
}

// Number of distinct arrangements of a multiset.
double arrangements(const std::vector<std::size_t>& labels) {
    std::map<std::size_t, int> counts;
    for (auto c : labels) ++counts[c];
    double logn = std::lgamma(static_cast<double>(labels.size()) + 1.0);
    for (const auto& [c, k] : counts) logn -= std::lgamma(k + 1.0);
    return std::exp(logn);
}

}  // namespace

OrderingTestResult permutation_ordering_test(std::span<const OrderingItem> items, std::size_t permutations,
                                             std::uint64_t seed) {
    if (permutations == 0) throw InputError("permutation_ordering_test: needs at least one permutation");
    const auto l = layout(items);
    const auto o = observe(l);
    auto r = start(l, o);
    std::mt19937_64 rng(seed);
    auto hc = l.high_cx;
    auto lc = l.low_cx;
    for (std::size_t b = 0; b < permutations; ++b) {
        std::shuffle(hc.begin(), hc.end(), rng);
        std::shuffle(lc.begin(), lc.end(), rng);
        if (matches(o, effects(l, hc, lc))) ++r.matches;
    }
    r.permutations = permutations;
    r.p = static_cast<double>(r.matches) / static_cast<double>(permutations);
    return r;
}

OrderingTestResult exact_ordering_test(std::span<const OrderingItem> items, std::size_t limit) {
    const auto l = layout(items);
    const auto o = observe(l);
    auto r = start(l, o);
    auto hc = l.high_cx;
    auto lc = l.low_cx;
    std::sort(hc.begin(), hc.end());
    std::sort(lc.begin(), lc.end());
    const double total = arrangements(hc) * arrangements(lc);
    if (total > static_cast<double>(limit)) {
        throw InputError("exact_ordering_test: " + std::to_string(static_cast<long double>(total)) +
                         " relabellings exceed the limit");
    }
    do {
        auto inner = lc;
        do {
            if (matches(o, effects(l, hc, inner))) ++r.matches;
            ++r.permutations;
        } while (std::next_permutation(inner.begin(), inner.end()));
    } while (std::next_permutation(hc.begin(), hc.end()));
    r.p = static_cast<double>(r.matches) / static_cast<double>(r.permutations);
    r.exact = true;
    return r;
}

}  // namespace preempt::stats
