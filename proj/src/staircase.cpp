#include "bmf/staircase.hpp"

#include <utility>

namespace bmf {

namespace {

// Smallest power of two >= x (x > 0), located via numerator/denominator bit widths.
Rational next_pow2(const Rational& x) {
    int k = static_cast<int>(boost::multiprecision::msb(x.num())) -
            static_cast<int>(boost::multiprecision::msb(x.den())) - 1;
    if (k < 0) k = 0;
    Rational p = Rational::pow2(k);
    while (p < x) p *= 2;
    return p;
}

} // namespace

std::string kmode_name(KMode mode) {
    return mode == KMode::exact ? "exact" : "ceil";
}

KMode kmode_parse(const std::string& name) {
    if (name == "exact") return KMode::exact;
    if (name == "ceil") return KMode::ceil;
    throw std::invalid_argument("kmode: expected 'exact' or 'ceil', got '" + name + "'");
}

StaircaseTree::StaircaseTree(int sigma, KMode kmode)
    : sigma_(sigma), kmode_(kmode), edge_ratio_(2), edge_level_(1) {
    if (sigma < 1) throw std::invalid_argument("staircase: sigma must be at least 1");
}

const std::vector<StaircaseNode>& StaircaseTree::level(int m) const {
    if (m < 1 || m > depth())
        throw std::invalid_argument("staircase: level " + std::to_string(m) + " not built");
    return levels_[static_cast<std::size_t>(m - 1)];
}

const StaircaseNode& StaircaseTree::node(int m, std::int64_t p) const {
    const auto& lv = level(m);
    if (p < 1 || p > static_cast<std::int64_t>(lv.size()))
        throw std::invalid_argument("staircase: no node (" + std::to_string(m) + ", " +
                                    std::to_string(p) + ")");
    return lv[static_cast<std::size_t>(p - 1)];
}

const Rational& StaircaseTree::expansion_factor(int m) const {
    if (m < 2 || m % 2 != 0 || m > depth())
        throw std::invalid_argument("staircase: K(m) needs an even m within the built depth");
    return kfactors_[static_cast<std::size_t>(m / 2 - 1)];
}

Rational StaircaseTree::survivor_length(int M) const {
    if (M < 0 || M > depth())
        throw std::invalid_argument("staircase: survivor level outside the built depth");
    Rational len(1, 2);
    for (int m = 1; m <= M; ++m) {
        if (m % 2 == 1)
            len *= Rational(1, 2) + Rational::pow2(-(m + sigma_));
        else
            len *= Rational(2) / kfactors_[static_cast<std::size_t>(m / 2 - 1)];
    }
    return len;
}

const Rational& StaircaseTree::kfactor(int m, int level_limit) {
    if (m > level_limit)
        throw resource_limit_error("staircase: level cutoff " + std::to_string(level_limit) +
                                   " reached while extending K(m)");
    while (static_cast<int>(kfactors_.size()) < m / 2) {
        // One step of the left-edge recursion: edge_ratio_ is the value/length ratio
        // of the leftmost carrier at level edge_level_.
        if (edge_level_ % 2 == 1) {
            edge_ratio_ *= Rational::pow2(edge_level_ + sigma_ - 1);
        } else {
            Rational k_exact = 1 + 2 * edge_ratio_;
            Rational k = kmode_ == KMode::ceil ? next_pow2(k_exact) : std::move(k_exact);
            if (!kfactors_.empty() && !(kfactors_.back() < k))
                throw construction_error("staircase: expansion factors failed to increase at K(" +
                                         std::to_string(edge_level_) + ")");
            edge_ratio_ *= k - 1;
            kfactors_.push_back(std::move(k));
        }
        ++edge_level_;
    }
    return kfactors_[static_cast<std::size_t>(m / 2 - 1)];
}

void StaircaseTree::acquire_kfactors(int m, int level_limit) {
    if (m >= 2) kfactor(m % 2 == 0 ? m : m - 1, level_limit);
}

void StaircaseTree::fill_hole(StaircaseNode& n, int level_limit) {
    if (n.m % 2 == 1) {
        n.b = (n.c + n.d) / 2;
        Rational removed = n.carrier_len() * (Rational(1, 2) - Rational::pow2(-(n.m + sigma_)));
        n.a = n.b - removed;
        n.has_split = false;
        n.split = Rational();
    } else {
        const Rational& k = kfactor(n.m, level_limit);
        Rational margin = n.carrier_len() / k;
        n.a = n.c + margin;
        n.b = n.d - margin;
        n.has_split = true;
        n.split = n.b - (n.b - n.a) / (k - 2);
    }
    n.plateau = n.vc + (n.b - n.c) / n.carrier_len() * n.value_gap();
}

void StaircaseTree::ensure_depth(int depth) {
    if (depth < 1) throw std::invalid_argument("staircase: depth must be at least 1");
    if (depth > kMaxMaterializedDepth)
        throw resource_limit_error("staircase: materialized depth capped at " +
                                   std::to_string(kMaxMaterializedDepth) +
                                   "; use the path API for deeper queries");
    if (levels_.empty()) {
        StaircaseNode root;
        root.m = 1;
        root.p = 1;
        root.c = Rational(0);
        root.d = Rational(1, 2);
        root.vc = Rational(0);
        root.vd = Rational(1);
        fill_hole(root, kDefaultLevelCutoff);
        levels_.push_back({std::move(root)});
    }
    while (static_cast<int>(levels_.size()) < depth) {
        int m = static_cast<int>(levels_.size()) + 1;
        const auto& prev = levels_.back();
        std::vector<StaircaseNode> next;
        next.reserve(prev.size() * 2);
        for (const StaircaseNode& n : prev) {
            StaircaseNode left;
            left.m = m;
            left.p = 2 * n.p - 1;
            left.c = n.c;
            left.d = n.a;
            left.vc = n.vc;
            left.vd = n.plateau;
            StaircaseNode right;
            right.m = m;
            right.p = 2 * n.p;
            right.c = n.b;
            right.d = n.d;
            right.vc = n.plateau;
            right.vd = n.vd;
            next.push_back(std::move(left));
            next.push_back(std::move(right));
        }
        if (m % 2 == 0) {
            // The left-edge recursion claims the level maximum sits at p = 1; confirm
            // against the freshly materialized carriers before trusting K(m).
            Rational brute(0);
            for (const StaircaseNode& n : next)
                brute = max(brute, n.value_gap() / n.carrier_len());
            Rational k_exact = 1 + 2 * brute;
            Rational from_level = kmode_ == KMode::ceil ? next_pow2(k_exact) : k_exact;
            if (kfactor(m, kDefaultLevelCutoff) != from_level)
                throw construction_error(
                    "staircase: left-edge K recursion disagrees with the level maximum at m = " +
                    std::to_string(m));
        }
        for (StaircaseNode& n : next) fill_hole(n, kDefaultLevelCutoff);
        levels_.push_back(std::move(next));
    }
}

StaircaseNode StaircaseTree::path_root() {
    StaircaseNode root;
    root.m = 1;
    root.p = 1;
    root.c = Rational(0);
    root.d = Rational(1, 2);
    root.vc = Rational(0);
    root.vd = Rational(1);
    fill_hole(root, kDefaultLevelCutoff);
    return root;
}

StaircaseNode StaircaseTree::path_child(const StaircaseNode& parent, bool left_side,
                                        int level_limit) {
    int m = parent.m + 1;
    if (m > level_limit)
        throw resource_limit_error("staircase: level cutoff " + std::to_string(level_limit) +
                                   " reached while descending");
    StaircaseNode child;
    child.m = m;
    // Positions past level 62 no longer fit an int64; the coordinates never need them.
    if (parent.p >= 1 && parent.m <= 62)
        child.p = left_side ? 2 * parent.p - 1 : 2 * parent.p;
    else
        child.p = -1;
    if (left_side) {
        child.c = parent.c;
        child.d = parent.a;
        child.vc = parent.vc;
        child.vd = parent.plateau;
    } else {
        child.c = parent.b;
        child.d = parent.d;
        child.vc = parent.plateau;
        child.vd = parent.vd;
    }
    fill_hole(child, level_limit);
    return child;
}

Enclosure StaircaseTree::eval(const Rational& s_in, const Rational& eps, int level_cutoff) {
    if (s_in < Rational(0) || s_in > Rational(1))
        throw std::invalid_argument("staircase: point outside [0, 1]");
    if (eps < Rational(0)) throw std::invalid_argument("staircase: eps must be nonnegative");
    // Values at s and 1 - s agree, so only the left half is ever walked.
    Rational s = s_in > Rational(1, 2) ? 1 - s_in : s_in;
    StaircaseNode n = path_root();
    for (;;) {
        if (s == n.c) return Enclosure(n.vc);
        if (s == n.d) return Enclosure(n.vd);
        if (s >= n.a && s <= n.b) return Enclosure(n.plateau);
        if (n.value_gap() <= eps) return Enclosure(n.vc, n.vd);
        n = path_child(n, s < n.a, level_cutoff);
    }
}

StaircaseTree build_staircase(int sigma, int depth, KMode kmode) {
    StaircaseTree t(sigma, kmode);
    t.ensure_depth(depth);
    return t;
}

} // namespace bmf
