#include "bmf/bmfunction.hpp"

#include <utility>

namespace bmf {

Rational Frame::fold(const Rational& x, bool& mirrored) const {
    Rational t = (x - u) / len();
    if (t <= Rational(1, 2)) {
        mirrored = false;
        return t;
    }
    mirrored = true;
    return 1 - t;
}

Rational Frame::unfold(const Rational& s, bool mirrored) const {
    return u + len() * (mirrored ? 1 - s : s);
}

namespace {

// Outcome of walking one frame's staircase at coordinate s.
struct FrameStep {
    enum class Outcome { exact, bracket, enter, cutoff };
    Outcome outcome = Outcome::cutoff;
    Rational exact_value;   // staircase value for Outcome::exact
    Rational lo, hi;        // staircase value bracket for Outcome::bracket
    Frame child;            // next frame for Outcome::enter (also set for split hits)
    bool at_split = false;  // exact hit on the shared endpoint of the two tent bases
    Rational hit_s;         // staircase coordinate of the exact hit
    Rational enter_plateau; // plateau value of the removed interval entered
};

Frame make_child(const Frame& parent, const StaircaseNode& node, const Rational& lo_s,
                 const Rational& hi_s, bool mirrored) {
    Frame child;
    child.gen = parent.gen + 1;
    child.sigma = parent.sigma + node.m;
    child.orient = -parent.orient;
    child.h = parent.h * (node.plateau - node.vc);
    child.y0 = parent.value_of(node.plateau);
    Rational x1 = parent.unfold(lo_s, mirrored);
    Rational x2 = parent.unfold(hi_s, mirrored);
    child.u = min(x1, x2);
    child.v = max(x1, x2);
    return child;
}

// Walks the staircase of `frame` at s. Exact hits are checked before the width
// stop at every node, so closures of removed intervals always come back exact.
// gap_stop is eps scaled into staircase units (null: walk without a width stop).
FrameStep walk_frame(StaircaseTree& tree, const Frame& frame, const Rational& s, bool mirrored,
                     const Rational* gap_stop, int level_cutoff) {
    FrameStep st;
    StaircaseNode n = tree.path_root();
    for (;;) {
        if (s == n.c || s == n.d) {
            st.outcome = FrameStep::Outcome::exact;
            st.hit_s = s;
            st.exact_value = s == n.c ? n.vc : n.vd;
            return st;
        }
        if (s >= n.a && s <= n.b) {
            if (s == n.a || s == n.b || (n.has_split && s == n.split)) {
                st.outcome = FrameStep::Outcome::exact;
                st.hit_s = s;
                st.exact_value = n.plateau;
                st.at_split = n.has_split && s == n.split;
                if (st.at_split) // the left tent base, whose right endpoint is s
                    st.child = make_child(frame, n, n.a, n.split, mirrored);
                return st;
            }
            st.outcome = FrameStep::Outcome::enter;
            st.enter_plateau = n.plateau;
            if (n.m % 2 == 1)
                st.child = make_child(frame, n, n.a, n.b, mirrored);
            else if (s < n.split)
                st.child = make_child(frame, n, n.a, n.split, mirrored);
            else
                st.child = make_child(frame, n, n.split, n.b, mirrored);
            return st;
        }
        if (gap_stop != nullptr && n.value_gap() <= *gap_stop) {
            st.outcome = FrameStep::Outcome::bracket;
            st.lo = n.vc;
            st.hi = n.vd;
            return st;
        }
        if (n.m + 1 > level_cutoff) {
            st.outcome = FrameStep::Outcome::cutoff;
            return st;
        }
        n = tree.path_child(n, s < n.a, level_cutoff);
    }
}

void check_domain(const Rational& x) {
    if (x < Rational(0) || x > Rational(1))
        throw std::invalid_argument("eval: point outside [0, 1]");
}

void check_node(const StaircaseNode& node) {
    bool ok = node.m >= 1 && node.c < node.a && node.a < node.b && node.b < node.d &&
              node.c >= Rational(0) && node.d <= Rational(1, 2) && node.plateau > node.vc &&
              node.vd >= node.plateau;
    if (ok && node.m % 2 == 0) ok = node.has_split && node.a < node.split && node.split < node.b;
    if (!ok) throw std::invalid_argument("child_frames: malformed staircase node");
}

} // namespace

Frame BMFunction::root_frame() {
    Frame root;
    root.gen = 0;
    root.u = Rational(0);
    root.v = Rational(1);
    root.y0 = Rational(0);
    root.h = Rational(1);
    root.orient = 1;
    root.sigma = 1;
    root.parent = -1;
    return root;
}

std::vector<Frame> BMFunction::child_frames(const Frame& parent, const StaircaseNode& node) {
    check_node(node);
    if (node.m % 2 == 1) return {make_child(parent, node, node.a, node.b, false)};
    return {make_child(parent, node, node.a, node.split, false),
            make_child(parent, node, node.split, node.b, false)};
}

BMFunction::TreeEntry& BMFunction::entry(int sigma) {
    std::lock_guard<std::mutex> lk(map_mu_);
    auto it = trees_.find(sigma);
    if (it == trees_.end())
        it = trees_.emplace(sigma, std::make_unique<TreeEntry>(sigma)).first;
    return *it->second;
}

Enclosure BMFunction::eval(const Rational& x, const Rational& eps, int level_cutoff) {
    return eval_n(x, -1, eps, level_cutoff);
}

Enclosure BMFunction::eval_n(const Rational& x, int n, const Rational& eps, int level_cutoff) {
    check_domain(x);
    if (eps <= Rational(0)) throw std::invalid_argument("eval: eps must be positive");
    Frame frame = root_frame();
    for (;;) {
        bool mirrored = false;
        Rational s = frame.fold(x, mirrored);
        Rational gap_stop = eps / frame.h;
        FrameStep st = with_tree(frame.sigma, [&](StaircaseTree& tree) {
            return walk_frame(tree, frame, s, mirrored, &gap_stop, level_cutoff);
        });
        switch (st.outcome) {
        case FrameStep::Outcome::exact:
            return Enclosure(frame.value_of(st.exact_value));
        case FrameStep::Outcome::bracket:
            return Enclosure::spanning(frame.value_of(st.lo), frame.value_of(st.hi));
        case FrameStep::Outcome::cutoff:
            throw resource_limit_error("eval: level cutoff reached before certification");
        case FrameStep::Outcome::enter:
            if (frame.gen == n) // the n-th approximant stays flat here
                return Enclosure(frame.value_of(st.enter_plateau));
            frame = st.child;
            break;
        }
    }
}

Chain BMFunction::locate(const Rational& x, int max_gen, int level_cutoff) {
    check_domain(x);
    if (max_gen < 0) throw std::invalid_argument("locate: max_gen must be nonnegative");
    Chain ch;
    ch.frames.push_back(root_frame());
    for (;;) {
        const Frame& frame = ch.frames.back();
        bool mirrored = false;
        Rational s = frame.fold(x, mirrored);
        FrameStep st = with_tree(frame.sigma, [&](StaircaseTree& tree) {
            return walk_frame(tree, frame, s, mirrored, nullptr, level_cutoff);
        });
        if (st.outcome == FrameStep::Outcome::cutoff) return ch;
        if (st.outcome == FrameStep::Outcome::exact) {
            if (st.at_split) {
                // strictly inside a removed interval, so one generation deeper: the
                // point is the shared base endpoint of the two tents
                if (frame.gen + 1 > max_gen) return ch;
                st.child.parent = static_cast<int>(ch.frames.size()) - 1;
                ch.frames.push_back(st.child);
                ch.resolved = true;
                ch.order = ch.frames.back().gen;
                ch.boundary = true;
                return ch;
            }
            ch.resolved = true;
            ch.order = frame.gen;
            // every staircase cut point except the original ends 0 and 1/2 borders a
            // removed interval
            ch.boundary = st.hit_s != Rational(0) && st.hit_s != Rational(1, 2);
            return ch;
        }
        if (frame.gen + 1 > max_gen) return ch;
        st.child.parent = static_cast<int>(ch.frames.size()) - 1;
        ch.frames.push_back(st.child);
    }
}

Rational max_height(int n, int breadth) {
    if (n < 1) throw std::invalid_argument("max_height: generation must be at least 1");
    if (breadth < 1) throw std::invalid_argument("max_height: breadth must be at least 1");
    std::map<int, StaircaseTree> trees;
    std::map<std::pair<int, int>, Rational> memo;
    auto tree_for = [&](int sigma) -> StaircaseTree& {
        auto it = trees.find(sigma);
        if (it == trees.end()) it = trees.emplace(sigma, build_staircase(sigma, breadth)).first;
        return it->second;
    };
    auto best = [&](auto&& self, int gens_left, int sigma) -> Rational {
        if (gens_left == 0) return Rational(1);
        auto key = std::make_pair(gens_left, sigma);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        StaircaseTree& t = tree_for(sigma);
        Rational out(0);
        for (int m = 1; m <= breadth; ++m) {
            Rational drop(0);
            for (const StaircaseNode& node : t.level(m))
                drop = max(drop, node.plateau - node.vc);
            out = max(out, drop * self(self, gens_left - 1, sigma + m));
        }
        memo.emplace(key, out);
        return out;
    };
    return best(best, n, 1);
}

} // namespace bmf
