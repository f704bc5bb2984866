#include "bmf/probes.hpp"

#include "bmf/errors.hpp"

#include <algorithm>

namespace bmf {

namespace {

// Anchors shrink geometrically toward x so harvested structure clusters at the
// scales where the designed witnesses live.
constexpr int kAnchorShifts[] = {0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 40};
constexpr int kHarvestGens = 5;    // frame-chain depth walked per anchor
constexpr int kHarvestLevels = 20; // staircase levels examined per frame

void check_point(const Rational& x, const char* who) {
    if (x < Rational(0) || x > Rational(1))
        throw std::invalid_argument(std::string(who) + ": point outside [0, 1]");
}

} // namespace

std::string side_name(Side side) { return side == Side::left ? "left" : "right"; }

Side side_parse(const std::string& name) {
    if (name == "left") return Side::left;
    if (name == "right") return Side::right;
    throw std::invalid_argument("side must be \"left\" or \"right\"");
}

Enclosure LimitTarget::eval(const Rational& x, const Rational& eps) const {
    return f_.eval(x, eps);
}

void LimitTarget::structural_points(const Rational& anchor, const Rational& lo,
                                    const Rational& hi, std::set<Rational>& out) const {
    check_point(anchor, "structural_points");
    auto emit = [&](const Rational& p) {
        if (lo < p && p < hi) out.insert(p);
    };
    Frame frame = BMFunction::root_frame();
    for (int gen = 0; gen <= kHarvestGens; ++gen) {
        bool mirrored = false;
        Rational s = frame.fold(anchor, mirrored);
        bool entered = false;
        f_.with_tree(frame.sigma, [&](StaircaseTree& tree) {
            StaircaseNode node = tree.path_root();
            for (int lvl = 0; lvl < kHarvestLevels; ++lvl) {
                emit(frame.unfold(node.c, mirrored));
                emit(frame.unfold(node.d, mirrored));
                if (s == node.c || s == node.d) return;
                Rational ia = frame.unfold(node.a, mirrored);
                Rational ib = frame.unfold(node.b, mirrored);
                emit(ia);
                emit(ib);
                if (node.m % 2 == 1) {
                    emit((ia + ib) / 2);
                } else {
                    Rational is = frame.unfold(node.split, mirrored);
                    emit(is);
                    emit((ia + is) / 2);
                    emit((is + ib) / 2);
                }
                if (s > node.a && s < node.b) {
                    if (node.has_split && s == node.split) return;
                    auto kids = BMFunction::child_frames(frame, node);
                    Frame child =
                        kids.size() == 1 ? kids[0] : (s < node.split ? kids[0] : kids[1]);
                    if (mirrored) { // reflect the child base across the frame midline
                        Rational cu = child.u, cv = child.v;
                        child.u = frame.u + frame.v - cv;
                        child.v = frame.u + frame.v - cu;
                    }
                    frame = child;
                    entered = true;
                    return;
                }
                if (s == node.a || s == node.b) return;
                node = tree.path_child(node, s < node.a);
            }
        });
        if (!entered) break;
    }
}

Enclosure PLTarget::eval(const Rational& x, const Rational& eps) const {
    (void)eps; // piecewise-linear values are exact
    return Enclosure(eval_pl(g_, x));
}

void PLTarget::structural_points(const Rational& anchor, const Rational& lo, const Rational& hi,
                                 std::set<Rational>& out) const {
    (void)anchor;
    for (const Rational& bp : g_.breakpoints)
        if (lo < bp && bp < hi) out.insert(bp);
}

QuotientRecord quotient(const ProbeTarget& target, const Rational& x, const Rational& y,
                        const Rational& eps) {
    check_point(x, "quotient");
    check_point(y, "quotient");
    if (x == y) throw std::invalid_argument("quotient: x and y must differ");
    if (eps <= Rational(0)) throw std::invalid_argument("quotient: eps must be positive");
    Rational gap = abs(x - y);
    Rational ehalf = eps * gap / 2;
    Enclosure fx = target.eval(x, ehalf);
    Enclosure fy = target.eval(y, ehalf);
    QuotientRecord rec;
    rec.x = x;
    rec.y = y;
    rec.value = (fx - fy) / (x - y);
    return rec;
}

QuotientRecord quotient(const Rational& x, const Rational& y, const Rational& eps) {
    return quotient(LimitTarget{}, x, y, eps);
}

std::vector<QuotientRecord> witness_sequence(const Rational& x, const std::vector<int>& m_list) {
    check_point(x, "witness_sequence");
    int max_m = 0;
    for (int m : m_list) {
        if (m < 1 || m % 2 == 0)
            throw std::invalid_argument("witness_sequence: levels must be odd and positive");
        if (m > StaircaseTree::kMaxMaterializedDepth)
            throw resource_limit_error("witness_sequence: level beyond the materialized depth cap");
        max_m = std::max(max_m, m);
    }
    BMFunction f;
    Chain chain = f.locate(x);
    if (!chain.resolved || chain.order != 0)
        throw std::invalid_argument(
            "witness_sequence: the point does not resolve into the root nowhere-dense set");
    bool mirrored = false;
    Frame root = BMFunction::root_frame();
    Rational s = root.fold(x, mirrored);

    std::vector<StaircaseNode> witnesses;
    f.with_tree(1, [&](StaircaseTree& tree) {
        tree.ensure_depth(max_m);
        for (int m : m_list) {
            const std::vector<StaircaseNode>& lv = tree.level(m);
            auto it = std::partition_point(lv.begin(), lv.end(),
                                           [&](const StaircaseNode& n) { return !(s < n.a); });
            if (it == lv.end())
                throw std::invalid_argument("witness_sequence: no level-" + std::to_string(m) +
                                            " removed interval beyond the point");
            witnesses.push_back(*it);
        }
    });

    std::vector<QuotientRecord> records;
    records.reserve(witnesses.size());
    for (const StaircaseNode& node : witnesses) {
        QuotientRecord rec;
        rec.x = x;
        rec.y = root.unfold(node.a, mirrored);
        Rational gap = abs(x - rec.y);
        Enclosure fx = f.eval(x, gap * Rational::pow2(-32));
        rec.value = (fx - Enclosure(node.plateau)) / (x - rec.y);
        if (node.c <= s && fx.exact())
            rec.epsilon_m = (node.plateau - fx.lo) / (node.plateau - node.vc);
        records.push_back(std::move(rec));
    }
    return records;
}

DiniScan running_records(const DiniScan& scan) {
    DiniScan out;
    out.x = scan.x;
    out.side = scan.side;
    bool any = false;
    Rational lb, ub;
    int total = 0;
    for (const DiniRow& row : scan.rows) {
        if (row.samples > 0) {
            if (!any) {
                lb = row.max_lb;
                ub = row.min_ub;
                any = true;
            } else {
                lb = max(lb, row.max_lb);
                ub = min(ub, row.min_ub);
            }
        }
        total += row.samples;
        DiniRow r;
        r.scale = row.scale;
        if (any) {
            r.max_lb = lb;
            r.min_ub = ub;
        }
        r.samples = total;
        out.rows.push_back(std::move(r));
    }
    return out;
}

DiniScan dini_scan(const ProbeTarget& target, const Rational& x, Side side,
                   const std::vector<Rational>& scales, int samples) {
    check_point(x, "dini_scan");
    if (samples < 1) throw std::invalid_argument("dini_scan: samples must be positive");
    if (scales.empty()) throw std::invalid_argument("dini_scan: at least one scale is required");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= Rational(0))
            throw std::invalid_argument("dini_scan: scales must be positive");
        if (i > 0 && !(scales[i] < scales[i - 1]))
            throw std::invalid_argument("dini_scan: scales must decrease strictly");
    }
    if (side == Side::right ? x + scales.front() > Rational(1) : x - scales.front() < Rational(0))
        throw std::invalid_argument("dini_scan: scale window leaves [0, 1]");

    const Rational scan_eps = Rational::pow2(-20);
    DiniScan scan;
    scan.x = x;
    scan.side = side;
    for (const Rational& h : scales) {
        Rational lo = side == Side::right ? x : x - h;
        Rational hi = side == Side::right ? x + h : x;
        std::set<Rational> pts;
        for (int j = 1; j <= samples; ++j) {
            Rational step = h * Rational(j, samples + 1);
            pts.insert(side == Side::right ? x + step : x - step);
        }
        for (int shift : kAnchorShifts) {
            Rational delta = h * Rational::pow2(-shift);
            Rational anchor = side == Side::right ? x + delta : x - delta;
            if (lo < anchor && anchor < hi) pts.insert(anchor);
            target.structural_points(anchor, lo, hi, pts);
        }
        DiniRow row;
        row.scale = h;
        bool any = false;
        for (const Rational& y : pts) {
            Enclosure q;
            try {
                q = quotient(target, x, y, scan_eps).value;
            } catch (const resource_limit_error&) {
                continue; // probe would exceed the walk budget: drop, never guess
            }
            if (!any) {
                row.max_lb = q.lo;
                row.min_ub = q.hi;
                any = true;
            } else {
                row.max_lb = max(row.max_lb, q.lo);
                row.min_ub = min(row.min_ub, q.hi);
            }
            ++row.samples;
        }
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

DiniScan dini_scan(const Rational& x, Side side, const std::vector<Rational>& scales,
                   int samples) {
    return dini_scan(LimitTarget{}, x, side, scales, samples);
}

MorseReport morse_report(const ProbeTarget& target, const std::vector<Rational>& points,
                         const std::vector<Rational>& scales, const Rational& threshold,
                         int samples) {
    MorseReport rep;
    rep.threshold = threshold;
    for (const Rational& x : points) {
        MorsePoint mp;
        mp.x = x;
        for (Side side : {Side::left, Side::right}) {
            MorseSide& ms = side == Side::left ? mp.left : mp.right;
            if (x < Rational(0) || x > Rational(1)) continue;
            Rational room = side == Side::left ? x : Rational(1) - x;
            std::vector<Rational> usable;
            for (const Rational& h : scales)
                if (Rational(0) < h && h <= room) usable.push_back(h);
            if (usable.empty()) continue; // this side is skipped at boundary points
            DiniScan sc = dini_scan(target, x, side, usable, samples);
            ms.applicable = true;
            ms.rows = sc.rows;
            bool any = false;
            for (const DiniRow& row : sc.rows) {
                if (row.samples == 0) continue;
                if (!any) {
                    ms.best_lb = row.max_lb;
                    ms.worst_ub = row.min_ub;
                    any = true;
                } else {
                    ms.best_lb = max(ms.best_lb, row.max_lb);
                    ms.worst_ub = min(ms.worst_ub, row.min_ub);
                }
            }
            ms.flagged = any && (ms.best_lb > threshold || ms.worst_ub < -threshold);
        }
        rep.points.push_back(std::move(mp));
    }
    return rep;
}

MorseReport morse_report(const std::vector<Rational>& points, const std::vector<Rational>& scales,
                         const Rational& threshold, int samples) {
    return morse_report(LimitTarget{}, points, scales, threshold, samples);
}

} // namespace bmf
