#include "bmf/io.hpp"

#include "json.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace bmf {
namespace {

using nlohmann::json;

json rat(const Rational& r) { return json(r.str()); }

Rational parse_rat(const json& j, const char* what) {
    if (!j.is_string())
        throw std::invalid_argument(std::string(what) + " must be a \"num/den\" string");
    return Rational::parse(j.get<std::string>());
}

json rows_to_json(const std::vector<DiniRow>& rows) {
    json out = json::array();
    for (const DiniRow& row : rows) {
        out.push_back(json{{"scale", rat(row.scale)},
                           {"max_lb", rat(row.max_lb)},
                           {"min_ub", rat(row.min_ub)},
                           {"samples", row.samples}});
    }
    return out;
}

json side_to_json(const MorseSide& side) {
    json out{{"applicable", side.applicable}, {"flagged", side.flagged}};
    if (side.applicable) {
        out["best_lb"] = rat(side.best_lb);
        out["worst_ub"] = rat(side.worst_ub);
        out["rows"] = rows_to_json(side.rows);
    }
    return out;
}

// nlohmann::json with ordered maps sorts object keys, so dump() is already
// deterministic; indent 2 keeps the files diffable.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Truncated decimal with enough digits for smooth plots; plot coordinates do
// not need to be exact, only deterministic.
constexpr int kSvgDigits = 8;

std::string svg_of_polyline(const std::vector<std::pair<Rational, Rational>>& pts) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" "
           "preserveAspectRatio=\"xMidYMid meet\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"#ffffff\" "
           "stroke=\"#cccccc\" stroke-width=\"0.002\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"0.003\" points=\"";
    bool first = true;
    for (const auto& [x, y] : pts) {
        if (!first) out << ' ';
        first = false;
        // y-axis flipped: SVG y grows downward, the graph's grows upward.
        out << x.decimal(kSvgDigits) << ',' << (Rational(1) - y).decimal(kSvgDigits);
    }
    out << "\"/>\n</svg>\n";
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

std::string tree_to_json(const StaircaseTree& tree) {
    json levels = json::array();
    for (int m = 1; m <= tree.depth(); ++m) {
        json nodes = json::array();
        for (const StaircaseNode& n : tree.level(m)) {
            json jn{{"c", rat(n.c)},   {"a", rat(n.a)},       {"b", rat(n.b)},
                    {"d", rat(n.d)},   {"vc", rat(n.vc)},     {"plateau", rat(n.plateau)},
                    {"vd", rat(n.vd)}};
            if (n.has_split) jn["split"] = rat(n.split);
            nodes.push_back(std::move(jn));
        }
        levels.push_back(json{{"m", m}, {"nodes", std::move(nodes)}});
    }
    return dump(json{{"sigma", tree.sigma()},
                     {"kmode", kmode_name(tree.kmode())},
                     {"levels", std::move(levels)}});
}

std::string plmap_to_json(const PLMap& g) {
    json bps = json::array(), vals = json::array();
    for (const Rational& b : g.breakpoints) bps.push_back(rat(b));
    for (const Rational& v : g.values) vals.push_back(rat(v));
    json out{{"breakpoints", std::move(bps)}, {"values", std::move(vals)}};
    if (g.gen >= 0) out["gen"] = g.gen;
    if (g.cutoff >= 0) out["cutoff"] = g.cutoff;
    return dump(out);
}

PLMap plmap_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("breakpoints") || !j.contains("values") ||
        !j["breakpoints"].is_array() || !j["values"].is_array())
        throw std::invalid_argument("map file must be JSON with breakpoints and values arrays");
    std::vector<Rational> bps, vals;
    for (const json& b : j["breakpoints"]) bps.push_back(parse_rat(b, "breakpoint"));
    for (const json& v : j["values"]) vals.push_back(parse_rat(v, "value"));
    PLMap g = make_plmap(std::move(bps), std::move(vals));
    if (j.contains("gen")) g.gen = j["gen"].get<int>();
    if (j.contains("cutoff")) g.cutoff = j["cutoff"].get<int>();
    return g;
}

std::string measure_report_to_json(const MeasureReport& report) {
    json cells = json::array();
    for (const MeasureCell& cell : report.cells) {
        cells.push_back(
            json{{"lo", rat(cell.lo)}, {"hi", rat(cell.hi)}, {"sum", rat(cell.sum)}});
    }
    json out{{"cells", std::move(cells)}, {"preserving", report.preserving}};
    if (!report.diagnostic.empty()) out["diagnostic"] = report.diagnostic;
    return dump(out);
}

std::string samples_to_csv(const std::vector<SampleRow>& rows, int decimals) {
    std::ostringstream out;
    out << (decimals >= 0 ? "x,lo,hi,dec\n" : "x,lo,hi\n");
    for (const SampleRow& row : rows) {
        out << row.x.str() << ',' << row.value.lo.str() << ',' << row.value.hi.str();
        if (decimals >= 0) {
            Rational mid = (row.value.lo + row.value.hi) / Rational(2);
            out << ',' << mid.decimal(decimals);
        }
        out << '\n';
    }
    return out.str();
}

std::vector<SampleRow> samples_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("sample file is empty");
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "x" || header[1] != "lo" || header[2] != "hi")
        throw std::invalid_argument("sample file must start with an x,lo,hi header");
    std::vector<SampleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < 3)
            throw std::invalid_argument("sample row needs x, lo and hi columns: " + line);
        rows.push_back(
            SampleRow{Rational::parse(fields[0]),
                      Enclosure(Rational::parse(fields[1]), Rational::parse(fields[2]))});
    }
    return rows;
}

std::string scan_to_csv(const DiniScan& scan) {
    std::ostringstream out;
    out << "scale,side,max_lb,min_ub,samples\n";
    for (const DiniRow& row : scan.rows) {
        out << row.scale.str() << ',' << side_name(scan.side) << ',' << row.max_lb.str() << ','
            << row.min_ub.str() << ',' << row.samples << '\n';
    }
    return out.str();
}

std::string morse_report_to_json(const MorseReport& report) {
    json points = json::object();
    for (const MorsePoint& pt : report.points) {
        points[pt.x.str()] =
            json{{"left", side_to_json(pt.left)}, {"right", side_to_json(pt.right)}};
    }
    return dump(json{{"threshold", rat(report.threshold)}, {"points", std::move(points)}});
}

std::string plmap_to_svg(const PLMap& g) {
    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(g.breakpoints.size());
    for (std::size_t i = 0; i < g.breakpoints.size(); ++i)
        pts.emplace_back(g.breakpoints[i], g.values[i]);
    return svg_of_polyline(pts);
}

std::string samples_to_svg(const std::vector<SampleRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("cannot plot an empty sample set");
    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(rows.size());
    for (const SampleRow& row : rows)
        pts.emplace_back(row.x, (row.value.lo + row.value.hi) / Rational(2));
    return svg_of_polyline(pts);
}

} // namespace bmf
