// Command-line surface: builds staircase trees and schedule approximants,
// evaluates the limit function with certified enclosures, verifies measure
// preservation, runs one-sided difference-quotient scans, and exports plots.
// Exit codes: 0 success, 1 verification failure or runtime fault, 2 usage.

#include "CLI11.hpp"

#include "bmf/bmfunction.hpp"
#include "bmf/io.hpp"
#include "bmf/plmap.hpp"
#include "bmf/probes.hpp"
#include "bmf/staircase.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using bmf::Rational;

constexpr const char* kDefaultEps = "1/1048576"; // 2^-20

Rational parse_rational(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(std::string(flag) + " expects a rational like p/q, got '" +
                                    text + "'");
    }
}

Rational parse_unit_point(const std::string& text, const char* flag) {
    Rational x = parse_rational(text, flag);
    if (x < Rational(0) || Rational(1) < x)
        throw std::invalid_argument(std::string(flag) + " must lie in [0, 1], got " + x.str());
    return x;
}

Rational parse_positive(const std::string& text, const char* flag) {
    Rational r = parse_rational(text, flag);
    if (r.sign() <= 0)
        throw std::invalid_argument(std::string(flag) + " must be positive, got " + r.str());
    return r;
}

std::vector<Rational> parse_scales(const std::string& text) {
    std::vector<Rational> scales;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) scales.push_back(parse_positive(item, "--scales"));
    if (scales.empty()) throw std::invalid_argument("--scales expects a comma-separated list");
    return scales;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lebesgue-measure-preserving staircase construction toolkit"};
    app.require_subcommand(1);
    int status = 0;

    // build-staircase
    auto* bs = app.add_subcommand("build-staircase", "Materialize a staircase tree as JSON");
    int bs_sigma = 1, bs_depth = 8;
    std::string bs_kmode = "exact", bs_out;
    bs->add_option("--sigma", bs_sigma, "level-1 removal parameter (default 1)");
    bs->add_option("--kmode", bs_kmode, "left-edge factor mode: exact|ceil (default exact)");
    bs->add_option("--depth", bs_depth, "levels to materialize (default 8)");
    bs->add_option("--out", bs_out, "output tree JSON path")->required();
    bs->callback([&] {
        if (bs_sigma < 1) throw std::invalid_argument("--sigma must be a positive integer");
        if (bs_depth < 1 || bs_depth > bmf::StaircaseTree::kMaxMaterializedDepth)
            throw std::invalid_argument("--depth must be between 1 and " +
                                        std::to_string(bmf::StaircaseTree::kMaxMaterializedDepth));
        bmf::StaircaseTree tree(bs_sigma, bmf::kmode_parse(bs_kmode));
        tree.ensure_depth(bs_depth);
        write_file(bs_out, bmf::tree_to_json(tree));
    });

    // eval
    auto* ev = app.add_subcommand("eval", "Enclose the limit function at one point");
    std::string ev_x, ev_eps = kDefaultEps;
    ev->add_option("--x", ev_x, "point in [0, 1] as p/q")->required();
    ev->add_option("--eps", ev_eps, "enclosure width bound (default 1/1048576)");
    ev->callback([&] {
        Rational x = parse_unit_point(ev_x, "--x");
        Rational eps = parse_positive(ev_eps, "--eps");
        bmf::BMFunction f;
        bmf::Enclosure e = f.eval(x, eps);
        std::cout << e.lo.str() << ' ' << e.hi.str() << '\n';
    });

    // sample
    auto* sa = app.add_subcommand("sample", "Enclose the limit function on a uniform grid");
    int sa_count = 0, sa_decimals = -1;
    std::string sa_eps = kDefaultEps, sa_out;
    sa->add_option("--count", sa_count, "number of grid points (>= 2)")->required();
    sa->add_option("--eps", sa_eps, "enclosure width bound (default 1/1048576)");
    sa->add_option("--decimals", sa_decimals, "append a decimal midpoint column with this precision");
    sa->add_option("--out", sa_out, "output CSV path")->required();
    sa->callback([&] {
        if (sa_count < 2) throw std::invalid_argument("--count must be at least 2");
        Rational eps = parse_positive(sa_eps, "--eps");
        bmf::BMFunction f;
        std::vector<bmf::SampleRow> rows;
        rows.reserve(sa_count);
        for (int k = 0; k < sa_count; ++k) {
            Rational x(k, sa_count - 1);
            rows.push_back(bmf::SampleRow{x, f.eval(x, eps)});
        }
        write_file(sa_out, bmf::samples_to_csv(rows, sa_decimals));
    });

    // build-g
    auto* bg = app.add_subcommand("build-g", "Build a schedule approximant as JSON");
    int bg_gen = 0, bg_cutoff = 3;
    std::string bg_out;
    bg->add_option("--gen", bg_gen, "generations to apply (1..6)")->required();
    bg->add_option("--cutoff", bg_cutoff, "largest staircase level per frame (default 3)");
    bg->add_option("--out", bg_out, "output map JSON path")->required();
    bg->callback([&] {
        if (bg_gen < 1 || bg_gen > bmf::BMFunction::kDefaultMaxGen)
            throw std::invalid_argument("--gen must be between 1 and " +
                                        std::to_string(bmf::BMFunction::kDefaultMaxGen));
        if (bg_cutoff < 1) throw std::invalid_argument("--cutoff must be a positive integer");
        write_file(bg_out, bmf::plmap_to_json(bmf::build_g(bg_gen, bg_cutoff)));
    });

    // verify-measure
    auto* vm = app.add_subcommand("verify-measure", "Check measure preservation of a map file");
    std::string vm_in, vm_out;
    vm->add_option("--in", vm_in, "map JSON path")->required();
    vm->add_option("--out", vm_out, "report JSON path");
    vm->callback([&] {
        bmf::MeasureReport report = bmf::verify_measure(bmf::plmap_from_json(read_file(vm_in)));
        if (!vm_out.empty()) write_file(vm_out, bmf::measure_report_to_json(report));
        if (report.preserving) {
            std::cout << "preserving\n";
        } else {
            std::cerr << "not preserving: " << report.diagnostic << '\n';
            status = 1;
        }
    });

    // dini
    auto* di = app.add_subcommand("dini", "One-sided difference-quotient scan to CSV");
    std::string di_x, di_side, di_scales, di_map, di_out;
    int di_samples = 8;
    di->add_option("--x", di_x, "scan point in [0, 1] as p/q")->required();
    di->add_option("--side", di_side, "left|right")->required();
    di->add_option("--scales", di_scales, "comma-separated decreasing positive rationals")->required();
    di->add_option("--samples", di_samples, "grid probes per scale (default 8)");
    di->add_option("--map", di_map, "scan this piecewise-linear map instead of the limit function");
    di->add_option("--out", di_out, "output CSV path")->required();
    di->callback([&] {
        Rational x = parse_unit_point(di_x, "--x");
        bmf::Side side = bmf::side_parse(di_side);
        std::vector<Rational> scales = parse_scales(di_scales);
        if (di_samples < 1) throw std::invalid_argument("--samples must be a positive integer");
        bmf::DiniScan scan;
        if (di_map.empty()) {
            scan = bmf::dini_scan(x, side, scales, di_samples);
        } else {
            bmf::PLTarget target(bmf::plmap_from_json(read_file(di_map)));
            scan = bmf::dini_scan(target, x, side, scales, di_samples);
        }
        write_file(di_out, bmf::scan_to_csv(scan));
    });

    // plot
    auto* pl = app.add_subcommand("plot", "Render a map file or sample CSV as standalone SVG");
    std::string pl_in, pl_out;
    pl->add_option("--in", pl_in, "map JSON (.json) or sample CSV (.csv) path")->required();
    pl->add_option("--out", pl_out, "output SVG path")->required();
    pl->callback([&] {
        if (ends_with(pl_in, ".json")) {
            write_file(pl_out, bmf::plmap_to_svg(bmf::plmap_from_json(read_file(pl_in))));
        } else if (ends_with(pl_in, ".csv")) {
            write_file(pl_out, bmf::samples_to_svg(bmf::samples_from_csv(read_file(pl_in))));
        } else {
            throw std::invalid_argument("--in must end in .json or .csv");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the parse diagnostic
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
