#ifndef COOPMIMO_RESULTS_HPP
#define COOPMIMO_RESULTS_HPP

#include "coopmimo/config.hpp"
#include "coopmimo/errors.hpp"
#include "coopmimo/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coopmimo {

inline constexpr std::string_view csv_header = "scheme,strategy,n_relays,ps_db,frames,info_bits,bit_errors,ber,seed";

inline std::string to_csv(const std::vector<BerRecord>& records)
{
    using detail::format_double;
    std::ostringstream out;
    out << csv_header << '\n';
    for (const auto& r : records) {
        out << r.scheme << ',' << r.strategy << ',' << r.n_relays << ',' << format_double(r.ps_db) << ',' << r.frames
            << ',' << r.info_bits << ',' << r.bit_errors << ',' << format_double(r.ber) << ',' << r.seed << '\n';
    }
    return out.str();
}

inline std::vector<BerRecord> parse_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != csv_header) {
        throw FramingError("CSV header does not match the BER record columns");
    }
    std::vector<BerRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 9) {
            throw FramingError("CSV line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                               " fields, expected 9");
        }
        BerRecord r;
        r.scheme = f[0];
        r.strategy = f[1];
        r.n_relays = detail::parse_int<std::size_t>("n_relays", f[2]);
        r.ps_db = detail::parse_double("ps_db", f[3]);
        r.frames = detail::parse_int<std::size_t>("frames", f[4]);
        r.info_bits = detail::parse_int<std::uint64_t>("info_bits", f[5]);
        r.bit_errors = detail::parse_int<std::uint64_t>("bit_errors", f[6]);
        r.ber = detail::parse_double("ber", f[7]);
        r.seed = detail::parse_int<std::uint64_t>("seed", f[8]);
        out.push_back(std::move(r));
    }
    return out;
}

// BER on a log axis against the sweep variable, one polyline per (scheme, strategy) in
// order of first appearance. Zero-error points are drawn at the floor of the axis.
inline std::string to_svg(const std::vector<BerRecord>& records, SweepVariable x_axis = SweepVariable::n_relays)
{
    if (records.empty()) {
        throw ConfigError("nothing to plot");
    }
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double left = 70.0;
    constexpr double right = 170.0;
    constexpr double top = 30.0;
    constexpr double bottom = 50.0;

    auto xv = [&](const BerRecord& r) { return x_axis == SweepVariable::n_relays ? static_cast<double>(r.n_relays) : r.ps_db; };

    std::vector<std::pair<std::string, std::vector<const BerRecord*>>> series;
    for (const auto& r : records) {
        const std::string key = r.scheme + " / " + r.strategy;
        auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.first == key; });
        if (it == series.end()) {
            series.push_back({key, {}});
            it = std::prev(series.end());
        }
        it->second.push_back(&r);
    }

    double xmin = xv(records.front());
    double xmax = xmin;
    double min_positive = 1.0;
    for (const auto& r : records) {
        xmin = std::min(xmin, xv(r));
        xmax = std::max(xmax, xv(r));
        if (r.ber > 0.0) {
            min_positive = std::min(min_positive, r.ber);
        }
    }
    if (xmax == xmin) {
        xmax = xmin + 1.0;
    }
    const double ymax_dec = 0.0;
    const double ymin_dec = std::min(-1.0, std::floor(std::log10(min_positive)));

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double ber) {
        const double d = ber > 0.0 ? std::max(std::log10(ber), ymin_dec) : ymin_dec;
        return top + (ymax_dec - d) / (ymax_dec - ymin_dec) * ph;
    };

    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    using detail::format_double;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = ymin_dec; d <= ymax_dec; d += 1.0) {
        const double y = top + (ymax_dec - d) / (ymax_dec - ymin_dec) * ph;
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << static_cast<int>(d)
            << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << (x_axis == SweepVariable::n_relays ? "number of candidate relays N" : "Ps (dB)") << "</text>\n";
    svg << "<text x=\"" << left << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">" << format_double(xmin)
        << "</text>\n";
    svg << "<text x=\"" << left + pw << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
        << format_double(xmax) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
        << ")\" text-anchor=\"middle\">BER</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        auto pts = series[s].second;
        std::stable_sort(pts.begin(), pts.end(), [&](auto* a, auto* b) { return xv(*a) < xv(*b); });
        const char* color = palette[s % std::size(palette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            svg << (i ? " " : "") << px(xv(*pts[i])) << ',' << py(pts[i]->ber);
        }
        svg << "\"/>\n";
        const double ly = top + 16.0 + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << series[s].first << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

enum class OutputFormat { csv, svg };

inline void emit_results(const std::vector<BerRecord>& records, OutputFormat format, const std::string& path,
                         SweepVariable x_axis = SweepVariable::n_relays)
{
    if (records.empty()) {
        throw ConfigError("no records to emit");
    }
    const std::string body = format == OutputFormat::csv ? to_csv(records) : to_svg(records, x_axis);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << body;
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

} // namespace coopmimo

#endif // COOPMIMO_RESULTS_HPP
