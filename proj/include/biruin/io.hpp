#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "biruin/errors.hpp"
#include "biruin/real.hpp"

namespace biruin {

// Shortest %g-style rendering with the given number of significant digits.
template <class Real>
std::string format_sig(const Real& x, int digits = 10) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

// Fixed-point rounding to `places` decimals with ties going to the even
// digit, for displays that quote probabilities the way tables print them.
template <class Real>
std::string format_fixed_half_even(const Real& x, int places = 4) {
    if (x < 0) return "-" + format_fixed_half_even(Real(-x), places);
    Real scale(1);
    for (int i = 0; i < places; ++i) scale *= 10;
    const Real y = x * scale;
    Real f = floor(y);
    const Real r = y - f;
    if (r > Real(0.5)) {
        f += 1;
    } else if (r == Real(0.5)) {
        const Real half = f / 2;
        if (half != floor(half)) f += 1;  // odd: round up to even
    }
    long long n = static_cast<long long>(to_double(f) + 0.5);
    long long div = 1;
    for (int i = 0; i < places; ++i) div *= 10;
    std::string out = std::to_string(n / div);
    if (places > 0) {
        std::string frac = std::to_string(n % div);
        out += "." + std::string(places - frac.size(), '0') + frac;
    }
    return out;
}

// CSV body for a ruin-probability column: header "u,psi", one row per
// initial surplus, LF line endings, 10 significant digits.
template <class Real>
std::string psi_csv(const std::vector<Real>& psi) {
    std::string out = "u,psi\n";
    for (std::size_t u = 0; u < psi.size(); ++u)
        out += std::to_string(u) + "," + format_sig(psi[u], 10) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open output file: " + path);
    out << body;
    if (!out) throw ParameterError("failed writing output file: " + path);
}

// Rows of the published reference tables: table id, column label, surplus,
// quoted ruin probability.
struct ReferenceRow {
    int table = 0;
    std::string setting;
    int u = 0;
    double psi = 0;
};

inline std::vector<ReferenceRow> load_reference_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open reference table file: " + path);
    std::vector<ReferenceRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {  // "table,setting,u,psi"
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        ReferenceRow row;
        if (!std::getline(ls, field, ',')) continue;
        row.table = std::stoi(field);
        if (!std::getline(ls, row.setting, ',')) continue;
        if (!std::getline(ls, field, ',')) continue;
        row.u = std::stoi(field);
        if (!std::getline(ls, field, ',')) continue;
        row.psi = std::stod(field);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParameterError("reference table file has no data rows: " + path);
    return rows;
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

// Self-contained line chart of psi(u) against u, fixed [0, 1] vertical scale.
template <class Real>
std::string psi_svg(const std::vector<Real>& psi, const std::string& title = "ruin probability") {
    const double W = 640, H = 400;
    const double L = 64, R = 24, T = 40, B = 48;
    const double pw = W - L - R, ph = H - T - B;
    const std::size_t n = psi.size();
    const double xstep = n > 1 ? pw / double(n - 1) : 0.0;
    auto xpos = [&](std::size_t u) { return L + xstep * double(u); };
    auto ypos = [&](double p) { return T + ph * (1.0 - p); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
         "viewBox=\"0 0 640 400\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + title + "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double p = 0.25 * i;
        const double y = ypos(p);
        s += "<line x1=\"" + detail::svg_num(L) + "\" y1=\"" + detail::svg_num(y) +
             "\" x2=\"" + detail::svg_num(W - R) + "\" y2=\"" + detail::svg_num(y) +
             "\" stroke=\"#ddd\"/>\n";
        char lab[16];
        std::snprintf(lab, sizeof lab, "%.4f", p);
        s += "<text x=\"" + detail::svg_num(L - 8) + "\" y=\"" + detail::svg_num(y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + lab +
             "</text>\n";
    }
    const std::size_t tick = n > 16 ? (n + 15) / 16 : 1;
    for (std::size_t u = 0; u < n; u += tick) {
        const double x = xpos(u);
        s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(H - B) +
             "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(H - B + 5) +
             "\" stroke=\"#888\"/>\n";
        s += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(H - B + 20) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
             std::to_string(u) + "</text>\n";
    }
    s += "<text x=\"" + detail::svg_num(L + pw / 2) + "\" y=\"" + detail::svg_num(H - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">initial surplus "
         "u</text>\n";
    s += "<rect x=\"" + detail::svg_num(L) + "\" y=\"" + detail::svg_num(T) + "\" width=\"" +
         detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (n > 1) {
        std::string pts;
        for (std::size_t u = 0; u < n; ++u) {
            if (u) pts += " ";
            pts += detail::svg_num(xpos(u)) + "," + detail::svg_num(ypos(to_double(psi[u])));
        }
        s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1f6fb2\" "
             "stroke-width=\"2\"/>\n";
    }
    for (std::size_t u = 0; u < n; ++u) {
        s += "<circle cx=\"" + detail::svg_num(xpos(u)) + "\" cy=\"" +
             detail::svg_num(ypos(to_double(psi[u]))) + "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace biruin
