#include "spaace/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spaace {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string ms_cell(const std::optional<double>& seconds) {
    return seconds ? fixed(*seconds * 1e3, 4) : "n/a";
}

std::array<std::string, 5> cells(const ComparisonRow& row) {
    const std::string mode(to_string(row.mode));
    if (!row.ok() || !row.metrics) {
        const std::string err = "ERR(" + (row.error.empty() ? std::string("no metrics") : row.error) + ")";
        return {row.label, mode, err, err, err};
    }
    const auto& m = *row.metrics;
    return {row.label, mode, fixed(m.peak_excursion_pct(), 4), ms_cell(m.settling_time), ms_cell(m.rise_time)};
}

constexpr std::array<const char*, 5> kColumns{"case", "mode", "overshoot_pct", "settling_ms", "rise_ms"};

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "t,x_ref,x_ref_mod,x\n";
    for (const auto& s : trace.samples) {
        out << format_double(s.t) << ',' << format_double(s.x_ref) << ',' << format_double(s.x_ref_mod) << ','
            << format_double(s.x) << '\n';
    }
}

Trace read_trace_csv(std::istream& in, double t_sample) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x_ref,x_ref_mod,x") throw Error("unexpected trace header '" + line + "'");
    Trace trace;
    trace.t_sample = t_sample;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 4> v{};
        std::size_t pos = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto comma = line.find(',', pos);
            const bool last = i + 1 == v.size();
            if (last != (comma == std::string::npos)) throw Error("row " + std::to_string(row) + ": expected 4 fields");
            const auto field = std::string_view(line).substr(pos, last ? std::string::npos : comma - pos);
            v[i] = parse_double(field);
            pos = comma + 1;
        }
        trace.samples.push_back(Sample{v[0], v[1], v[2], v[3]});
    }
    if (trace.samples.size() >= 2) trace.dt = trace.samples[1].t - trace.samples[0].t;
    return trace;
}

void write_metrics_table(std::ostream& out, const std::string& label, Mode mode, const StepMetrics& m) {
    auto line = [&](const std::string& key, const std::string& value) {
        out << key << std::string(key.size() < 18 ? 18 - key.size() : 1, ' ') << value << '\n';
    };
    line("case", label);
    line("mode", std::string(to_string(mode)));
    line("overshoot_pct", fixed(m.overshoot_pct, 4));
    line("undershoot_pct", fixed(m.undershoot_pct, 4));
    line("settling_ms", m.settling_time ? fixed(*m.settling_time * 1e3, 4) : "not settled");
    line("rise_ms", m.rise_time ? fixed(*m.rise_time * 1e3, 4) : "n/a");
    line("peak_value", format_double(m.peak_value));
    line("trough_value", format_double(m.trough_value));
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
    out << '\n';
    for (const auto& row : rows) {
        const auto c = cells(row);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
        out << '\n';
    }
}

void write_comparison_table(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    std::vector<std::array<std::string, 5>> table;
    table.push_back({kColumns[0], kColumns[1], kColumns[2], kColumns[3], kColumns[4]});
    for (const auto& row : rows) table.push_back(cells(row));
    std::array<std::size_t, 5> width{};
    for (const auto& r : table) {
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : table) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            // Text columns left-aligned, numbers right-aligned.
            const std::string pad(width[i] - r[i].size(), ' ');
            line += i < 2 ? r[i] + pad : pad + r[i];
            if (i + 1 < r.size()) line += "  ";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
}

void write_trace_svg(std::ostream& out, const Trace& trace, const std::string& title) {
    constexpr double w = 800, h = 420, left = 70, right = 160, top = 40, bottom = 55;
    const double pw = w - left - right;
    const double ph = h - top - bottom;

    double t0 = 0, t1 = 1, lo = 0, hi = 1;
    if (!trace.empty()) {
        t0 = trace.samples.front().t;
        t1 = trace.samples.back().t;
        lo = hi = trace.samples.front().x;
        for (const auto& s : trace.samples) {
            lo = std::min({lo, s.x, s.x_ref, s.x_ref_mod});
            hi = std::max({hi, s.x, s.x_ref, s.x_ref_mod});
        }
    }
    if (t1 <= t0) t1 = t0 + 1;
    const double pad = (hi - lo) * 0.05 + 1e-9;
    lo -= pad;
    hi += pad;
    auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
    auto py = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

    std::string escaped;
    for (const char c : title) {
        if (c == '<') escaped += "&lt;";
        else if (c == '>') escaped += "&gt;";
        else if (c == '&') escaped += "&amp;";
        else escaped += c;
    }

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
        << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escaped << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double t = t0 + (t1 - t0) * i / 5;
        const double v = lo + (hi - lo) * i / 5;
        out << "<line x1=\"" << px(t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(t) << "\" y2=\"" << top + ph + 5
            << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 19 << "\" text-anchor=\"middle\">" << fixed(t * 1e3, 1)
            << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left << "\" y2=\"" << py(v)
            << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << fixed(v, 2)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">time (ms)</text>\n";
    out << "<text transform=\"translate(18 " << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">current (pu)</text>\n";

    struct Series {
        const char* name;
        const char* color;
        double Sample::*field;
    };
    const std::array<Series, 3> series{{{"x_ref", "#888888", &Sample::x_ref},
                                        {"x_ref_mod", "#d62728", &Sample::x_ref_mod},
                                        {"x", "#1f77b4", &Sample::x}}};
    // Decimate to roughly two points per pixel column.
    const std::size_t stride = std::max<std::size_t>(1, trace.size() / static_cast<std::size_t>(2 * pw));
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.3\" points=\"";
        for (std::size_t k = 0; k < trace.size(); k += stride) {
            const auto& p = trace.samples[k];
            out << fixed(px(p.t), 2) << ',' << fixed(py(p.*s.field), 2) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 15 + 20 * static_cast<double>(si);
        out << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace spaace
