#include "ramemit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ramemit {

namespace {

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string num(double v)
{
    return fmt("%g", v);
}

std::string db(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt("%.1f", v);
}

std::string percent(double ber)
{
    return fmt("%.1f", ber * 100.0) + "%";
}

/// Left-aligned columns separated by " | " with outer bars.
std::string render_grid(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream out;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        out << '|';
        for (std::size_t i = 0; i < width.size(); ++i) {
            std::string cell = i < rows[ri].size() ? rows[ri][i] : "";
            out << ' ' << cell << std::string(width[i] - cell.size(), ' ') << " |";
        }
        out << '\n';
        if (ri == 0) {
            out << '|';
            for (auto w : width) out << std::string(w + 2, '-') << '|';
            out << '\n';
        }
    }
    return out.str();
}

template <typename T>
std::vector<T> unique_in_order(const std::vector<T>& in)
{
    std::vector<T> out;
    for (const auto& v : in) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

}  // namespace

TableFormat parse_table_format(std::string_view name)
{
    if (name == "csv") return TableFormat::csv;
    if (name == "text") return TableFormat::text;
    throw Error(ErrorKind::config, "unknown table format '" + std::string(name) + "'");
}

std::string emit_tables(const BerReport& report, TableFormat format)
{
    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << "bit_time_ms,distance_cm,snr_db,est_snr_db,bits_sent,bit_errors,frames_lost,error,ber\n";
        for (const auto& c : report.cells) {
            out << num(c.bit_time_ms) << ',' << num(c.distance_cm) << ',' << db(c.snr_db) << ','
                << (c.error.empty() ? db(c.est_snr_db) : "") << ',' << c.bits_sent << ',' << c.bit_errors << ','
                << c.frames_lost << ',' << c.error << ',' << (c.error.empty() ? percent(c.ber) : "") << '\n';
        }
        return out.str();
    }

    std::vector<double> bit_times, distances;
    for (const auto& c : report.cells) {
        bit_times.push_back(c.bit_time_ms);
        distances.push_back(c.distance_cm);
    }
    bit_times = unique_in_order(bit_times);
    distances = unique_in_order(distances);

    auto grid = [&](auto value) {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header{""};
        for (double d : distances) header.push_back("d = " + num(d) + " cm");
        rows.push_back(header);
        for (double bt : bit_times) {
            std::vector<std::string> row{"t = " + num(bt) + " ms"};
            for (double d : distances) {
                const BerCell* c = report.find(bt, d);
                row.push_back(c == nullptr || !c->error.empty() ? "-" : value(*c));
            }
            rows.push_back(row);
        }
        return render_grid(rows);
    };

    std::ostringstream out;
    out << "Bit error rate (" << report.trials << " trials x " << report.payload_bits << " bits per cell)\n";
    out << grid([](const BerCell& c) { return percent(c.ber); });
    out << "\nEstimated SNR (dB)\n";
    out << grid([](const BerCell& c) { return db(c.est_snr_db); });
    out << "\nFrames lost\n";
    out << grid([](const BerCell& c) { return std::to_string(c.frames_lost); });
    return out.str();
}

std::string emit_exfil_table(const std::vector<ExfilItem>& items, const std::vector<double>& bit_times_ms,
                             TableFormat format)
{
    std::vector<std::string> notes;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"item", "size_bits"};
    for (double bt : bit_times_ms) header.push_back("t = " + num(bt) + " ms");
    header.push_back("framing_overhead");
    rows.push_back(header);

    for (const auto& item : items) {
        std::vector<std::string> row{item.name, std::to_string(item.size_bits)};
        std::string overhead;
        for (double bt : bit_times_ms) {
            const ExfilTime t = exfil_time(item, bt);
            std::string cell = num(t.payload_s) + " s";
            auto ref = item.reference_s.find(bt);
            if (ref != item.reference_s.end() && std::abs(ref->second - t.payload_s) > 1e-9 * ref->second) {
                cell += " *";
                notes.push_back(item.name + " at t = " + num(bt) + " ms: computed " + num(t.payload_s) +
                                " s (size x bit time), reference table lists " + num(ref->second) + " s");
            }
            row.push_back(cell);
            if (!overhead.empty()) overhead += " / ";
            overhead += num(t.overhead_s) + " s";
        }
        row.push_back(overhead);
        rows.push_back(row);
    }

    std::ostringstream out;
    if (format == TableFormat::csv) {
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                const bool quote = r[i].find(',') != std::string::npos;
                out << (i ? "," : "") << (quote ? "\"" : "") << r[i] << (quote ? "\"" : "");
            }
            out << '\n';
        }
        for (const auto& n : notes) out << "# " << n << '\n';
        return out.str();
    }
    out << render_grid(rows);
    for (const auto& n : notes) out << "* " << n << '\n';
    return out.str();
}

}  // namespace ramemit
