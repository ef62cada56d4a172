#ifndef PFQED_SCENARIO_OUTPUT_HPP
#define PFQED_SCENARIO_OUTPUT_HPP

#include "pfqed/core/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace pfqed::scenario {

using json = nlohmann::json;

inline std::string sha256_hex(const std::string& bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if(EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: EVP_Digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for(unsigned int i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if(!in) throw Error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Shortest text that reads back to the same double.
inline std::string format_number(double v)
{
    if(std::isnan(v)) return "nan";
    if(std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), r.ptr};
}

/// Column-typed table written as CSV with a mandatory header.
class CsvTable
{
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> columns) : m_columns(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return m_columns; }
    std::size_t rows() const noexcept { return m_rows.size(); }

    void add(std::vector<Cell> row)
    {
        if(row.size() != m_columns.size())
            throw InvalidArgument("CsvTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(m_columns.size()));
        m_rows.push_back(std::move(row));
    }

    /// Numeric column by name (integers are widened).
    std::vector<double> column(const std::string& name) const
    {
        const auto it = std::find(m_columns.begin(), m_columns.end(), name);
        if(it == m_columns.end()) throw InvalidArgument("CsvTable: no column " + name);
        const auto c = static_cast<std::size_t>(it - m_columns.begin());
        std::vector<double> out;
        for(const auto& r : m_rows)
        {
            if(const auto* d = std::get_if<double>(&r[c])) out.push_back(*d);
            else if(const auto* i = std::get_if<long long>(&r[c])) out.push_back(static_cast<double>(*i));
            else throw InvalidArgument("CsvTable: column " + name + " is not numeric");
        }
        return out;
    }

    std::string str() const
    {
        std::string s;
        for(std::size_t c = 0; c < m_columns.size(); ++c) s += (c ? "," : "") + m_columns[c];
        s += '\n';
        for(const auto& r : m_rows)
        {
            for(std::size_t c = 0; c < r.size(); ++c)
            {
                if(c) s += ',';
                if(const auto* d = std::get_if<double>(&r[c])) s += format_number(*d);
                else if(const auto* i = std::get_if<long long>(&r[c])) s += std::to_string(*i);
                else s += std::get<std::string>(r[c]);
            }
            s += '\n';
        }
        return s;
    }

private:
    std::vector<std::string> m_columns;
    std::vector<std::vector<Cell>> m_rows;
};

/// Minimal CSV reader for the tables this library writes.
inline CsvTable parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if(!std::getline(in, line)) throw InvalidArgument("parse_csv: missing header");
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(l);
        while(std::getline(ls, cell, ',')) out.push_back(cell);
        if(!l.empty() && l.back() == ',') out.emplace_back();
        return out;
    };
    CsvTable t(split(line));
    while(std::getline(in, line))
    {
        if(line.empty()) continue;
        std::vector<CsvTable::Cell> row;
        for(auto& cell : split(line))
        {
            double v = 0.0;
            const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if(r.ec == std::errc() && r.ptr == cell.data() + cell.size()) row.emplace_back(v);
            else row.emplace_back(cell);
        }
        t.add(std::move(row));
    }
    return t;
}

struct OutputRecord
{
    std::string file;
    std::string sha256;
    std::size_t bytes = 0;
};

/// Record of one scenario run. Written even when the run fails, listing
/// whatever outputs were completed.
struct RunManifest
{
    std::string scenario;
    std::string preset;
    std::string config_hash;
    json config;
    std::string library_version;
    double seconds = 0.0;
    std::size_t threads = 1;
    std::uint64_t seed = 0;
    double residual_max = 0.0;
    std::vector<OutputRecord> outputs;
    json metadata = json::object();
    std::vector<std::string> notes;
    std::string status = "running";
    std::string error;

    void note_residual(double r)
    {
        if(std::isfinite(r)) residual_max = std::max(residual_max, r);
    }

    json to_json() const
    {
        json j;
        j["scenario"] = scenario;
        j["preset"] = preset;
        j["config_hash"] = config_hash;
        j["config"] = config;
        j["library_version"] = library_version;
        j["timing"] = {{"seconds", seconds}};
        j["threads"] = threads;
        j["seed"] = seed;
        j["residual_max"] = residual_max;
        j["outputs"] = json::array();
        for(const auto& o : outputs) j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
        j["metadata"] = metadata;
        j["notes"] = notes;
        j["status"] = status;
        if(!error.empty()) j["error"] = error;
        return j;
    }
};

/// Writes files into one output directory and records their checksums.
class OutputSink
{
public:
    explicit OutputSink(std::filesystem::path dir, RunManifest& manifest) : m_dir(std::move(dir)), m_manifest(manifest)
    {
        std::filesystem::create_directories(m_dir);
    }

    const std::filesystem::path& dir() const noexcept { return m_dir; }

    void write(const std::string& name, const std::string& bytes)
    {
        const auto path = m_dir / name;
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if(!out) throw Error("cannot write " + path.string());
            out << bytes;
            if(!out) throw Error("write failed for " + path.string());
        }
        auto& list = m_manifest.outputs;
        list.erase(std::remove_if(list.begin(), list.end(), [&](const OutputRecord& r) { return r.file == name; }),
                   list.end());
        list.push_back({name, sha256_hex(bytes), bytes.size()});
    }

    void write_csv(const std::string& name, const CsvTable& t) { write(name, t.str()); }

    void write_manifest()
    {
        const auto path = m_dir / "manifest.json";
        std::ofstream out(path, std::ios::trunc);
        if(!out) throw Error("cannot write " + path.string());
        out << m_manifest.to_json().dump(2) << '\n';
    }

private:
    std::filesystem::path m_dir;
    RunManifest& m_manifest;
};

/// Line plot of columns `ys` against `x`, one polyline per series
/// (rows grouped by `group` when given).
inline std::string svg_plot(const CsvTable& t, const std::string& x, const std::vector<std::string>& ys,
                            const std::string& title)
{
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    const auto xs = t.column(x);
    std::vector<std::vector<double>> series;
    for(const auto& y : ys) series.push_back(t.column(y));

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for(double v : xs)
        if(std::isfinite(v)) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for(const auto& s : series)
        for(double v : s)
            if(std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    if(!(x1 > x0)) x1 = x0 + 1.0;
    if(!(y1 > y0)) y1 = y0 + 1.0;

    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << x << "</text>\n";
    s << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"10\">" << format_number(x0) << "</text>\n";
    s << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_number(x1) << "</text>\n";
    s << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(y0)
      << "</text>\n";
    s << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_number(y1) << "</text>\n";
    for(std::size_t k = 0; k < series.size(); ++k)
    {
        s << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" points=\"";
        for(std::size_t i = 0; i < xs.size(); ++i)
            if(std::isfinite(xs[i]) && std::isfinite(series[k][i])) s << px(xs[i]) << ',' << py(series[k][i]) << ' ';
        s << "\"/>\n";
        s << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * static_cast<double>(k) << "\" fill=\"" << colors[k % 6]
          << "\" font-size=\"11\">" << ys[k] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_OUTPUT_HPP
