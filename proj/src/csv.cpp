#include "hjlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hjlab {

namespace {

double parse_cell(const std::string& cell, const std::filesystem::path& path, long row) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                                 ": non-numeric cell '" + cell + "'");
    return v;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

// A dropped interior row shows up as a doubled coordinate gap.
void check_uniform_spacing(const std::vector<double>& xs,
                           const std::filesystem::path& path) {
    if (xs.size() < 2) throw std::runtime_error(path.string() + ": fewer than 2 data rows");
    double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(dx > 0)) throw std::runtime_error(path.string() + ": x column not increasing");
    double tol = 1e-9 * (std::abs(dx) + std::abs(xs.back() - xs.front()));
    for (std::size_t k = 1; k < xs.size(); ++k) {
        double gap = xs[k] - xs[k - 1];
        if (std::abs(gap - dx) > tol)
            throw std::runtime_error(path.string() + ": row " + std::to_string(k + 1) +
                                     ": non-uniform node spacing (missing or extra row?)");
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_field_csv(const ScalarField& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    ensure(out.good(), "cannot open for writing: " + path.string());
    out << "x,u\n";
    for (int i = 0; i < f.size(); ++i)
        out << format_double(f.grid.coord(i)) << ',' << format_double(f.values[i]) << '\n';
    out.flush();
    ensure(out.good(), "write failed: " + path.string());
}

ScalarField read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    ensure(in.good(), "cannot open for reading: " + path.string());
    std::string line;
    ensure(static_cast<bool>(std::getline(in, line)), path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,u")
        throw std::runtime_error(path.string() + ": wrong header '" + line + "', expected 'x,u'");
    std::vector<double> xs, us;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != 2)
            throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                                     ": expected 2 cells, got " + std::to_string(cells.size()));
        xs.push_back(parse_cell(cells[0], path, row));
        us.push_back(parse_cell(cells[1], path, row));
    }
    if (xs.size() < 3) throw std::runtime_error(path.string() + ": fewer than 3 data rows");
    check_uniform_spacing(xs, path);
    Grid g = make_uniform_grid(xs.front(), xs.back(), static_cast<int>(xs.size()));
    ScalarField f(g);
    f.values = std::move(us);
    return f;
}

ScalarField read_field_csv(const std::filesystem::path& path, const Grid& expected) {
    ScalarField f = read_field_csv(path);
    if (!f.grid.same_as(expected))
        throw std::runtime_error(path.string() + ": node count or range mismatch with declared grid (" +
                                 std::to_string(f.grid.n) + " nodes on [" + format_double(f.grid.x_min) +
                                 "," + format_double(f.grid.x_max) + "], declared " +
                                 std::to_string(expected.n) + " on [" + format_double(expected.x_min) +
                                 "," + format_double(expected.x_max) + "])");
    return f;
}

ScalarField field_csv_round_trip(const ScalarField& f, const std::filesystem::path& path) {
    write_field_csv(f, path);
    return read_field_csv(path, f.grid);
}

void write_history_csv(const std::vector<double>& times,
                       const std::vector<ScalarField>& fields,
                       const std::filesystem::path& path) {
    ensure_arg(times.size() == fields.size(), "history: times/fields length mismatch");
    std::ofstream out(path, std::ios::binary);
    ensure(out.good(), "cannot open for writing: " + path.string());
    out << "t,x,u\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        const ScalarField& f = fields[k];
        const std::string ts = format_double(times[k]);
        for (int i = 0; i < f.size(); ++i)
            out << ts << ',' << format_double(f.grid.coord(i)) << ',' << format_double(f.values[i]) << '\n';
    }
    out.flush();
    ensure(out.good(), "write failed: " + path.string());
}

void write_field_dat(const ScalarField& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    ensure(out.good(), "cannot open for writing: " + path.string());
    for (int i = 0; i < f.size(); ++i)
        out << format_double(f.grid.coord(i)) << ' ' << format_double(f.values[i]) << '\n';
    ensure(out.good(), "write failed: " + path.string());
}

void write_series_dat(const std::vector<double>& t, const std::vector<double>& y,
                      const std::filesystem::path& path) {
    ensure_arg(t.size() == y.size(), "series: length mismatch");
    std::ofstream out(path, std::ios::binary);
    ensure(out.good(), "cannot open for writing: " + path.string());
    for (std::size_t k = 0; k < t.size(); ++k)
        out << format_double(t[k]) << ' ' << format_double(y[k]) << '\n';
    ensure(out.good(), "write failed: " + path.string());
}

std::pair<std::vector<double>, std::vector<ScalarField>>
read_history_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    ensure(in.good(), "cannot open for reading: " + path.string());
    std::string line;
    ensure(static_cast<bool>(std::getline(in, line)), path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x,u")
        throw std::runtime_error(path.string() + ": wrong header '" + line + "', expected 't,x,u'");

    std::vector<double> times;
    std::vector<std::vector<double>> xs_per_slice, us_per_slice;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != 3)
            throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                                     ": expected 3 cells, got " + std::to_string(cells.size()));
        double t = parse_cell(cells[0], path, row);
        double x = parse_cell(cells[1], path, row);
        double u = parse_cell(cells[2], path, row);
        if (times.empty() || t != times.back()) {
            if (!times.empty() && t < times.back())
                throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                                         ": time slices not in increasing order");
            times.push_back(t);
            xs_per_slice.emplace_back();
            us_per_slice.emplace_back();
        }
        xs_per_slice.back().push_back(x);
        us_per_slice.back().push_back(u);
    }
    ensure(!times.empty(), path.string() + ": no data rows");

    std::vector<ScalarField> fields;
    fields.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        check_uniform_spacing(xs_per_slice[k], path);
        if (xs_per_slice[k].size() != xs_per_slice[0].size())
            throw std::runtime_error(path.string() + ": slice " + std::to_string(k) +
                                     ": node count differs from first slice");
        Grid g = make_uniform_grid(xs_per_slice[k].front(), xs_per_slice[k].back(),
                                   static_cast<int>(xs_per_slice[k].size()));
        ScalarField f(g);
        f.values = std::move(us_per_slice[k]);
        fields.push_back(std::move(f));
    }
    return {times, fields};
}

} // namespace hjlab
