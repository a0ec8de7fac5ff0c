#include "permbound/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "permbound/error.hpp"

namespace permbound {

namespace {

double parse_entry(std::string_view tok, std::size_t line_no) {
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
        tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
        throw DomainError("line " + std::to_string(line_no) + ": cannot parse entry '" +
                          std::string(tok) + "'");
    return v;
}

bool skip_line(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

std::vector<double> split_whitespace(const std::string& line, std::size_t line_no) {
    std::vector<double> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(parse_entry(tok, line_no));
    return out;
}

std::vector<double> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(parse_entry(std::string_view(line).substr(start, comma - start), line_no));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no)
        if (!skip_line(line)) lines.emplace_back(no, line);
    if (lines.empty()) throw DomainError("empty matrix input");

    std::vector<std::vector<double>> rows;
    if (lines.front().second.find(',') != std::string::npos) {
        for (const auto& [no, text] : lines) rows.push_back(split_csv(text, no));
        return Matrix::from_rows(rows);
    }

    const auto header = split_whitespace(lines.front().second, lines.front().first);
    if (header.size() != 2 || header[0] < 1 || header[1] < 1 ||
        header[0] != std::floor(header[0]) || header[1] != std::floor(header[1]))
        throw DomainError("first line must be 'n_rows n_cols'");
    const auto n_rows = static_cast<std::size_t>(header[0]);
    const auto n_cols = static_cast<std::size_t>(header[1]);
    if (lines.size() - 1 != n_rows)
        throw DimensionError("expected " + std::to_string(n_rows) + " rows, found " +
                             std::to_string(lines.size() - 1));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        rows.push_back(split_whitespace(lines[i].second, lines[i].first));
        if (rows.back().size() != n_cols)
            throw DimensionError("line " + std::to_string(lines[i].first) + ": expected " +
                                 std::to_string(n_cols) + " entries");
    }
    return Matrix::from_rows(rows);
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open matrix file '" + path + "'");
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& a) {
    const auto old_flags = out.flags();
    const auto old_prec = out.precision();
    out << a.rows() << ' ' << a.cols() << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
        out << '\n';
    }
    out.flags(old_flags);
    out.precision(old_prec);
}

std::string format_matrix(const Matrix& a) {
    std::ostringstream ss;
    write_matrix(ss, a);
    return ss.str();
}

}  // namespace permbound
