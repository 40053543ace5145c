#include "catclust/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "catclust/error.hpp"

namespace catclust {

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw DataError("unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

namespace {

std::optional<std::size_t> resolve_column(const std::optional<std::string>& spec,
                                          const std::vector<std::string>& header, std::size_t width) {
    if (!spec) return std::nullopt;
    if (auto it = std::find(header.begin(), header.end(), *spec); it != header.end())
        return static_cast<std::size_t>(it - header.begin());
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(spec->data(), spec->data() + spec->size(), index);
    if (ec != std::errc{} || ptr != spec->data() + spec->size() || index >= width)
        throw DataError("column '" + *spec + "' not found");
    return index;
}

}  // namespace

LoadedTable read_csv(std::istream& in, const CsvOptions& options) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line, options.delimiter));
    }
    if (rows.empty()) throw DataError("empty CSV input");

    std::vector<std::string> header;
    if (options.header) {
        header = std::move(rows.front());
        rows.erase(rows.begin());
        if (rows.empty()) throw DataError("CSV input has a header but no data rows");
    }
    const std::size_t width = options.header ? header.size() : rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width)
            throw DataError("ragged CSV: data row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " fields, expected " + std::to_string(width));
    }

    const auto id_col = resolve_column(options.id_column, header, width);
    const auto truth_col = resolve_column(options.truth_column, header, width);

    LoadedTable out;
    std::vector<std::vector<std::string>> data(rows.size());
    std::vector<std::string> truth_values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.ids.push_back(id_col ? rows[i][*id_col] : std::to_string(i + 1));
        if (truth_col) truth_values.push_back(rows[i][*truth_col]);
        for (std::size_t j = 0; j < width; ++j) {
            if (j == id_col || j == truth_col) continue;
            data[i].push_back(std::move(rows[i][j]));
        }
    }
    for (std::size_t j = 0; j < width; ++j) {
        if (j == id_col || j == truth_col) continue;
        out.column_names.push_back(options.header ? header[j] : std::to_string(j));
    }
    if (out.column_names.empty()) throw DataError("CSV input has no data columns");
    out.table = encode(data, options.gap_symbol);

    if (truth_col) {
        std::vector<long long> codes(truth_values.size());
        std::vector<std::string> seen;
        for (std::size_t i = 0; i < truth_values.size(); ++i) {
            auto it = std::find(seen.begin(), seen.end(), truth_values[i]);
            if (it == seen.end()) {
                seen.push_back(truth_values[i]);
                it = seen.end() - 1;
            }
            codes[i] = it - seen.begin();
        }
        out.truth = Clustering::from_labels(codes);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedTable read_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::istringstream in(read_file(path));
    return read_csv(in, options);
}

void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows, char delimiter,
               const std::vector<std::string>& header) {
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << delimiter;
            const std::string& f = row[j];
            if (f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos) {
                out << '"';
                for (char c : f) {
                    if (c == '"') out << '"';
                    out << c;
                }
                out << '"';
            } else {
                out << f;
            }
        }
        out << '\n';
    };
    if (!header.empty()) write_row(header);
    for (const auto& r : rows) write_row(r);
}

std::vector<FastaRecord> read_fasta(std::istream& in) {
    std::vector<FastaRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '>') {
            std::string header = line.substr(1);
            const auto end = header.find_first_of(" \t");
            records.push_back({header.substr(0, end), {}});
            if (records.back().id.empty()) throw DataError("FASTA record with an empty id");
            continue;
        }
        if (records.empty()) throw DataError("FASTA sequence data before the first header");
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) records.back().sequence += c;
        }
    }
    if (records.empty()) throw DataError("no FASTA records");
    return records;
}

void write_fasta(std::ostream& out, const std::vector<FastaRecord>& records, std::size_t width) {
    for (const auto& r : records) {
        out << '>' << r.id << '\n';
        if (width == 0) {
            out << r.sequence << '\n';
            continue;
        }
        for (std::size_t p = 0; p < r.sequence.size(); p += width) out << r.sequence.substr(p, width) << '\n';
    }
}

LoadedTable encode_alignment(const std::vector<FastaRecord>& records, const std::string& gap_chars) {
    if (records.empty()) throw DataError("no sequences");
    const std::size_t len = records.front().sequence.size();
    if (len == 0) throw DataError("empty sequence '" + records.front().id + "'");
    LoadedTable out;
    std::vector<std::vector<std::string>> table;
    table.reserve(records.size());
    const std::string gap = "-";
    for (const auto& r : records) {
        if (r.sequence.size() != len)
            throw DataError("aligned sequences differ in length: '" + r.id + "' has " +
                            std::to_string(r.sequence.size()) + " positions, expected " + std::to_string(len));
        std::vector<std::string> row;
        row.reserve(len);
        for (char c : r.sequence) {
            if (gap_chars.find(c) != std::string::npos) {
                row.push_back(gap);
            } else {
                row.emplace_back(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
            }
        }
        table.push_back(std::move(row));
        out.ids.push_back(r.id);
    }
    out.table = encode(table, gap);
    for (std::size_t j = 0; j < len; ++j) out.column_names.push_back(std::to_string(j + 1));
    return out;
}

LoadedTable read_fasta_alignment(const std::filesystem::path& path, const std::string& gap_chars) {
    std::istringstream in(read_file(path));
    return encode_alignment(read_fasta(in), gap_chars);
}

std::vector<FastaRecord> decode_alignment(const EncodedTable& table, const std::vector<std::string>& ids,
                                          char gap_char) {
    const auto& x = table.matrix;
    if (ids.size() != x.rows()) throw std::invalid_argument("one id per sequence required");
    std::vector<FastaRecord> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out[i].id = ids[i];
        out[i].sequence.reserve(x.cols());
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out[i].sequence += x.is_gap(i, j) ? std::string(1, gap_char) : table.alphabets[j][x.at(i, j)];
        }
    }
    return out;
}

namespace {

void append_number(std::string& line, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

}  // namespace

void write_dissimilarity_csv(std::ostream& out, const DissimilarityMatrix& d) {
    std::string line;
    for (std::size_t i = 0; i < d.size(); ++i) {
        line.clear();
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (j) line += ',';
            append_number(line, d(i, j));
        }
        line += '\n';
        out << line;
    }
}

void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids, const Clustering& labels) {
    if (ids.size() != labels.size()) throw std::invalid_argument("one id per label required");
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) rows.push_back({ids[i], std::to_string(labels[i])});
    write_csv(out, rows, ',', {"id", "cluster"});
}

void write_incidence_csv(std::ostream& out, const IncidenceMatrix& w) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t b = 0; b < w.columns(); ++b) {
            if (b) out << ',';
            out << w.at(i, b);
        }
        out << '\n';
    }
}

}  // namespace catclust
