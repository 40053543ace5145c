#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catclust/categorical.hpp"
#include "catclust/dissimilarity.hpp"
#include "catclust/ensemble.hpp"
#include "catclust/hclust.hpp"

namespace catclust {

struct CsvOptions {
    char delimiter = ',';
    bool header = false;
    std::optional<std::string> gap_symbol;
    /// Column holding row identifiers; excluded from the data.
    std::optional<std::string> id_column;
    /// Column holding true labels; excluded from the data.
    std::optional<std::string> truth_column;
};

/// Loaded table: encoded categorical data plus optional ids and truth.
struct LoadedTable {
    EncodedTable table;
    std::vector<std::string> ids;  // row ids; defaults to 1-based row numbers
    std::optional<Clustering> truth;
    std::vector<std::string> column_names;
};

/// Splits one CSV record. Double-quoted fields may contain the delimiter
/// and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line, char delimiter);

/// id_column / truth_column may name a header field or give a 0-based
/// column index. Throws DataError on malformed content.
LoadedTable read_csv(std::istream& in, const CsvOptions& options);
LoadedTable read_csv(const std::filesystem::path& path, const CsvOptions& options);

void write_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows, char delimiter = ',',
               const std::vector<std::string>& header = {});

struct FastaRecord {
    std::string id;
    std::string sequence;
};

/// Multi-line FASTA; ids are the header text up to the first whitespace.
std::vector<FastaRecord> read_fasta(std::istream& in);
void write_fasta(std::ostream& out, const std::vector<FastaRecord>& records, std::size_t width = 0);

/// Aligned sequences to one column per position. Symbols are upper-cased;
/// every character in `gap_chars` becomes a gap. Throws DataError when the
/// records differ in length.
LoadedTable encode_alignment(const std::vector<FastaRecord>& records, const std::string& gap_chars = "-.");
LoadedTable read_fasta_alignment(const std::filesystem::path& path, const std::string& gap_chars = "-.");

/// Inverse of encode_alignment, gaps written as gap_char.
std::vector<FastaRecord> decode_alignment(const EncodedTable& table, const std::vector<std::string>& ids,
                                          char gap_char = '-');

/// Square CSV of dissimilarity values, no header.
void write_dissimilarity_csv(std::ostream& out, const DissimilarityMatrix& d);

/// `id,cluster` with a header line, rows in input order.
void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids, const Clustering& labels);

/// n x B integer CSV, no header.
void write_incidence_csv(std::ostream& out, const IncidenceMatrix& w);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace catclust
