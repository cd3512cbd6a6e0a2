#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kerrkick/fock.hpp"

namespace kerrkick {

/// Full-round-trip decimal formatting (17 significant digits).
std::string format_full(double v);

/// Write a whole file atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

/// CSV writer with `#` metadata comments and atomic commit: the file is
/// written to "<path>.tmp" and renamed into place by commit(), so an
/// interrupted run never leaves a truncated file at the final path.
class CsvFile {
  public:
    explicit CsvFile(std::filesystem::path path);
    ~CsvFile();

    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void comment(const std::string& text);
    void comment_params(const SystemParams& p);
    void header(const std::vector<std::string>& columns);

    void begin_row();
    void field(double v);
    void field_int(long v);
    void field_text(const std::string& v);
    void end_row();

    /// Flush and atomically rename into the final path.
    void commit();

  private:
    std::filesystem::path path_;
    std::filesystem::path tmp_path_;
    std::ofstream out_;
    bool first_field_ = true;
    bool committed_ = false;
};

}  // namespace kerrkick
