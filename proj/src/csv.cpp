#include "kerrkick/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace kerrkick {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

CsvFile::CsvFile(std::filesystem::path path)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp") {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(tmp_path_, std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open " + tmp_path_.string());
}

CsvFile::~CsvFile() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void CsvFile::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvFile::comment_params(const SystemParams& p) {
    comment("chi = " + format_full(p.chi));
    comment("period = " + format_full(p.period));
    comment("epsilon = " + format_full(p.epsilon));
    comment("delta_epsilon = " + format_full(p.delta_epsilon));
    comment("dim = " + std::to_string(p.dim));
    comment("buffer = " + std::to_string(p.buffer));
    comment("kicks = " + std::to_string(p.kicks));
    comment("stride = " + std::to_string(p.stride));
}

void CsvFile::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvFile::begin_row() { first_field_ = true; }

void CsvFile::field(double v) { field_text(format_full(v)); }

void CsvFile::field_int(long v) { field_text(std::to_string(v)); }

void CsvFile::field_text(const std::string& v) {
    if (!first_field_) out_ << ",";
    out_ << v;
    first_field_ = false;
}

void CsvFile::end_row() { out_ << "\n"; }

void CsvFile::commit() {
    if (committed_) return;
    out_.flush();
    out_.close();
    if (!out_ && !out_.eof()) throw std::runtime_error("write failed for " + tmp_path_.string());
    std::filesystem::rename(tmp_path_, path_);
    committed_ = true;
}

}  // namespace kerrkick
