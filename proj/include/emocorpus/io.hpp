#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace emocorpus {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Builds RFC 4180 style CSV text with '\n' line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(std::vector<std::string> fields);
    const std::string& str() const { return text_; }

private:
    void append(const std::vector<std::string>& fields);

    std::size_t width_;
    std::string text_;
};

/// Splits CSV text into rows of fields; understands quoted fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Writes to a sibling temporary file then renames over `path`.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions from fn
/// are rethrown (the first one) after every worker has stopped.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace emocorpus
