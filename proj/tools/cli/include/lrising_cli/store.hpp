#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>

namespace lrising::cli {

struct StoreScan {
  std::size_t records = 0;
  /// Malformed lines before the last good record; left untouched.
  std::size_t corrupt_interior = 0;
  /// Bytes moved from the tail of the log into the quarantine file.
  std::size_t quarantined_bytes = 0;
};

/// Append-only JSONL results log. Opening it checks the tail: a trailing line
/// that is unterminated or not valid JSON is appended to `<log>.quarantine`
/// and cut from the log. Earlier records are never rewritten.
class ResultsStore {
 public:
  explicit ResultsStore(std::filesystem::path path);
  ~ResultsStore();
  ResultsStore(const ResultsStore&) = delete;
  ResultsStore& operator=(const ResultsStore&) = delete;

  const StoreScan& scan() const { return scan_; }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path quarantine_path() const;

  /// Queues one record (a single line without newline). Records are written
  /// in submission order by one writer thread.
  void append(std::string line);
  /// Waits until every queued record is on disk; rethrows write failures.
  void flush();

 private:
  void writer_loop(std::stop_token stop);

  std::filesystem::path path_;
  StoreScan scan_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::condition_variable drained_;
  std::deque<std::string> queue_;
  std::size_t in_flight_ = 0;
  std::string error_;
  std::jthread writer_;
};

/// Checks a log without modifying it.
StoreScan inspect_log(const std::filesystem::path& path);

}  // namespace lrising::cli
