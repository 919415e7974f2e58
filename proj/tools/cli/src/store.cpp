#include "lrising_cli/store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lrising::cli {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool valid_record(const std::string& line) {
  if (line.empty()) return false;
  return nlohmann::json::accept(line);
}

struct TailSplit {
  StoreScan scan;
  /// Bytes [0, keep) hold complete records.
  std::size_t keep = 0;
};

// Walks the log line by line. Everything after the last valid, newline
// terminated record that is itself bad belongs to the corrupt tail.
TailSplit split_tail(const std::string& text) {
  TailSplit out;
  std::size_t pos = 0, bad_since_good = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::size_t end = terminated ? nl : text.size();
    const std::string line = text.substr(pos, end - pos);
    if (terminated && valid_record(line)) {
      ++out.scan.records;
      out.scan.corrupt_interior += bad_since_good;
      bad_since_good = 0;
      out.keep = nl + 1;
    } else if (!line.empty() || !terminated) {
      ++bad_since_good;
    }
    pos = terminated ? nl + 1 : text.size();
  }
  out.scan.quarantined_bytes = text.size() - out.keep;
  return out;
}

}  // namespace

StoreScan inspect_log(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return split_tail(slurp(path)).scan;
}

ResultsStore::ResultsStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  if (std::filesystem::exists(path_)) {
    const std::string text = slurp(path_);
    const TailSplit split = split_tail(text);
    scan_ = split.scan;
    if (split.keep < text.size()) {
      std::ofstream q(quarantine_path(), std::ios::binary | std::ios::app);
      q << text.substr(split.keep);
      if (text.back() != '\n') q << '\n';
      if (!q) throw std::runtime_error("cannot write quarantine file " + quarantine_path().string());
      q.close();
      std::filesystem::resize_file(path_, split.keep);
    }
  }
  writer_ = std::jthread([this](std::stop_token st) { writer_loop(st); });
}

ResultsStore::~ResultsStore() {
  try {
    flush();
  } catch (...) {
  }
  writer_.request_stop();
  wake_.notify_all();
}

std::filesystem::path ResultsStore::quarantine_path() const {
  auto q = path_;
  q += ".quarantine";
  return q;
}

void ResultsStore::append(std::string line) {
  if (line.find('\n') != std::string::npos) throw std::invalid_argument("a record must be a single line");
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(line));
  }
  wake_.notify_one();
}

void ResultsStore::flush() {
  std::unique_lock lock(mutex_);
  drained_.wait(lock, [&] { return queue_.empty() && in_flight_ == 0; });
  if (!error_.empty()) {
    std::string e;
    std::swap(e, error_);
    throw std::runtime_error(e);
  }
}

void ResultsStore::writer_loop(std::stop_token stop) {
  std::unique_lock lock(mutex_);
  while (true) {
    wake_.wait(lock, stop, [&] { return !queue_.empty(); });
    if (queue_.empty()) return;  // stop requested and nothing left
    std::string line = std::move(queue_.front());
    queue_.pop_front();
    ++in_flight_;
    lock.unlock();
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << line << '\n';
    out.flush();
    const bool good = static_cast<bool>(out);
    lock.lock();
    if (!good) error_ = "cannot append to results log " + path_.string();
    --in_flight_;
    drained_.notify_all();
  }
}

}  // namespace lrising::cli
