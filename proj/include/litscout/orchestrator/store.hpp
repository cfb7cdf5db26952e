#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <openssl/rand.h>

#include "litscout/orchestrator/session.hpp"

namespace litscout::orchestrator {

/// 128 random bits as 32 lowercase hex digits.
inline std::string new_session_id() {
  unsigned char bytes[16];
  if (RAND_bytes(bytes, sizeof bytes) != 1) throw IoError("random source unavailable");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : bytes) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

inline bool is_session_id(std::string_view id) {
  return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

/// Replay of a log that stopped early: the state up to the last good line
/// and the error that stopped it.
struct LoadOutcome {
  std::optional<SearchSession> session;
  std::optional<LoadError> error;
};

/// One append-only JSONL event log per session, `<dir>/<session_id>.jsonl`.
/// Each event is written with a single O_APPEND write, so readers see a
/// prefix of complete lines plus at most one partial line.
class EventStore {
 public:
  explicit EventStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw IoError("cannot create store directory '" + dir_.string() + "'");
    }
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::filesystem::path path_for(std::string_view session_id) const {
    if (!is_session_id(session_id)) {
      throw NotFoundError("no session '" + std::string(session_id) + "'");
    }
    return dir_ / (std::string(session_id) + ".jsonl");
  }

  bool exists(std::string_view session_id) const {
    return is_session_id(session_id) && std::filesystem::exists(path_for(session_id));
  }

  std::vector<std::string> session_ids() const {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      const auto stem = entry.path().stem().string();
      if (entry.path().extension() == ".jsonl" && is_session_id(stem)) out.push_back(stem);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void append(std::string_view session_id, const json& event) {
    const auto path = path_for(session_id);
    const std::string line = event.dump() + "\n";
    std::lock_guard lock(mutex_for(session_id));
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
    std::size_t done = 0;
    while (done < line.size()) {
      const auto n = ::write(fd, line.data() + done, line.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        const std::string why = std::strerror(errno);
        ::close(fd);
        throw IoError("cannot append to '" + path.string() + "': " + why);
      }
      done += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }

  /// Strict replay: every line must parse and apply, including the last.
  SearchSession load(std::string_view session_id) const {
    auto out = replay(session_id, false);
    if (out.error) throw *out.error;
    return std::move(*out.session);
  }

  /// Replay for readers racing a writer: an unterminated final line is
  /// ignored; any other bad line still fails.
  SearchSession snapshot(std::string_view session_id) const {
    auto out = replay(session_id, true);
    if (out.error) throw *out.error;
    return std::move(*out.session);
  }

  /// Replays as far as possible and reports where it stopped.
  LoadOutcome replay(std::string_view session_id, bool skip_partial_tail = false) const {
    const auto path = path_for(session_id);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("no session '" + std::string(session_id) + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    LoadOutcome out;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
      ++line_no;
      const auto nl = text.find('\n', pos);
      const bool terminated = nl != std::string::npos;
      const std::string line = text.substr(pos, terminated ? nl - pos : std::string::npos);
      pos = terminated ? nl + 1 : text.size();
      if (!terminated && skip_partial_tail) break;
      try {
        if (!terminated) throw InvalidValue("truncated event line");
        apply_event(out.session, json::parse(line));
      } catch (const std::exception& e) {
        out.error = LoadError(path.string(), line_no, e.what());
        return out;
      }
    }
    if (!out.session) out.error = LoadError(path.string(), line_no + 1, "empty event log");
    return out;
  }

 private:
  std::mutex& mutex_for(std::string_view session_id) {
    std::lock_guard lock(table_mutex_);
    auto& m = mutexes_[std::string(session_id)];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
  }

  std::filesystem::path dir_;
  std::mutex table_mutex_;
  std::unordered_map<std::string, std::unique_ptr<std::mutex>> mutexes_;
};

}  // namespace litscout::orchestrator
