#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qgc::tools {

/// Files produced by a command, held in memory until the computation has
/// finished and then written by a single writer.
class OutputSet {
 public:
  /// `relative` may contain subdirectories; a repeated name replaces the
  /// earlier content.
  void add(const std::string& relative, std::string content);

  const std::map<std::string, std::string>& files() const noexcept { return files_; }

  /// Writes every file under `dir`. On failure, removes whatever this call
  /// created (files and directories) and throws IoError.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace qgc::tools
