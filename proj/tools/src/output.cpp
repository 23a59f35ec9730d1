#include "qgcnet/tools/output.hpp"

#include <fstream>

#include "qgcnet/core.hpp"

namespace qgc::tools {

namespace fs = std::filesystem;

void OutputSet::add(const std::string& relative, std::string content) {
  const fs::path rel(relative);
  if (rel.empty() || rel.is_absolute() || rel.lexically_normal().string().rfind("..", 0) == 0) {
    throw Error(Errc::IoError, "output name must be a relative path inside the output directory: " + relative);
  }
  files_[relative] = std::move(content);
}

std::vector<fs::path> OutputSet::commit(const fs::path& dir) const {
  std::vector<fs::path> created_dirs;
  std::vector<fs::path> written;

  const auto make_dirs = [&](const fs::path& target) {
    std::vector<fs::path> missing;
    for (fs::path p = target; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
      fs::create_directory(*it);
      created_dirs.push_back(*it);
    }
  };

  try {
    make_dirs(dir);
    if (!fs::is_directory(dir)) throw Error(Errc::IoError, dir.string() + " is not a directory");
    for (const auto& [name, content] : files_) {
      const fs::path target = dir / name;
      make_dirs(target.parent_path());
      std::ofstream out(target, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::IoError, "cannot write " + target.string());
      written.push_back(target);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw Error(Errc::IoError, "failed writing " + target.string());
    }
  } catch (const std::exception& e) {
    std::error_code ignored;
    for (const auto& f : written) fs::remove(f, ignored);
    for (auto it = created_dirs.rbegin(); it != created_dirs.rend(); ++it) fs::remove(*it, ignored);
    if (const auto* err = dynamic_cast<const Error*>(&e)) throw *err;
    throw Error(Errc::IoError, e.what());
  }
  return written;
}

}  // namespace qgc::tools
