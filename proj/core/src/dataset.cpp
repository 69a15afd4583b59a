#include "hmdiris/dataset.hpp"

#include <algorithm>
#include <charconv>

#include "hmdiris/error.hpp"

namespace hmdiris {

namespace fs = std::filesystem;

std::vector<IdentityFrames> scan_dataset(const fs::path& root) {
  const fs::path images = root / "images";
  if (!fs::is_directory(images)) {
    throw Error(ErrorCode::DatasetNotFound, "missing directory " + images.string());
  }

  std::vector<IdentityFrames> identities;
  for (const auto& dir : fs::directory_iterator(images)) {
    if (!dir.is_directory()) continue;
    IdentityFrames id{dir.path().filename().string(), {}};
    for (const auto& file : fs::directory_iterator(dir.path())) {
      if (!file.is_regular_file() || file.path().extension() != ".png") continue;
      const std::string stem = file.path().stem().string();
      std::size_t frame = 0;
      const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), frame);
      if (ec != std::errc() || ptr != stem.data() + stem.size()) {
        throw Error(ErrorCode::DatasetNotFound,
                    "frame file name is not numeric: " + file.path().string());
      }
      id.captures.push_back({id.identity_id, frame, file.path(),
                             root / "labels" / id.identity_id / file.path().filename()});
    }
    if (id.captures.empty()) continue;
    std::sort(id.captures.begin(), id.captures.end(),
              [](const CaptureRef& a, const CaptureRef& b) { return a.frame_index < b.frame_index; });
    for (std::size_t i = 1; i < id.captures.size(); ++i) {
      if (id.captures[i].frame_index == id.captures[i - 1].frame_index) {
        throw Error(ErrorCode::DatasetNotFound,
                    "duplicate frame index in " + dir.path().string() + ": " +
                        id.captures[i].image_path.filename().string());
      }
    }
    identities.push_back(std::move(id));
  }
  if (identities.empty()) {
    throw Error(ErrorCode::DatasetNotFound, "no captures under " + images.string());
  }
  std::sort(identities.begin(), identities.end(),
            [](const IdentityFrames& a, const IdentityFrames& b) {
              return a.identity_id < b.identity_id;
            });
  return identities;
}

}  // namespace hmdiris
