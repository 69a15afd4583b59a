#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hmdiris {

struct CaptureRef {
  std::string identity_id;
  std::size_t frame_index = 0;
  std::filesystem::path image_path;
  std::filesystem::path label_path;
};

struct IdentityFrames {
  std::string identity_id;
  std::vector<CaptureRef> captures;  // ascending frame_index
};

/// Scans `<root>/images/<identity>/<frame>.png` with labels expected at
/// `<root>/labels/<identity>/<frame>.png`. Identities are sorted by name,
/// frames by their numeric stem. Missing label files are kept in the listing
/// (load_capture reports them). Throws DatasetNotFound when the root has no
/// images directory or no captures, or when a frame stem is not numeric.
std::vector<IdentityFrames> scan_dataset(const std::filesystem::path& root);

}  // namespace hmdiris
