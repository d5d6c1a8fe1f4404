#ifndef PHYLAB_VERSION_HPP
#define PHYLAB_VERSION_HPP

namespace phylab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestVersion = 1;
inline constexpr int kCheckpointVersion = 1;
inline constexpr int kConfigVersion = 1;

}  // namespace phylab

#endif  // PHYLAB_VERSION_HPP
