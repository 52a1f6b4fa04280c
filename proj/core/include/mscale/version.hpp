#pragma once

namespace mscale {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Identifies the random stream implementation. Bump on any change that
/// alters the draw sequence for a fixed seed.
inline constexpr const char* kGeneratorName = "pcg32-xsh-rr";
inline constexpr const char* kGeneratorVersion = "1";

}  // namespace mscale
