#ifndef ZEROTWO_VERSION_HPP
#define ZEROTWO_VERSION_HPP

#define ZEROTWO_VERSION_MAJOR 0
#define ZEROTWO_VERSION_MINOR 1
#define ZEROTWO_VERSION_PATCH 0
#define ZEROTWO_VERSION_STRING "0.1.0"

namespace zerotwo {

// Build identifier embedded in result files. Kept free of timestamps so
// that reruns of the same config stay byte-identical.
inline const char* version_string() { return "zerotwo " ZEROTWO_VERSION_STRING; }

}  // namespace zerotwo

#endif
