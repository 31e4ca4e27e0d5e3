#pragma once

namespace ofdmici {

inline constexpr const char* kVersion = "0.1.0";

/// Version of the CSV/JSON table schemas and of the scenario format.
inline constexpr int kSchemaVersion = 1;

} // namespace ofdmici
