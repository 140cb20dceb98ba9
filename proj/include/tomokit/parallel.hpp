#pragma once

namespace tomokit {

// Caps the number of OpenMP workers used by the library (0 = runtime default).
void set_threads(int n);
int thread_count();

}  // namespace tomokit
