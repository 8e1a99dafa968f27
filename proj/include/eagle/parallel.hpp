#pragma once

namespace eagle {

/// Number of threads the data-parallel kernels will use.
int max_threads();

/// Cap the kernel thread count; 0 restores the automatic default.
void set_thread_cap(int n);

/// Apply the EAGLE_THREADS environment variable (unset or 0 = automatic).
/// Throws ParameterError if the variable is set but not a nonnegative integer.
void apply_thread_env();

} // namespace eagle
