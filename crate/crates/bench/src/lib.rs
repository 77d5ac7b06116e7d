//! Criterion benchmarks for kernel construction and quadrature; see `benches/`.
//!
//! Run with `cargo bench -p partition-harmonics-bench`.

/// Orders timed by the quadrature benches; all lie inside the cancellation envelope.
pub const QUADRATURE_ORDERS: [u32; 4] = [4, 8, 10, 12];

/// Orders timed by the kernel benches.
pub const KERNEL_ORDERS: [u32; 4] = [10, 20, 40, 60];
