//! Exact trigonometric-polynomial kernels whose Fourier coefficients encode
//! the partition function, together with quadrature evaluators for the
//! integral representations of `p_s` and verification suites for every
//! identity involved.
//!
//! ```
//! use partition_harmonics::{build_kernel, integrate_reduced, QuadratureSpec};
//!
//! let k = build_kernel(2).unwrap();
//! assert_eq!(k.to_halved_text(), "2(1 + cos 2x + cos 4x)");
//! let r = integrate_reduced(12, &QuadratureSpec::default()).unwrap();
//! assert_eq!(r.rounded, 77);
//! ```

pub mod dyadic;
pub mod error;
pub mod kernel;
pub mod partitions;
pub mod quadrature;
pub mod report;
pub mod tail;
pub mod trig;
pub mod verify;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use kernel::{
    build_kernel, build_kernels, central_binomial, coefficient_by_orthogonality,
    expected_term_count, extract_tail, kernel_at_half_pi, kernel_at_zero, term_count,
    KernelSequence, KernelSeries, Tail, MAX_KERNEL_ORDER,
};
pub use partitions::{
    euler_residual, partitions_enumerate, partitions_euler, third_term_coefficient,
    third_term_combination, third_term_index, third_term_row, third_term_row_check,
    LinearCombination, PartitionTable, Provenance,
};
pub use quadrature::{
    evaluate_full_kernel_direct, evaluate_kernel_direct, exact_value, integrate,
    integrate_cos_form, integrate_full, integrate_general, integrate_reduced, integrate_sin_form,
    moment_exact, vanishing_moment, Evaluator, Form, QuadratureResult, QuadratureSpec, Rule,
    AMPLITUDE_ENVELOPE,
};
pub use report::{VerificationReport, Witness};
pub use tail::{
    build_denominator, build_numerator, verify_decomposition, verify_leading_product,
    DenominatorForm, NumeratorForm, ResidueClass,
};
pub use trig::{
    fractional_cosine_sum, fractional_sine_sum, ordinary_cosine_sum, ordinary_sine_sum,
    verify_harmonic_sum_identity, Basis, Frequency, TrigPoly,
};
pub use verify::{run_all, Suite};
