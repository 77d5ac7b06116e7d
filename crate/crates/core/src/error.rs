use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Sine division left a nonzero remainder.
    #[error("not divisible by sin({divisor}x): remainder has top frequency {remainder_frequency}")]
    NotDivisible {
        divisor: u64,
        remainder_frequency: u64,
    },

    #[error("coefficient magnitude exceeds the f64 mantissa (2^53); evaluation is inexact")]
    PrecisionLoss,

    #[error("sample x = {x} is singular: |sin({kappa}x)| = {value:e} below tolerance")]
    SingularSample { x: f64, kappa: u64, value: f64 },

    #[error("order s = {s} is below the minimum {min}")]
    OrderTooSmall { s: u32, min: u32 },

    #[error("argument {what} = {value} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error(
        "{nodes} nodes cannot integrate frequency {frequency} exactly (need at least {required})"
    )]
    InsufficientNodes {
        nodes: usize,
        required: usize,
        frequency: u64,
    },

    #[error(
        "kernel amplitude {amplitude:.3e} exceeds the float cancellation envelope {envelope:e}; \
         use the exact coefficient path instead"
    )]
    CancellationRisk { amplitude: f64, envelope: f64 },

    #[error(
        "moment offset {offset} is odd; the vanishing-moment contract covers even offsets only"
    )]
    OddOffset { offset: u64 },

    #[error("the {form} form has no exact series; only the direct evaluator applies")]
    UnsupportedEvaluator { form: &'static str },

    #[error("kernel invariant violated for s = {s}: {detail}")]
    InvariantViolated { s: u32, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
