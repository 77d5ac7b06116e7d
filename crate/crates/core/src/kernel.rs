//! Exact cosine expansion of the kernel
//! `D_s(x) = Π_{κ=1}^{s} sin[(s+κ)x] / sin(κx)`.
//!
//! The expansion is produced by the recursion
//! `D_{s+1}(x)·sin[(s+1)x] = D_s(x)·{sin[(3s+2)x] + sin(sx)}` starting from
//! `D_1(x) = 2cos x`; each step is one exact multiplication followed by an
//! exact division by `sin[(s+1)x]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::quadrature::{self, Integrand, KernelSource, QuadratureSpec};
use crate::trig::{two_cos_x, Basis, Frequency, TrigPoly};

/// Largest order [`build_kernel`] accepts (about 5000 terms, 60-digit coefficients).
pub const MAX_KERNEL_ORDER: u32 = 100;

/// Cosine series of `D_s` for a fixed order `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSeries {
    order: u32,
    series: TrigPoly,
}

/// `C(2s, s)` by the multiplicative formula.
pub fn central_binomial(s: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 1..=u64::from(s) {
        acc = acc * BigInt::from(u64::from(s) + k) / BigInt::from(k);
    }
    acc
}

/// Expected number of nonzero cosine terms: `(s²+2)/2` for even `s`,
/// `(s²+1)/2` for odd `s`.
pub fn expected_term_count(s: u32) -> usize {
    let sq = (s as usize) * (s as usize);
    if s.is_multiple_of(2) {
        (sq + 2) / 2
    } else {
        sq.div_ceil(2)
    }
}

impl KernelSeries {
    /// `D_1(x) = sin 2x / sin x = 2cos x`.
    pub fn first() -> Self {
        KernelSeries {
            order: 1,
            series: two_cos_x(),
        }
    }

    /// One recursion step, `D_s → D_{s+1}`.
    pub fn next_order(&self) -> Result<KernelSeries> {
        let s = u64::from(self.order);
        let multiplier = TrigPoly::sin_term(3 * s + 2, 1).add(&TrigPoly::sin_term(s, 1));
        let lifted = self.series.mul(&multiplier);
        let series = lifted.divide_by_sin(s + 1)?;
        Ok(KernelSeries {
            order: self.order + 1,
            series,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn series(&self) -> &TrigPoly {
        &self.series
    }

    pub fn into_series(self) -> TrigPoly {
        self.series
    }

    /// Highest frequency present; `s²` for a valid kernel.
    pub fn max_frequency(&self) -> Frequency {
        self.series.max_frequency().unwrap_or(0)
    }

    /// Integer coefficient of `cos(nx)` (zero when absent).
    pub fn coefficient(&self, n: Frequency) -> BigInt {
        self.series
            .cos_coeff(n)
            .to_integer()
            .expect("kernel coefficients are integers")
    }

    /// `(frequency, coefficient)` pairs in ascending frequency.
    pub fn coefficients(&self) -> Vec<(Frequency, BigInt)> {
        self.series
            .cos_terms()
            .map(|(n, c)| (n, c.to_integer().expect("kernel coefficients are integers")))
            .collect()
    }

    /// `D_s(0)`, which equals `C(2s, s)`.
    pub fn at_zero(&self) -> BigInt {
        self.series
            .eval_exact_at_zero()
            .to_integer()
            .expect("kernel coefficients are integers")
    }

    /// `D_s(π/2)`: `C(s, s/2)` for even `s`, zero for odd `s`.
    pub fn at_half_pi(&self) -> BigInt {
        self.series
            .eval_exact_at_half_pi()
            .to_integer()
            .expect("kernel coefficients are integers")
    }

    pub fn term_count(&self) -> usize {
        self.series.len()
    }

    /// Halved coefficients at frequencies `s², s²−2, …, s²−2s`.
    pub fn tail(&self) -> Result<Tail> {
        if self.order < 3 {
            return Err(Error::OrderTooSmall {
                s: self.order,
                min: 3,
            });
        }
        let top = u64::from(self.order).pow(2);
        let coeffs = (0..=u64::from(self.order))
            .map(|j| {
                let (half, rem) = self.coefficient(top - 2 * j).div_rem(&BigInt::from(2));
                debug_assert!(rem.is_zero());
                half
            })
            .collect();
        Ok(Tail {
            order: self.order,
            coeffs,
        })
    }

    /// Checks every structural property a kernel must have: sine-free,
    /// integer positive even coefficients, top frequency `s²`, uniform parity
    /// `s² mod 2`, and coefficient sum `C(2s, s)`.
    pub fn check_invariants(&self) -> Result<()> {
        let s = self.order;
        let fail = |detail: String| Err(Error::InvariantViolated { s, detail });
        if !self.series.is_cosine_only() {
            return fail("sine terms present".into());
        }
        let top = u64::from(s).pow(2);
        if self.max_frequency() != top {
            return fail(format!(
                "max frequency {} != s^2 = {top}",
                self.max_frequency()
            ));
        }
        for (n, c) in self.series.cos_terms() {
            if n % 2 != top % 2 {
                return fail(format!("frequency {n} has the wrong parity"));
            }
            match c.to_integer() {
                Some(v) if v.is_positive() && v.is_even() => {}
                _ => {
                    return fail(format!(
                        "coefficient {c} at frequency {n} is not a positive even integer"
                    ))
                }
            }
        }
        if self.at_zero() != central_binomial(s) {
            return fail(format!("coefficient sum {} != C(2s,s)", self.at_zero()));
        }
        Ok(())
    }

    /// Text layout `2(c₀ + c₁cos 2x + …)` with halved coefficients.
    pub fn to_halved_text(&self) -> String {
        let mut out = String::from("2(");
        for (i, (n, c)) in self.coefficients().into_iter().enumerate() {
            let half: BigInt = c / 2;
            if i > 0 {
                out.push_str(" + ");
            }
            match n {
                0 => out.push_str(&half.to_string()),
                _ => {
                    if !half.is_one() {
                        out.push_str(&half.to_string());
                    }
                    if n == 1 {
                        out.push_str("cos x");
                    } else {
                        out.push_str(&format!("cos {n}x"));
                    }
                }
            }
        }
        out.push(')');
        out
    }
}

impl fmt::Display for KernelSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_halved_text())
    }
}

/// Iterator over `D_1, D_2, …`, each produced from its predecessor.
#[derive(Debug, Clone, Default)]
pub struct KernelSequence {
    current: Option<KernelSeries>,
    failed: bool,
}

impl KernelSequence {
    pub fn new() -> Self {
        KernelSequence::default()
    }
}

impl Iterator for KernelSequence {
    type Item = Result<KernelSeries>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.current {
            None => Ok(KernelSeries::first()),
            Some(k) => k.next_order(),
        };
        match next {
            Ok(k) => {
                self.current = Some(k.clone());
                Some(Ok(k))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

fn check_order(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::OrderTooSmall { s, min: 1 });
    }
    if s > MAX_KERNEL_ORDER {
        return Err(Error::TooLarge {
            what: "kernel order",
            value: u64::from(s),
            max: u64::from(MAX_KERNEL_ORDER),
        });
    }
    Ok(())
}

/// Builds `D_s` through the recursion and validates it.
pub fn build_kernel(s: u32) -> Result<KernelSeries> {
    check_order(s)?;
    let mut k = KernelSeries::first();
    while k.order < s {
        k = k.next_order()?;
    }
    k.check_invariants()?;
    Ok(k)
}

/// Builds `D_1 … D_max` in one pass.
pub fn build_kernels(max: u32) -> Result<Vec<KernelSeries>> {
    check_order(max)?;
    let kernels: Vec<KernelSeries> = KernelSequence::new()
        .take(max as usize)
        .collect::<Result<_>>()?;
    for k in &kernels {
        k.check_invariants()?;
    }
    Ok(kernels)
}

pub fn kernel_at_zero(k: &KernelSeries) -> BigInt {
    k.at_zero()
}

pub fn kernel_at_half_pi(k: &KernelSeries) -> BigInt {
    k.at_half_pi()
}

pub fn term_count(k: &KernelSeries) -> usize {
    k.term_count()
}

pub fn extract_tail(k: &KernelSeries) -> Result<Tail> {
    k.tail()
}

/// The `s+1` highest-frequency coefficients of `D_s`, halved.
/// Index `j` holds the coefficient of `cos[(s²−2j)x]` divided by two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub order: u32,
    #[serde(with = "crate::dyadic::bigint_vec")]
    pub coeffs: Vec<BigInt>,
}

impl Tail {
    /// `2·Σ coeffs[j]·cos[(s²−2j)x]` as a polynomial.
    pub fn to_trig_poly(&self) -> TrigPoly {
        let top = u64::from(self.order).pow(2);
        TrigPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (Basis::Cos, top - 2 * j as u64, Dyadic::from_integer(c * 2))),
        )
    }
}

/// Numerical Fourier coefficient by orthogonality:
/// `(4/π)∫₀^{π/2} D_s(x)·cos(2mx) dx` for even `s`, with `cos((2m−1)x)` for
/// odd `s`. At `m = 0` the constant term is returned, which uses weight
/// `2/π` rather than `4/π`.
pub fn coefficient_by_orthogonality(
    k: &KernelSeries,
    m: u64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = k.order();
    let sq = u64::from(s).pow(2);
    let frequency = if s.is_multiple_of(2) {
        if m > sq / 2 {
            return Err(Error::InvalidArgument(format!(
                "m = {m} outside 0..={} for even s = {s}",
                sq / 2
            )));
        }
        2 * m
    } else {
        if m == 0 || m > sq.div_ceil(2) {
            return Err(Error::InvalidArgument(format!(
                "m = {m} outside 1..={} for odd s = {s}",
                sq.div_ceil(2)
            )));
        }
        2 * m - 1
    };
    let normalization = if frequency == 0 { 1.0 } else { 2.0 };
    let integrand = Integrand::new(
        KernelSource::from_series(k),
        vec![(Basis::Cos, frequency)],
        normalization,
    );
    quadrature::integrate_mean(&integrand, spec).map(|(v, _)| v)
}
