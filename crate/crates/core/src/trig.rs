//! Exact arithmetic on finite trigonometric polynomials
//! `Σ a_n cos(nx) + Σ b_n sin(nx)` with dyadic coefficients.
//!
//! Negative frequencies produced by product-to-sum expansion are folded
//! back: `cos(-nx) = cos(nx)`, `sin(-nx) = -sin(nx)`, and `sin(0x)` drops.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Multiplier `n` of `x` in `cos(nx)` / `sin(nx)`.
pub type Frequency = u64;

/// `(frequency, coefficient)` pairs in floating point.
pub type FloatTerms = Vec<(Frequency, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Cos,
    Sin,
}

/// A finite Fourier series held in canonical form: no zero coefficients are
/// stored and there is never a `sin(0x)` entry, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPoly {
    cos: BTreeMap<Frequency, Dyadic>,
    sin: BTreeMap<Frequency, Dyadic>,
}

/// `cos(n x)` with the product `n x` carried to double-double precision, so
/// large frequencies do not lose accuracy in argument formation.
pub(crate) fn cos_nx(n: u64, x: f64) -> f64 {
    let nf = n as f64;
    let hi = nf * x;
    let lo = nf.mul_add(x, -hi);
    let (s, c) = hi.sin_cos();
    c - s * lo
}

pub(crate) fn sin_nx(n: u64, x: f64) -> f64 {
    let nf = n as f64;
    let hi = nf * x;
    let lo = nf.mul_add(x, -hi);
    let (s, c) = hi.sin_cos();
    s + c * lo
}

fn accumulate(map: &mut BTreeMap<Frequency, Dyadic>, n: Frequency, c: &Dyadic) {
    if c.is_zero() {
        return;
    }
    match map.entry(n) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Accumulator on a fixed common exponent; used by `mul` to avoid
/// re-canonicalising every partial product.
#[derive(Default)]
struct ScaledAccumulator {
    cos: BTreeMap<Frequency, BigInt>,
    sin: BTreeMap<Frequency, BigInt>,
}

impl ScaledAccumulator {
    fn push(&mut self, basis: Basis, n: i64, v: &BigInt) {
        let (basis, n, negate) = match basis {
            Basis::Cos => (Basis::Cos, n.unsigned_abs(), false),
            Basis::Sin if n == 0 => return,
            Basis::Sin => (Basis::Sin, n.unsigned_abs(), n < 0),
        };
        let map = match basis {
            Basis::Cos => &mut self.cos,
            Basis::Sin => &mut self.sin,
        };
        let slot = map.entry(n).or_default();
        if negate {
            *slot -= v;
        } else {
            *slot += v;
        }
    }

    fn finish(self, exponent: u32) -> TrigPoly {
        let build = |m: BTreeMap<Frequency, BigInt>| {
            m.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(n, v)| (n, Dyadic::new(v, exponent)))
                .collect()
        };
        TrigPoly {
            cos: build(self.cos),
            sin: build(self.sin),
        }
    }
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn constant(c: impl Into<Dyadic>) -> Self {
        TrigPoly::cos_term(0, c)
    }

    pub fn cos_term(n: Frequency, c: impl Into<Dyadic>) -> Self {
        let mut p = TrigPoly::zero();
        accumulate(&mut p.cos, n, &c.into());
        p
    }

    /// `c·sin(nx)`; `sin(0x)` is identically zero.
    pub fn sin_term(n: Frequency, c: impl Into<Dyadic>) -> Self {
        let mut p = TrigPoly::zero();
        if n > 0 {
            accumulate(&mut p.sin, n, &c.into());
        }
        p
    }

    /// Builds a polynomial from `(basis, frequency, coefficient)` triples;
    /// repeated frequencies are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Basis, Frequency, C)>,
        C: Into<Dyadic>,
    {
        let mut p = TrigPoly::zero();
        for (basis, n, c) in terms {
            p.add_term(basis, n, &c.into());
        }
        p
    }

    pub fn add_term(&mut self, basis: Basis, n: Frequency, c: &Dyadic) {
        match basis {
            Basis::Cos => accumulate(&mut self.cos, n, c),
            Basis::Sin if n > 0 => accumulate(&mut self.sin, n, c),
            Basis::Sin => {}
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cos.is_empty() && self.sin.is_empty()
    }

    pub fn is_cosine_only(&self) -> bool {
        self.sin.is_empty()
    }

    pub fn is_sine_only(&self) -> bool {
        self.cos.is_empty()
    }

    /// Number of stored (nonzero) terms across both bases.
    pub fn len(&self) -> usize {
        self.cos.len() + self.sin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn max_frequency(&self) -> Option<Frequency> {
        let c = self.cos.keys().next_back().copied();
        let s = self.sin.keys().next_back().copied();
        c.max(s)
    }

    pub fn cos_terms(&self) -> impl DoubleEndedIterator<Item = (Frequency, &Dyadic)> + '_ {
        self.cos.iter().map(|(n, c)| (*n, c))
    }

    pub fn sin_terms(&self) -> impl DoubleEndedIterator<Item = (Frequency, &Dyadic)> + '_ {
        self.sin.iter().map(|(n, c)| (*n, c))
    }

    pub fn cos_coeff(&self, n: Frequency) -> Dyadic {
        self.cos.get(&n).cloned().unwrap_or_default()
    }

    pub fn sin_coeff(&self, n: Frequency) -> Dyadic {
        self.sin.get(&n).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, basis: Basis, n: Frequency) -> Dyadic {
        match basis {
            Basis::Cos => self.cos_coeff(n),
            Basis::Sin => self.sin_coeff(n),
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (n, c) in &other.cos {
            accumulate(&mut out.cos, *n, c);
        }
        for (n, c) in &other.sin {
            accumulate(&mut out.sin, *n, c);
        }
        out
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigPoly {
        TrigPoly {
            cos: self.cos.iter().map(|(n, c)| (*n, -c)).collect(),
            sin: self.sin.iter().map(|(n, c)| (*n, -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Dyadic) -> TrigPoly {
        if factor.is_zero() {
            return TrigPoly::zero();
        }
        TrigPoly {
            cos: self.cos.iter().map(|(n, c)| (*n, c * factor)).collect(),
            sin: self.sin.iter().map(|(n, c)| (*n, c * factor)).collect(),
        }
    }

    fn max_exponent(&self) -> u32 {
        self.cos
            .values()
            .chain(self.sin.values())
            .map(Dyadic::exponent)
            .max()
            .unwrap_or(0)
    }

    fn signed_terms(&self) -> impl Iterator<Item = (Basis, i64, &Dyadic)> + '_ {
        self.cos
            .iter()
            .map(|(n, c)| (Basis::Cos, *n as i64, c))
            .chain(self.sin.iter().map(|(n, c)| (Basis::Sin, *n as i64, c)))
    }

    /// Exact product; every cross term is expanded with the product-to-sum
    /// identities.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        if self.is_zero() || other.is_zero() {
            return TrigPoly::zero();
        }
        let ep = self.max_exponent();
        let eq = other.max_exponent();
        let exponent = ep + eq + 1;
        let lhs: Vec<_> = self
            .signed_terms()
            .map(|(b, n, c)| (b, n, c.scaled_numerator(ep)))
            .collect();
        let rhs: Vec<_> = other
            .signed_terms()
            .map(|(b, n, c)| (b, n, c.scaled_numerator(eq)))
            .collect();

        let mut acc = ScaledAccumulator::default();
        for (ba, n, a) in &lhs {
            for (bb, m, b) in &rhs {
                let v = a * b;
                let (n, m) = (*n, *m);
                match (ba, bb) {
                    // cos n cos m = ½cos(n−m) + ½cos(n+m)
                    (Basis::Cos, Basis::Cos) => {
                        acc.push(Basis::Cos, n - m, &v);
                        acc.push(Basis::Cos, n + m, &v);
                    }
                    // sin n sin m = ½cos(n−m) − ½cos(n+m)
                    (Basis::Sin, Basis::Sin) => {
                        acc.push(Basis::Cos, n - m, &v);
                        acc.push(Basis::Cos, n + m, &-&v);
                    }
                    // sin n cos m = ½sin(n+m) + ½sin(n−m)
                    (Basis::Sin, Basis::Cos) => {
                        acc.push(Basis::Sin, n + m, &v);
                        acc.push(Basis::Sin, n - m, &v);
                    }
                    (Basis::Cos, Basis::Sin) => {
                        acc.push(Basis::Sin, m + n, &v);
                        acc.push(Basis::Sin, m - n, &v);
                    }
                }
            }
        }
        acc.finish(exponent)
    }

    /// Product of an arbitrary number of factors; the empty product is 1.
    pub fn product<'a, I>(factors: I) -> TrigPoly
    where
        I: IntoIterator<Item = &'a TrigPoly>,
    {
        factors
            .into_iter()
            .fold(TrigPoly::constant(1), |acc, f| acc.mul(f))
    }

    /// Divides a pure sine series by `sin(mx)`, returning the cosine-only
    /// quotient `q` with `q·sin(mx) = self` exactly.
    ///
    /// Elimination runs from the top frequency down using
    /// `cos(kx)·sin(mx) = ½[sin((m+k)x) + sin((m−k)x)]`; any remainder that
    /// survives is reported as [`Error::NotDivisible`].
    pub fn divide_by_sin(&self, m: Frequency) -> Result<TrigPoly> {
        if m == 0 {
            return Err(Error::InvalidArgument("division by sin(0x)".into()));
        }
        if !self.is_sine_only() {
            return Err(Error::InvalidArgument(
                "divide_by_sin requires a pure sine series".into(),
            ));
        }
        let mut rem = self.sin.clone();
        let mut quotient = BTreeMap::new();
        while let Some((&top, c)) = rem.last_key_value() {
            if top < m {
                return Err(Error::NotDivisible {
                    divisor: m,
                    remainder_frequency: top,
                });
            }
            let c = c.clone();
            let k = top - m;
            rem.remove(&top);
            if k == 0 {
                quotient.insert(0, c);
                continue;
            }
            // q_k = 2c; subtracting q_k·cos(kx)·sin(mx) removes c·sin(top·x)
            // and c·sin((m−k)x), folded when k > m.
            quotient.insert(k, &c + &c);
            match m.cmp(&k) {
                std::cmp::Ordering::Greater => accumulate(&mut rem, m - k, &-&c),
                std::cmp::Ordering::Less => accumulate(&mut rem, k - m, &c),
                std::cmp::Ordering::Equal => {}
            }
        }
        Ok(TrigPoly {
            cos: quotient,
            sin: BTreeMap::new(),
        })
    }

    /// Floating-point coefficients, cosine and sine lists.
    pub fn to_f64_terms(&self) -> (FloatTerms, FloatTerms) {
        let conv = |m: &BTreeMap<Frequency, Dyadic>| {
            m.iter().map(|(n, c)| (*n, c.to_f64())).collect::<Vec<_>>()
        };
        (conv(&self.cos), conv(&self.sin))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c: f64 = self
            .cos
            .iter()
            .map(|(n, a)| a.to_f64() * cos_nx(*n, x))
            .sum();
        let s: f64 = self
            .sin
            .iter()
            .map(|(n, b)| b.to_f64() * sin_nx(*n, x))
            .sum();
        c + s
    }

    /// Like [`eval`](Self::eval) but refuses when a coefficient cannot be
    /// represented exactly in an f64.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        if self.fits_f64() {
            Ok(self.eval(x))
        } else {
            Err(Error::PrecisionLoss)
        }
    }

    pub fn fits_f64(&self) -> bool {
        self.cos
            .values()
            .chain(self.sin.values())
            .all(Dyadic::fits_f64_mantissa)
    }

    /// Exact value at `x = 0`: the sum of the cosine coefficients.
    pub fn eval_exact_at_zero(&self) -> Dyadic {
        self.cos.values().fold(Dyadic::zero(), |acc, c| &acc + c)
    }

    /// Exact value at `x = π/2`: `cos(nπ/2)` is 0 for odd `n` and `(−1)^(n/2)`
    /// for even `n`; `sin(nπ/2)` is `(−1)^((n−1)/2)` for odd `n`.
    pub fn eval_exact_at_half_pi(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (n, c) in &self.cos {
            if n % 2 == 0 {
                acc = if (n / 2) % 2 == 0 { &acc + c } else { &acc - c };
            }
        }
        for (n, c) in &self.sin {
            if n % 2 == 1 {
                acc = if ((n - 1) / 2) % 2 == 0 {
                    &acc + c
                } else {
                    &acc - c
                };
            }
        }
        acc
    }
}

impl std::ops::Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        TrigPoly::neg(self)
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Dyadic, first: bool, bare: bool) -> fmt::Result {
    let negative = c.numerator().is_negative();
    let magnitude = if negative { -c } else { c.clone() };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let is_one = magnitude == Dyadic::one();
    if bare {
        write!(f, "{magnitude}")
    } else if is_one {
        Ok(())
    } else if magnitude.is_integer() {
        write!(f, "{magnitude}")
    } else {
        write!(f, "({magnitude})")
    }
}

fn write_harmonic(f: &mut fmt::Formatter<'_>, name: &str, n: Frequency) -> fmt::Result {
    if n == 1 {
        write!(f, "{name} x")
    } else {
        write!(f, "{name} {n}x")
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.cos {
            write_coeff(f, c, first, *n == 0)?;
            if *n > 0 {
                write_harmonic(f, "cos", *n)?;
            }
            first = false;
        }
        for (n, c) in &self.sin {
            write_coeff(f, c, first, false)?;
            write_harmonic(f, "sin", *n)?;
            first = false;
        }
        Ok(())
    }
}

/// JSON layout: `{"cos": [[n, num, exp], ...], "sin": [...]}` with
/// ascending frequencies. Numerators are integer literals of arbitrary length.
#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    cos: Vec<(Frequency, serde_json::Number, u32)>,
    sin: Vec<(Frequency, serde_json::Number, u32)>,
}

fn to_repr(m: &BTreeMap<Frequency, Dyadic>) -> Vec<(Frequency, serde_json::Number, u32)> {
    m.iter()
        .map(|(n, c)| {
            let num = serde_json::Number::from_str(&c.numerator().to_string())
                .expect("integer literal is a valid JSON number");
            (*n, num, c.exponent())
        })
        .collect()
}

impl Serialize for TrigPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TrigPolyRepr {
            cos: to_repr(&self.cos),
            sin: to_repr(&self.sin),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TrigPolyRepr::deserialize(deserializer)?;
        let mut p = TrigPoly::zero();
        for (basis, list) in [(Basis::Cos, repr.cos), (Basis::Sin, repr.sin)] {
            for (n, num, exp) in list {
                let num = BigInt::from_str(&num.to_string())
                    .map_err(|_| D::Error::custom(format!("numerator {num} is not an integer")))?;
                if basis == Basis::Sin && n == 0 {
                    if num.is_zero() {
                        continue;
                    }
                    return Err(D::Error::custom("sin term at frequency 0"));
                }
                p.add_term(basis, n, &Dyadic::new(num, exp));
            }
        }
        Ok(p)
    }
}

/// Default tolerance below which `|sin(κx)|` counts as a zero.
pub const SINGULARITY_TOLERANCE: f64 = 1e-9;

/// Literal `Σ_{n=0}^{s} sin(2nκx + y)`.
pub fn ordinary_sine_sum(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    (0..=u64::from(s))
        .map(|n| (2.0 * n as f64 * kappa as f64 * x + y).sin())
        .sum()
}

/// Literal `Σ_{n=0}^{s} cos(2nκx + y)`.
pub fn ordinary_cosine_sum(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    (0..=u64::from(s))
        .map(|n| (2.0 * n as f64 * kappa as f64 * x + y).cos())
        .sum()
}

/// Closed form `sin[(s+1)κx]/sin(κx) · sin(sκx + y)`.
pub fn ordinary_sine_sum_closed(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    let (s, k) = (f64::from(s), f64::from(kappa));
    ((s + 1.0) * k * x).sin() / (k * x).sin() * (s * k * x + y).sin()
}

/// Closed form `sin[(s+1)κx]/sin(κx) · cos(sκx + y)`.
pub fn ordinary_cosine_sum_closed(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    let (s, k) = (f64::from(s), f64::from(kappa));
    ((s + 1.0) * k * x).sin() / (k * x).sin() * (s * k * x + y).cos()
}

/// Fractional sine sum with upper limit `s/κ`, taken as its defining right-hand
/// side `sin[(s+κ)x]/sin(κx) · sin(sx + y)`. When `κ | s` it coincides with
/// the ordinary sum up to `s/κ`.
pub fn fractional_sine_sum(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    let (s, k) = (f64::from(s), f64::from(kappa));
    ((s + k) * x).sin() / (k * x).sin() * (s * x + y).sin()
}

/// Fractional cosine sum, `sin[(s+κ)x]/sin(κx) · cos(sx + y)`.
pub fn fractional_cosine_sum(s: u32, kappa: u32, x: f64, y: f64) -> f64 {
    let (s, k) = (f64::from(s), f64::from(kappa));
    ((s + k) * x).sin() / (k * x).sin() * (s * x + y).cos()
}

/// Compares the literal harmonic sums of sines and cosines against their
/// closed forms at every sample.
pub fn verify_harmonic_sum_identity(
    s: u32,
    kappa: u32,
    y: f64,
    samples: &[f64],
) -> Result<VerificationReport> {
    if kappa == 0 || kappa > s {
        return Err(Error::InvalidArgument(format!(
            "kappa must satisfy 1 <= kappa <= s, got kappa = {kappa}, s = {s}"
        )));
    }
    let tolerance = 1e-12 * (f64::from(s) + 1.0);
    let mut report = VerificationReport::new("harmonic-sum", format!("s={s} kappa={kappa} y={y}"));
    for &x in samples {
        let d = (f64::from(kappa) * x).sin();
        if d.abs() < SINGULARITY_TOLERANCE {
            return Err(Error::SingularSample {
                x,
                kappa: u64::from(kappa),
                value: d,
            });
        }
        let pairs = [
            (
                "sine",
                ordinary_sine_sum(s, kappa, x, y),
                ordinary_sine_sum_closed(s, kappa, x, y),
            ),
            (
                "cosine",
                ordinary_cosine_sum(s, kappa, x, y),
                ordinary_cosine_sum_closed(s, kappa, x, y),
            ),
        ];
        for (kind, literal, closed) in pairs {
            let dev = (literal - closed).abs();
            report.record_deviation(dev);
            report.check(
                format!("{kind} sum at x={x}"),
                None,
                format!("{closed:.17e}"),
                format!("{literal:.17e}"),
                dev < tolerance,
            );
        }
    }
    Ok(report)
}

/// `2·cos(x)`, the order-one kernel.
pub(crate) fn two_cos_x() -> TrigPoly {
    TrigPoly::cos_term(1, BigInt::from(2))
}
