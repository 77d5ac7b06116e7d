//! Numerical evaluation of the harmonic integral representations of `p_s`.
//!
//! Every integrand here has the shape `K(x)·Π w_i(x)` where `K` is a
//! sine-ratio kernel and the `w_i` are single harmonics, and every one is an
//! even-frequency cosine polynomial: π-periodic with `f(π−x) = f(x)`. The
//! mean `(2/π)∫₀^{π/2} f` therefore equals the mean over a full period, and
//! the uniform trapezoid rule with `N > F/2` nodes (F the top frequency) is
//! exact up to rounding.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::kernel::{build_kernel, KernelSeries, MAX_KERNEL_ORDER};
use crate::trig::{cos_nx, sin_nx, Basis, Frequency, TrigPoly, SINGULARITY_TOLERANCE};

/// Largest kernel amplitude (value at `x = 0`) for which f64 quadrature is
/// certified to keep the rounding residual below 1e−6.
pub const AMPLITUDE_ENVELOPE: f64 = 1e8;

/// Results whose distance to the nearest integer reaches this are flagged
/// as untrusted.
pub const UNTRUSTED_RESIDUAL: f64 = 0.25;

/// Step for the two-sided limit used when a genuine pole is met.
const TWO_SIDED_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GaussLegendre,
    #[default]
    UniformTrapezoid,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::GaussLegendre => "gauss",
            Rule::UniformTrapezoid => "trapezoid",
        })
    }
}

/// How the kernel is evaluated at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    /// Literal product of sine ratios with removable singularities resolved.
    #[default]
    Direct,
    /// Floating evaluation of the exact cosine series.
    Series,
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Evaluator::Direct => "direct",
            Evaluator::Series => "series",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// `None` sizes the rule automatically from the integrand's top frequency.
    pub nodes: Option<usize>,
    pub evaluator: Evaluator,
    pub singularity_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: Rule::UniformTrapezoid,
            nodes: None,
            evaluator: Evaluator::Direct,
            singularity_tolerance: SINGULARITY_TOLERANCE,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = Some(nodes);
        self
    }

    pub fn with_evaluator(mut self, evaluator: Evaluator) -> Self {
        self.evaluator = evaluator;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub raw: f64,
    pub rounded: i64,
    pub residual: f64,
    /// False when `residual >= UNTRUSTED_RESIDUAL`.
    pub trusted: bool,
    pub nodes: usize,
    pub max_frequency: Frequency,
    pub spec: QuadratureSpec,
}

impl QuadratureResult {
    fn new(raw: f64, nodes: usize, max_frequency: Frequency, spec: QuadratureSpec) -> Self {
        let rounded = raw.round();
        let residual = (raw - rounded).abs();
        QuadratureResult {
            raw,
            rounded: rounded as i64,
            residual,
            trusted: residual < UNTRUSTED_RESIDUAL,
            nodes,
            max_frequency,
            spec,
        }
    }
}

/// Which integral representation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum Form {
    /// `(2/π)∫₀^{π/2} D_s(x)·cos[(s²−2s)x] dx`
    Reduced,
    /// `(4/π)∫₀^{π/2} D_s(x)·sin(2sx)·sin(s²x) dx`
    Sin,
    /// `(4/π)∫₀^{π/2} D_s(x)·cos(2sx)·cos(s²x) dx`
    Cos,
    /// `(2/π)∫₀^{π/2} Π sin[κ(s+1)x]/sin(κx) · cos{[s²(s+1)/2 − 2s]x} dx`
    Full,
    /// `(2/π)∫₀^{π/2} D_{s+m}(x)·cos{[(s+m)²−2s]x} dx`
    General { m: u32 },
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Reduced => "reduced",
            Form::Sin => "sin",
            Form::Cos => "cos",
            Form::Full => "full",
            Form::General { .. } => "general",
        }
    }
}

/// Product of sine ratios `Π sin(a_i x) / Π sin(b_j x)` that is known to be
/// a trigonometric polynomial, so every zero of the denominator is removable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioKernel {
    numerators: Vec<u64>,
    denominators: Vec<u64>,
}

impl RatioKernel {
    /// `D_s(x) = Π_{κ=1}^{s} sin[(s+κ)x] / sin(κx)`.
    pub fn divisor(s: u32) -> Self {
        let s = u64::from(s);
        RatioKernel {
            numerators: (1..=s).map(|k| s + k).collect(),
            denominators: (1..=s).collect(),
        }
    }

    /// `Π_{κ=1}^{s} sin[κ(s+1)x] / sin(κx)`.
    pub fn full(s: u32) -> Self {
        let s = u64::from(s);
        RatioKernel {
            numerators: (1..=s).map(|k| k * (s + 1)).collect(),
            denominators: (1..=s).collect(),
        }
    }

    /// Top frequency of the polynomial the ratio represents.
    pub fn max_frequency(&self) -> Frequency {
        self.numerators.iter().sum::<u64>() - self.denominators.iter().sum::<u64>()
    }

    /// Value at `x = 0`, `Π a_i / Π b_j`.
    pub fn amplitude(&self) -> f64 {
        let mut v = 1.0;
        for (a, b) in self.numerators.iter().zip(&self.denominators) {
            v *= *a as f64 / *b as f64;
        }
        v
    }

    /// Evaluates the ratio. Factors with `|sin| < tol` are treated as
    /// vanishing and replaced by their derivative `a·cos(ax)`; when the
    /// numerator vanishes to at least the order of the denominator this gives
    /// the exact limit. A net pole (impossible for a polynomial kernel) falls
    /// back to the symmetric average of `x ± 1e−6`.
    pub fn eval(&self, x: f64, tol: f64) -> f64 {
        match self.eval_limit(x, tol) {
            Some(v) => v,
            None => {
                let l = self.eval_limit(x - TWO_SIDED_STEP, tol).unwrap_or(0.0);
                let r = self.eval_limit(x + TWO_SIDED_STEP, tol).unwrap_or(0.0);
                0.5 * (l + r)
            }
        }
    }

    fn eval_limit(&self, x: f64, tol: f64) -> Option<f64> {
        let mut value = 1.0;
        let mut order: i64 = 0;
        for &a in &self.numerators {
            let v = sin_nx(a, x);
            if v.abs() < tol {
                order += 1;
                value *= a as f64 * cos_nx(a, x);
            } else {
                value *= v;
            }
        }
        for &b in &self.denominators {
            let v = sin_nx(b, x);
            if v.abs() < tol {
                order -= 1;
                value /= b as f64 * cos_nx(b, x);
            } else {
                value /= v;
            }
        }
        match order {
            0 => Some(value),
            o if o > 0 => Some(0.0),
            _ => None,
        }
    }
}

/// `D_s(x)` evaluated directly from its product form.
pub fn evaluate_kernel_direct(s: u32, x: f64, tol: f64) -> f64 {
    RatioKernel::divisor(s).eval(x, tol)
}

/// The kernel `Π sin[κ(s+1)x]/sin(κx)` evaluated directly.
pub fn evaluate_full_kernel_direct(s: u32, x: f64, tol: f64) -> f64 {
    RatioKernel::full(s).eval(x, tol)
}

/// Kernel of an integrand: the ratio form, plus the exact series when one exists.
#[derive(Debug, Clone)]
pub(crate) struct KernelSource {
    name: &'static str,
    ratio: RatioKernel,
    order: Option<u32>,
    series: Option<Vec<(Frequency, f64)>>,
}

impl KernelSource {
    pub(crate) fn divisor(s: u32) -> Self {
        KernelSource {
            name: "divisor",
            ratio: RatioKernel::divisor(s),
            order: Some(s),
            series: None,
        }
    }

    pub(crate) fn from_series(k: &KernelSeries) -> Self {
        let mut src = KernelSource::divisor(k.order());
        src.series = Some(k.series().to_f64_terms().0);
        src
    }

    pub(crate) fn full(s: u32) -> Self {
        KernelSource {
            name: "full",
            ratio: RatioKernel::full(s),
            order: None,
            series: None,
        }
    }
}

enum Prepared<'a> {
    Direct(&'a RatioKernel, f64),
    Series(Vec<(Frequency, f64)>),
}

impl Prepared<'_> {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Prepared::Direct(r, tol) => r.eval(x, *tol),
            Prepared::Series(terms) => terms.iter().map(|(n, c)| c * cos_nx(*n, x)).sum(),
        }
    }
}

/// `normalization · K(x) · Π harmonic_i(x)`.
#[derive(Debug, Clone)]
pub(crate) struct Integrand {
    kernel: KernelSource,
    harmonics: Vec<(Basis, Frequency)>,
    normalization: f64,
}

impl Integrand {
    pub(crate) fn new(
        kernel: KernelSource,
        harmonics: Vec<(Basis, Frequency)>,
        normalization: f64,
    ) -> Self {
        Integrand {
            kernel,
            harmonics,
            normalization,
        }
    }

    fn max_frequency(&self) -> Frequency {
        self.kernel.ratio.max_frequency() + self.harmonics.iter().map(|(_, n)| n).sum::<u64>()
    }

    fn weight(&self, x: f64) -> f64 {
        self.harmonics
            .iter()
            .map(|&(b, n)| match b {
                Basis::Cos => cos_nx(n, x),
                Basis::Sin => sin_nx(n, x),
            })
            .product()
    }

    fn weight_poly(&self) -> TrigPoly {
        let factors: Vec<TrigPoly> = self
            .harmonics
            .iter()
            .map(|&(b, n)| match b {
                Basis::Cos => TrigPoly::cos_term(n, 1),
                Basis::Sin => TrigPoly::sin_term(n, 1),
            })
            .collect();
        TrigPoly::product(&factors)
    }
}

/// Minimum node count that integrates frequency `f` to full accuracy.
pub fn required_nodes(rule: Rule, max_frequency: Frequency) -> usize {
    match rule {
        // discrete orthogonality on a period of length π
        Rule::UniformTrapezoid => (max_frequency / 2) as usize + 1,
        // Gauss–Legendre on [0, π/2] resolves cos(Fx) once n exceeds about
        // 0.55·F; the additive slack covers small F.
        Rule::GaussLegendre => (0.55 * max_frequency as f64).ceil() as usize + 12,
    }
}

/// Default node count chosen when the spec leaves it open.
pub fn auto_nodes(rule: Rule, max_frequency: Frequency) -> usize {
    match rule {
        Rule::UniformTrapezoid => (max_frequency as usize).div_ceil(2) + 8,
        Rule::GaussLegendre => required_nodes(rule, max_frequency) + 16,
    }
}

fn resolve_nodes(spec: &QuadratureSpec, max_frequency: Frequency) -> Result<usize> {
    let required = required_nodes(spec.rule, max_frequency);
    match spec.nodes {
        None => Ok(auto_nodes(spec.rule, max_frequency)),
        Some(0) => Err(Error::InvalidArgument("node count must be positive".into())),
        Some(n) if n < required => Err(Error::InsufficientNodes {
            nodes: n,
            required,
            frequency: max_frequency,
        }),
        Some(n) => Ok(n),
    }
}

/// Deterministic pairwise summation; the split points depend only on length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(2/π)∫₀^{π/2} f` by the uniform trapezoid rule over one period `[0, π)`.
/// Exact for even-frequency cosine polynomials of top frequency `F < 2N`.
pub fn trapezoid_mean<F>(f: F, nodes: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let h = PI / nodes as f64;
    let values: Vec<f64> = (0..nodes)
        .into_par_iter()
        .with_min_len(64)
        .map(|j| f(j as f64 * h))
        .collect();
    pairwise_sum(&values) / nodes as f64
}

/// `(2/π)∫₀^{π/2} f` by Gauss–Legendre with `nodes` points.
pub fn gauss_mean<F>(f: F, nodes: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let (t, w) = gauss_legendre(nodes);
    let values: Vec<f64> = t
        .par_iter()
        .zip(w.par_iter())
        .with_min_len(64)
        .map(|(t, w)| w * f(PI / 4.0 * (t + 1.0)))
        .collect();
    0.5 * pairwise_sum(&values)
}

/// Mean `(2/π)∫₀^{π/2}` of the integrand, plus the node count used.
pub(crate) fn integrate_mean(integrand: &Integrand, spec: &QuadratureSpec) -> Result<(f64, usize)> {
    let amplitude = integrand.kernel.ratio.amplitude();
    if amplitude > AMPLITUDE_ENVELOPE {
        return Err(Error::CancellationRisk {
            amplitude,
            envelope: AMPLITUDE_ENVELOPE,
        });
    }
    let max_frequency = integrand.max_frequency();
    let nodes = resolve_nodes(spec, max_frequency)?;
    let prepared = match spec.evaluator {
        Evaluator::Direct => Prepared::Direct(&integrand.kernel.ratio, spec.singularity_tolerance),
        Evaluator::Series => match (&integrand.kernel.series, integrand.kernel.order) {
            (Some(terms), _) => Prepared::Series(terms.clone()),
            (None, Some(order)) => Prepared::Series(build_kernel(order)?.series().to_f64_terms().0),
            (None, None) => {
                return Err(Error::UnsupportedEvaluator {
                    form: integrand.kernel.name,
                })
            }
        },
    };
    let f = |x: f64| prepared.eval(x) * integrand.weight(x);
    let mean = match spec.rule {
        Rule::UniformTrapezoid => trapezoid_mean(f, nodes),
        Rule::GaussLegendre => gauss_mean(f, nodes),
    };
    Ok((integrand.normalization * mean, nodes))
}

fn check_s(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::OrderTooSmall { s, min: 1 });
    }
    Ok(())
}

fn integrand_for(form: Form, s: u32) -> Result<Integrand> {
    check_s(s)?;
    let s64 = u64::from(s);
    let sq = s64 * s64;
    Ok(match form {
        Form::Reduced => Integrand::new(
            KernelSource::divisor(s),
            vec![(Basis::Cos, sq.abs_diff(2 * s64))],
            1.0,
        ),
        Form::Sin => Integrand::new(
            KernelSource::divisor(s),
            vec![(Basis::Sin, 2 * s64), (Basis::Sin, sq)],
            2.0,
        ),
        Form::Cos => Integrand::new(
            KernelSource::divisor(s),
            vec![(Basis::Cos, 2 * s64), (Basis::Cos, sq)],
            2.0,
        ),
        Form::Full => {
            let phase = (sq * (s64 + 1) / 2) as i64 - 2 * s64 as i64;
            Integrand::new(
                KernelSource::full(s),
                vec![(Basis::Cos, phase.unsigned_abs())],
                1.0,
            )
        }
        Form::General { m } => {
            let order =
                s.checked_add(m)
                    .filter(|o| *o <= MAX_KERNEL_ORDER)
                    .ok_or(Error::TooLarge {
                        what: "kernel order s+m",
                        value: s64 + u64::from(m),
                        max: u64::from(MAX_KERNEL_ORDER),
                    })?;
            let o = u64::from(order);
            Integrand::new(
                KernelSource::divisor(order),
                vec![(Basis::Cos, (o * o).abs_diff(2 * s64))],
                1.0,
            )
        }
    })
}

/// Evaluates one integral representation numerically; the result should
/// round to `p_s`.
pub fn integrate(form: Form, s: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    let integrand = integrand_for(form, s)?;
    let (raw, nodes) = integrate_mean(&integrand, spec)?;
    Ok(QuadratureResult::new(
        raw,
        nodes,
        integrand.max_frequency(),
        *spec,
    ))
}

pub fn integrate_reduced(s: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate(Form::Reduced, s, spec)
}

pub fn integrate_sin_form(s: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate(Form::Sin, s, spec)
}

pub fn integrate_cos_form(s: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate(Form::Cos, s, spec)
}

pub fn integrate_full(s: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate(Form::Full, s, spec)
}

pub fn integrate_general(s: u32, m: u32, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    integrate(Form::General { m }, s, spec)
}

/// Exact value of an integral representation through the kernel's cosine
/// series: the integrand is multiplied out as a polynomial and only its
/// constant term survives integration. No cancellation envelope applies.
pub fn exact_value(form: Form, s: u32) -> Result<Dyadic> {
    let integrand = integrand_for(form, s)?;
    let order = integrand.kernel.order.ok_or(Error::UnsupportedEvaluator {
        form: integrand.kernel.name,
    })?;
    let kernel = build_kernel(order)?;
    let product = kernel.series().mul(&integrand.weight_poly());
    let mean =
        exact_mean_half_pi(&product).expect("even-frequency integrands have a rational mean");
    let normalization = Dyadic::from(integrand.normalization as i64);
    Ok(&mean * &normalization)
}

/// `(2/π)∫₀^{π/2} p(x) dx` exactly, when it is rational: that holds when
/// every `cos(kx)` term has even `k` and every `sin(kx)` term has `4 | k`.
pub fn exact_mean_half_pi(p: &TrigPoly) -> Option<Dyadic> {
    let rational = p.cos_terms().all(|(n, _)| n % 2 == 0) && p.sin_terms().all(|(n, _)| n % 4 == 0);
    rational.then(|| p.cos_coeff(0))
}

/// `∫₀^{π/2} p(x) dx` in floating point from the exact antiderivatives
/// `∫cos(kx) = sin(kπ/2)/k` and `∫sin(kx) = (1 − cos(kπ/2))/k`.
pub fn exact_integral_half_pi(p: &TrigPoly) -> f64 {
    // sin(kπ/2) and cos(kπ/2) by k mod 4, free of rounding
    let sin_quarter = |k: u64| [0.0, 1.0, 0.0, -1.0][(k % 4) as usize];
    let cos_quarter = |k: u64| [1.0, 0.0, -1.0, 0.0][(k % 4) as usize];
    let mut terms: Vec<f64> = Vec::with_capacity(p.len());
    for (k, c) in p.cos_terms() {
        let v = if k == 0 {
            PI / 2.0
        } else {
            sin_quarter(k) / k as f64
        };
        terms.push(c.to_f64() * v);
    }
    for (k, c) in p.sin_terms() {
        terms.push(c.to_f64() * (1.0 - cos_quarter(k)) / k as f64);
    }
    pairwise_sum(&terms)
}

/// `∫₀^{π/2} D_s(x)·cos[(s²+offset)x] dx` numerically; zero for every even
/// positive offset.
pub fn vanishing_moment(s: u32, offset: u64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    if offset % 2 == 1 {
        return Err(Error::OddOffset { offset });
    }
    if offset == 0 {
        return Err(Error::InvalidArgument(
            "moment offset must be at least 2".into(),
        ));
    }
    let sq = u64::from(s).pow(2);
    let integrand = Integrand::new(
        KernelSource::divisor(s),
        vec![(Basis::Cos, sq + offset)],
        PI / 2.0,
    );
    integrate_mean(&integrand, spec).map(|(v, _)| v)
}

/// `∫₀^{π/2} D_s(x)·cos[(s²+offset)x] dx` for any offset, from the exact
/// series. Odd offsets break the parity match and give nonzero values.
pub fn moment_exact(s: u32, offset: u64) -> Result<f64> {
    let kernel = build_kernel(s)?;
    let phase = TrigPoly::cos_term(u64::from(s).pow(2) + offset, 1);
    Ok(exact_integral_half_pi(&kernel.series().mul(&phase)))
}
