//! Numerator/denominator factorisation of `D_s` and the leading-term
//! structure of its tail.
//!
//! Writing `sin(2jx) = 2 sin(jx) cos(jx)` for the even numerator factors and
//! cancelling gives `D_s = a_s(x) / d_s(x)` where `a_s` is `±2^s sin x` times
//! the odd-frequency sines and a run of cosines, and `d_s` is
//! `±2^w sin²x · sin 2x ⋯`. The sign and layout depend on `s mod 4`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::kernel::build_kernel;
use crate::partitions::{
    third_term_combination, third_term_index, third_term_row, LinearCombination,
};
use crate::report::VerificationReport;
use crate::trig::{Basis, Frequency, TrigPoly};

/// Upper order guard for the exact section checks.
pub const MAX_SECTION_ORDER: u32 = 20;

/// `s` modulo 4, named after the forms `4κ−1, 4κ, 4κ+1, 4κ+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueClass {
    FourKappaMinusOne,
    FourKappa,
    FourKappaPlusOne,
    FourKappaPlusTwo,
}

impl ResidueClass {
    pub fn of(s: u32) -> Self {
        match s % 4 {
            3 => ResidueClass::FourKappaMinusOne,
            0 => ResidueClass::FourKappa,
            1 => ResidueClass::FourKappaPlusOne,
            _ => ResidueClass::FourKappaPlusTwo,
        }
    }

    /// Sign `(−1)^e` shared by numerator and denominator.
    fn sign(self, s: u32) -> i8 {
        let e = match self {
            ResidueClass::FourKappaMinusOne => (s + 1) / 4,
            ResidueClass::FourKappa => s / 4,
            ResidueClass::FourKappaPlusOne => (s - 1) / 4,
            ResidueClass::FourKappaPlusTwo => (s + 2) / 4,
        };
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Basis of the numerator's leading terms (and of `τ_s · d_s`).
    pub fn leading_basis(self) -> Basis {
        match self {
            ResidueClass::FourKappaMinusOne | ResidueClass::FourKappaPlusTwo => Basis::Cos,
            ResidueClass::FourKappa | ResidueClass::FourKappaPlusOne => Basis::Sin,
        }
    }

    /// Frequencies of the three leading numerator terms.
    #[allow(clippy::manual_div_ceil)]
    pub fn leading_frequencies(self, s: u32) -> [Frequency; 3] {
        let s = u64::from(s);
        let q = 9 * s * s;
        match self {
            ResidueClass::FourKappaMinusOne | ResidueClass::FourKappaPlusOne => {
                [(q + 7) / 8, (q - 9) / 8, (q - 8 * s - 1) / 8]
            }
            ResidueClass::FourKappa | ResidueClass::FourKappaPlusTwo => [
                (q + 2 * s + 8) / 8,
                (q + 2 * s - 8) / 8,
                (q - 6 * s - 8) / 8,
            ],
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidueClass::FourKappaMinusOne => "4k-1",
            ResidueClass::FourKappa => "4k",
            ResidueClass::FourKappaPlusOne => "4k+1",
            ResidueClass::FourKappaPlusTwo => "4k+2",
        })
    }
}

fn check_order(s: u32) -> Result<()> {
    if s < 3 {
        return Err(Error::OrderTooSmall { s, min: 3 });
    }
    if s > MAX_SECTION_ORDER {
        return Err(Error::TooLarge {
            what: "section order",
            value: u64::from(s),
            max: u64::from(MAX_SECTION_ORDER),
        });
    }
    Ok(())
}

fn harmonic(basis: Basis, n: Frequency) -> TrigPoly {
    match basis {
        Basis::Cos => TrigPoly::cos_term(n, 1),
        Basis::Sin => TrigPoly::sin_term(n, 1),
    }
}

fn signed_power_of_two(sign: i8, power: u32) -> Dyadic {
    let v = BigInt::one() << power as usize;
    Dyadic::from_integer(if sign < 0 { -v } else { v })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumeratorForm {
    pub s: u32,
    pub residue_class: ResidueClass,
    pub sign: i8,
    pub power_of_two: u32,
    pub factors: Vec<(Basis, Frequency)>,
    /// The three leading `(frequency, coefficient)` pairs, `+1, −1, +1`.
    pub predicted_leading: [(Frequency, i8); 3],
}

impl NumeratorForm {
    pub fn new(s: u32) -> Result<Self> {
        check_order(s)?;
        let class = ResidueClass::of(s);
        let s64 = u64::from(s);
        // odd numerator frequencies start at s+2 (odd s) or s+1 (even s)
        let first_odd = if s % 2 == 1 { s64 + 2 } else { s64 + 1 };
        let first_cos = s64 / 2 + 1;
        let mut factors = vec![(Basis::Sin, 1)];
        factors.extend(
            (first_odd..=2 * s64 - 1)
                .step_by(2)
                .map(|n| (Basis::Sin, n)),
        );
        factors.extend((first_cos..=s64).map(|n| (Basis::Cos, n)));
        let [f0, f1, f2] = class.leading_frequencies(s);
        Ok(NumeratorForm {
            s,
            residue_class: class,
            sign: class.sign(s),
            power_of_two: s,
            factors,
            predicted_leading: [(f0, 1), (f1, -1), (f2, 1)],
        })
    }

    pub fn to_trig_poly(&self) -> TrigPoly {
        let factors: Vec<TrigPoly> = self.factors.iter().map(|&(b, n)| harmonic(b, n)).collect();
        TrigPoly::product(&factors).scale(&signed_power_of_two(self.sign, self.power_of_two))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorForm {
    pub s: u32,
    pub sign: i8,
    pub power_of_two: u32,
    /// Sine frequencies, `sin²x` listed as two entries of 1.
    pub sin_factors: Vec<Frequency>,
}

impl DenominatorForm {
    pub fn new(s: u32) -> Result<Self> {
        check_order(s)?;
        let class = ResidueClass::of(s);
        let mut sin_factors = vec![1, 1];
        sin_factors.extend(2..=u64::from(s / 2));
        Ok(DenominatorForm {
            s,
            sign: class.sign(s),
            power_of_two: s / 2,
            sin_factors,
        })
    }

    pub fn to_trig_poly(&self) -> TrigPoly {
        let factors: Vec<TrigPoly> = self
            .sin_factors
            .iter()
            .map(|&n| TrigPoly::sin_term(n, 1))
            .collect();
        TrigPoly::product(&factors).scale(&signed_power_of_two(self.sign, self.power_of_two))
    }
}

pub fn build_numerator(s: u32) -> Result<TrigPoly> {
    Ok(NumeratorForm::new(s)?.to_trig_poly())
}

pub fn build_denominator(s: u32) -> Result<TrigPoly> {
    Ok(DenominatorForm::new(s)?.to_trig_poly())
}

/// The `count` highest-frequency nonzero terms of one basis, descending.
pub fn leading_terms(p: &TrigPoly, basis: Basis, count: usize) -> Vec<(Frequency, Dyadic)> {
    let iter: Box<dyn Iterator<Item = (Frequency, &Dyadic)>> = match basis {
        Basis::Cos => Box::new(p.cos_terms().rev()),
        Basis::Sin => Box::new(p.sin_terms().rev()),
    };
    iter.take(count).map(|(n, c)| (n, c.clone())).collect()
}

/// Checks `D_s · d_s = a_s` exactly as polynomials.
pub fn verify_decomposition(s: u32) -> Result<VerificationReport> {
    let numerator = build_numerator(s)?;
    let denominator = build_denominator(s)?;
    let kernel = build_kernel(s)?;
    let product = kernel.series().mul(&denominator);
    let mut report = VerificationReport::new("numerator-decomposition", format!("s={s}"));
    report.check_eq(
        "max frequency",
        None,
        &numerator.max_frequency().unwrap_or(0),
        &product.max_frequency().unwrap_or(0),
    );
    report.check_eq("term count", None, &numerator.len(), &product.len());
    let diff = product.sub(&numerator);
    match diff.max_frequency() {
        None => {
            report.check(
                "kernel x denominator == numerator",
                None,
                "equal",
                "equal",
                true,
            );
        }
        Some(n) => {
            let basis = if diff.cos_coeff(n).is_zero() {
                Basis::Sin
            } else {
                Basis::Cos
            };
            report.check(
                "kernel x denominator == numerator",
                Some(n),
                numerator.coeff(basis, n),
                product.coeff(basis, n),
                false,
            );
        }
    }
    Ok(report)
}

/// Symbolic weights of `p_0 … p_s` in the coefficient of `τ_s · d_s` at
/// `frequency`, where `τ_s = 2Σ p_j cos[(s²−2j)x]`.
pub fn tail_product_weights(s: u32, frequency: Frequency) -> Result<LinearCombination> {
    let denominator = build_denominator(s)?;
    let basis = ResidueClass::of(s).leading_basis();
    let top = u64::from(s).pow(2);
    let mut combo = LinearCombination::new();
    for j in 0..=u64::from(s) {
        let unit = TrigPoly::cos_term(top - 2 * j, 2).mul(&denominator);
        let w = unit.coeff(basis, frequency);
        let w = w
            .to_integer()
            .and_then(|w| i64::try_from(w).ok())
            .ok_or_else(|| Error::InvalidArgument(format!("non-integer weight {w}")))?;
        combo.add(j as i64, w);
    }
    Ok(combo)
}

/// Multiplies the tail by the exact denominator and checks the three leading
/// terms are `+1, −1, +1` at the class frequencies, that the slots between
/// the second and third vanish, and that the product agrees with the exact
/// numerator on the top `2s+1` frequencies (the window the tail determines).
pub fn verify_leading_product(s: u32) -> Result<VerificationReport> {
    let form = NumeratorForm::new(s)?;
    let denominator = build_denominator(s)?;
    let numerator = form.to_trig_poly();
    let kernel = build_kernel(s)?;
    let tail = kernel.tail()?;
    let product = tail.to_trig_poly().mul(&denominator);
    let basis = form.residue_class.leading_basis();
    let other = match basis {
        Basis::Cos => Basis::Sin,
        Basis::Sin => Basis::Cos,
    };
    let mut report = VerificationReport::new(
        "tail-leading-product",
        format!("s={s} class={}", form.residue_class),
    );

    let stray = match other {
        Basis::Cos => product.cos_terms().count(),
        Basis::Sin => product.sin_terms().count(),
    };
    report.check_eq(format!("no {other:?} terms"), None, &0usize, &stray);

    let [(f0, _), (f1, _), (f2, _)] = form.predicted_leading;
    let leading = leading_terms(&product, basis, 3);
    for (i, &(freq, coeff)) in form.predicted_leading.iter().enumerate() {
        let (got_freq, got) = leading.get(i).cloned().unwrap_or((0, Dyadic::zero()));
        let expected = Dyadic::from(i64::from(coeff));
        report.check(
            format!("leading term {}", i + 1),
            Some(freq),
            format!("{expected} @ {freq}"),
            format!("{got} @ {got_freq}"),
            got_freq == freq && got == expected,
        );
    }
    let mut slot = f1.saturating_sub(2);
    while slot > f2 {
        let c = product.coeff(basis, slot);
        report.check(
            "predicted-zero slot",
            Some(slot),
            Dyadic::zero(),
            &c,
            c.is_zero(),
        );
        slot -= 2;
    }

    let window_bottom = f0.saturating_sub(2 * u64::from(s));
    let mut n = f0;
    loop {
        let expected = numerator.coeff(basis, n);
        let got = product.coeff(basis, n);
        let ok = expected == got;
        if !ok {
            report.check(
                "window agrees with numerator",
                Some(n),
                &expected,
                &got,
                false,
            );
        }
        if n < window_bottom + 2 {
            break;
        }
        n -= 2;
    }
    report.check(
        "window agrees with numerator",
        None,
        "all slots",
        "checked",
        true,
    );

    // third coefficient as a combination of partition numbers
    let weights = tail_product_weights(s, f2)?;
    let generated = third_term_combination(third_term_index(s))?;
    report.check_eq("third coefficient weights", Some(f2), &generated, &weights);
    if let Some(row) = third_term_row(s) {
        report.check_eq("third coefficient reference row", Some(f2), &row, &weights);
    }
    Ok(report)
}
