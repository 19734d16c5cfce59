//! Entire functions over the affine-exponential family.
//!
//! A [`FunctionExpr`] is an immutable expression tree whose leaves are
//! `z ↦ a·e^{bz} + cz + d` atoms. Evaluation is plain structural recursion in
//! `f64` complex arithmetic with an absorbing overflow flag.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ComplexPoint = Complex64;

/// Magnitude beyond which any intermediate value is flagged as overflowed.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// `ln(OVERFLOW_GUARD)`, used to decide overflow of `e^w` before computing it.
const LN_OVERFLOW_GUARD: f64 = 690.775_527_898_213_7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("expaffine requires a != 0 and b != 0 (got a={a}, b={b})")]
    Degenerate { a: Complex64, b: Complex64 },
    #[error("iteration count must be >= 1 (got {0})")]
    IterateCount(u32),
    #[error("non-finite parameter {0}")]
    NonFinite(Complex64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Result of evaluating a function: a finite complex value or the overflow flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Finite(Complex64),
    Overflow,
}

impl Value {
    fn guard(z: Complex64) -> Value {
        if z.re.is_finite() && z.im.is_finite() && z.norm() <= OVERFLOW_GUARD {
            Value::Finite(z)
        } else {
            Value::Overflow
        }
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            Value::Finite(z) => Some(z),
            Value::Overflow => None,
        }
    }

    pub fn is_overflow(self) -> bool {
        matches!(self, Value::Overflow)
    }

    /// Unwraps a finite value, panicking on overflow.
    pub fn unwrap(self) -> Complex64 {
        self.finite().expect("value overflowed")
    }
}

/// The atom `z ↦ a·e^{bz} + cz + d` with `a ≠ 0`, `b ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpAffine {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl ExpAffine {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, ExprError> {
        for p in [a, b, c, d] {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(ExprError::NonFinite(p));
            }
        }
        if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
            return Err(ExprError::Degenerate { a, b });
        }
        Ok(ExpAffine { a, b, c, d })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }

    /// True for exactly `z ↦ z + 1 + e^{-z}`.
    pub fn is_fatou(&self) -> bool {
        self.a == Complex64::new(1.0, 0.0)
            && self.b == Complex64::new(-1.0, 0.0)
            && self.c == Complex64::new(1.0, 0.0)
            && self.d == Complex64::new(1.0, 0.0)
    }

    /// `a·e^{bz}`, or overflow when its modulus would exceed the guard.
    fn exp_term(&self, z: Complex64) -> Value {
        let w = self.b * z;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Value::Overflow;
        }
        if self.a.norm().ln() + w.re > LN_OVERFLOW_GUARD {
            return Value::Overflow;
        }
        Value::guard(self.a * w.exp())
    }

    pub fn eval(&self, z: Complex64) -> Value {
        match self.exp_term(z) {
            Value::Finite(e) => Value::guard(e + self.c * z + self.d),
            Value::Overflow => Value::Overflow,
        }
    }

    pub fn derivative(&self, z: Complex64) -> Value {
        match self.exp_term(z) {
            Value::Finite(e) => Value::guard(self.b * e + self.c),
            Value::Overflow => Value::Overflow,
        }
    }

    /// `ln|a·e^{bz} + cz + d|` without forming `e^{bz}` when it would overflow.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        let w = self.b * z;
        let log_mag = self.a.norm().ln() + w.re;
        let rest = self.c * z + self.d;
        if log_mag > LN_OVERFLOW_GUARD - 10.0 {
            // a·e^{bz}·(1 + rest·e^{-bz}/a); the correction is below 1e-290.
            let phase = self.a.arg() + w.im;
            let unit = Complex64::from_polar(1.0, phase);
            let scaled_rest = rest / unit * (-log_mag).exp();
            log_mag + (Complex64::new(1.0, 0.0) + scaled_rest).norm().ln()
        } else {
            (self.a * w.exp() + rest).norm().ln()
        }
    }
}

/// Expression tree over [`ExpAffine`] atoms.
///
/// `Linear` is the single non-transcendental atom (`z ↦ cz + d`); it exists so
/// harness triples can express maps like `z + 1` or `e·w`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionExpr {
    ExpAffine(ExpAffine),
    Linear { c: Complex64, d: Complex64 },
    Compose { outer: Arc<FunctionExpr>, inner: Arc<FunctionExpr> },
    Iterate { base: Arc<FunctionExpr>, n: u32 },
    Translate { base: Arc<FunctionExpr>, tau: Complex64 },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl FunctionExpr {
    pub fn exp_affine(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<FunctionExpr, ExprError> {
        ExpAffine::new(a, b, c, d).map(FunctionExpr::ExpAffine)
    }

    /// Fatou's function `z + 1 + e^{-z}`.
    pub fn fatou() -> FunctionExpr {
        FunctionExpr::ExpAffine(ExpAffine { a: c(1.0, 0.0), b: c(-1.0, 0.0), c: c(1.0, 0.0), d: c(1.0, 0.0) })
    }

    /// `g = f + 2πi` for Fatou's `f`.
    pub fn fatou_shifted() -> FunctionExpr {
        FunctionExpr::fatou().translate(c(0.0, 2.0 * PI))
    }

    /// `λ·e^z`.
    pub fn exp(lambda: Complex64) -> Result<FunctionExpr, ExprError> {
        FunctionExpr::exp_affine(lambda, c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    /// `e^z + λ`.
    pub fn exp_plus(lambda: Complex64) -> Result<FunctionExpr, ExprError> {
        FunctionExpr::exp_affine(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), lambda)
    }

    pub fn linear(slope: Complex64, offset: Complex64) -> Result<FunctionExpr, ExprError> {
        for p in [slope, offset] {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(ExprError::NonFinite(p));
            }
        }
        Ok(FunctionExpr::Linear { c: slope, d: offset })
    }

    pub fn identity() -> FunctionExpr {
        FunctionExpr::Linear { c: c(1.0, 0.0), d: c(0.0, 0.0) }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FunctionExpr) -> FunctionExpr {
        FunctionExpr::Compose { outer: Arc::new(self.clone()), inner: Arc::new(inner.clone()) }
    }

    pub fn iterate(&self, n: u32) -> Result<FunctionExpr, ExprError> {
        if n < 1 {
            return Err(ExprError::IterateCount(n));
        }
        Ok(FunctionExpr::Iterate { base: Arc::new(self.clone()), n })
    }

    pub fn translate(&self, tau: Complex64) -> FunctionExpr {
        FunctionExpr::Translate { base: Arc::new(self.clone()), tau }
    }

    pub fn eval(&self, z: Complex64) -> Value {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > OVERFLOW_GUARD {
            return Value::Overflow;
        }
        match self {
            FunctionExpr::ExpAffine(atom) => atom.eval(z),
            FunctionExpr::Linear { c, d } => Value::guard(c * z + d),
            FunctionExpr::Compose { outer, inner } => match inner.eval(z) {
                Value::Finite(w) => outer.eval(w),
                Value::Overflow => Value::Overflow,
            },
            FunctionExpr::Iterate { base, n } => {
                let mut w = z;
                for _ in 0..*n {
                    match base.eval(w) {
                        Value::Finite(next) => w = next,
                        Value::Overflow => return Value::Overflow,
                    }
                }
                Value::Finite(w)
            }
            FunctionExpr::Translate { base, tau } => match base.eval(z) {
                Value::Finite(w) => Value::guard(w + tau),
                Value::Overflow => Value::Overflow,
            },
        }
    }

    /// Evaluates a possibly-overflowed input; overflow is absorbing.
    pub fn eval_value(&self, v: Value) -> Value {
        match v {
            Value::Finite(z) => self.eval(z),
            Value::Overflow => Value::Overflow,
        }
    }

    /// Returns `(f(z), f'(z))` via the chain rule.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Value, Value) {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > OVERFLOW_GUARD {
            return (Value::Overflow, Value::Overflow);
        }
        match self {
            FunctionExpr::ExpAffine(atom) => (atom.eval(z), atom.derivative(z)),
            FunctionExpr::Linear { c, d } => (Value::guard(c * z + d), Value::Finite(*c)),
            FunctionExpr::Compose { outer, inner } => {
                let (w, dw) = inner.eval_with_derivative(z);
                let Value::Finite(w) = w else {
                    return (Value::Overflow, Value::Overflow);
                };
                let (v, dv) = outer.eval_with_derivative(w);
                (v, chain(dv, dw))
            }
            FunctionExpr::Iterate { base, n } => {
                let mut w = Value::Finite(z);
                let mut dw = Value::Finite(c(1.0, 0.0));
                for _ in 0..*n {
                    let Value::Finite(x) = w else {
                        return (Value::Overflow, Value::Overflow);
                    };
                    let (next, step) = base.eval_with_derivative(x);
                    w = next;
                    dw = chain(step, dw);
                }
                (w, dw)
            }
            FunctionExpr::Translate { base, tau } => {
                let (w, dw) = base.eval_with_derivative(z);
                let w = match w {
                    Value::Finite(w) => Value::guard(w + tau),
                    Value::Overflow => Value::Overflow,
                };
                (w, dw)
            }
        }
    }

    pub fn eval_derivative(&self, z: Complex64) -> Value {
        self.eval_with_derivative(z).1
    }

    /// `ln|f(z)|`, using overflow-free arithmetic for atoms and translated atoms.
    /// Returns `None` when a composite overflows.
    pub fn log_abs(&self, z: Complex64) -> Option<f64> {
        match self {
            FunctionExpr::ExpAffine(atom) => Some(atom.log_abs(z)),
            FunctionExpr::Translate { base, tau } => match base.as_ref() {
                FunctionExpr::ExpAffine(atom) => {
                    let shifted = ExpAffine { d: atom.d + tau, ..*atom };
                    Some(shifted.log_abs(z))
                }
                _ => self.eval(z).finite().map(|w| w.norm().ln()),
            },
            _ => self.eval(z).finite().map(|w| w.norm().ln()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            FunctionExpr::ExpAffine(_) | FunctionExpr::Linear { .. } => 1,
            FunctionExpr::Compose { outer, inner } => 1 + outer.size() + inner.size(),
            FunctionExpr::Iterate { base, .. } | FunctionExpr::Translate { base, .. } => 1 + base.size(),
        }
    }

    /// Recognizes words in Fatou's function and `2πi`-translations.
    ///
    /// Any such word equals `z ↦ f^N(z) + 2πi·M` exactly, because
    /// `f(z + 2πi·m) = f(z) + 2πi·m`. Returns `None` for every other shape.
    pub fn fatou_word(&self) -> Option<FatouWord> {
        match self {
            FunctionExpr::ExpAffine(atom) if atom.is_fatou() => Some(FatouWord { applications: 1, shift: 0 }),
            FunctionExpr::ExpAffine(_) | FunctionExpr::Linear { .. } => None,
            FunctionExpr::Translate { base, tau } => {
                let m = lattice_index(*tau)?;
                let w = base.fatou_word()?;
                Some(FatouWord { applications: w.applications, shift: w.shift.checked_add(m)? })
            }
            FunctionExpr::Compose { outer, inner } => {
                let (o, i) = (outer.fatou_word()?, inner.fatou_word()?);
                Some(FatouWord {
                    applications: o.applications.checked_add(i.applications)?,
                    shift: o.shift.checked_add(i.shift)?,
                })
            }
            FunctionExpr::Iterate { base, n } => {
                let w = base.fatou_word()?;
                Some(FatouWord {
                    applications: w.applications.checked_mul(u64::from(*n))?,
                    shift: w.shift.checked_mul(i64::from(*n))?,
                })
            }
        }
    }
}

impl FunctionExpr {
    /// Recognizes pure translations `z ↦ z + s` built from `linear(1, d)`
    /// atoms and translations; returns the total shift `s`.
    pub fn pure_translation(&self) -> Option<Complex64> {
        match self {
            FunctionExpr::Linear { c, d } if *c == Complex64::new(1.0, 0.0) => Some(*d),
            FunctionExpr::ExpAffine(_) | FunctionExpr::Linear { .. } => None,
            FunctionExpr::Translate { base, tau } => Some(base.pure_translation()? + tau),
            FunctionExpr::Compose { outer, inner } => Some(outer.pure_translation()? + inner.pure_translation()?),
            FunctionExpr::Iterate { base, n } => Some(base.pure_translation()? * f64::from(*n)),
        }
    }
}

fn chain(outer: Value, inner: Value) -> Value {
    match (outer, inner) {
        (Value::Finite(a), Value::Finite(b)) => Value::guard(a * b),
        _ => Value::Overflow,
    }
}

/// Returns `m` when `tau = 2πi·m` within `1e-12`.
fn lattice_index(tau: Complex64) -> Option<i64> {
    if tau.re.abs() > 1e-12 {
        return None;
    }
    let m = tau.im / (2.0 * PI);
    let rounded = m.round();
    if (m - rounded).abs() <= 1e-12 && rounded.abs() < 1e15 {
        Some(rounded as i64)
    } else {
        None
    }
}

/// `z ↦ f^applications(z) + 2πi·shift` for Fatou's `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FatouWord {
    pub applications: u64,
    pub shift: i64,
}

/// Outcome of a sampled commutation test.
#[derive(Debug, Clone, PartialEq)]
pub struct Commutation {
    pub commutes: bool,
    /// Samples where both sides were finite and compared.
    pub compared: usize,
    pub max_relative_difference: f64,
    /// First sample exceeding the tolerance, with `f(g(z))` and `g(f(z))`.
    pub witness: Option<(Complex64, Complex64, Complex64)>,
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Compares `f(g(z))` against `g(f(z))` on the given samples.
///
/// Samples where either side overflows are skipped.
pub fn commutes_numerically(f: &FunctionExpr, g: &FunctionExpr, samples: &[Complex64], tol: f64) -> Commutation {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut out = Commutation { commutes: true, compared: 0, max_relative_difference: 0.0, witness: None };
    for &z in samples {
        let (Some(fg), Some(gf)) = (f.eval_value(g.eval(z)).finite(), g.eval_value(f.eval(z)).finite()) else {
            continue;
        };
        out.compared += 1;
        let diff = relative_difference(fg, gf);
        out.max_relative_difference = out.max_relative_difference.max(diff);
        if diff > tol && out.witness.is_none() {
            out.commutes = false;
            out.witness = Some((z, fg, gf));
        }
    }
    out
}

pub(crate) fn fmt_complex(z: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if z.im.is_sign_negative() {
        write!(f, "{:?}-{:?}i", z.re, -z.im)
    } else {
        write!(f, "{:?}+{:?}i", z.re, z.im)
    }
}

struct Lit(Complex64);

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_complex(self.0, f)
    }
}

/// Formats a complex number in the `x+yi` literal grammar.
pub fn format_complex(z: Complex64) -> String {
    Lit(z).to_string()
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionExpr::ExpAffine(atom) if atom.is_fatou() => write!(f, "fatou"),
            FunctionExpr::ExpAffine(atom) => {
                write!(f, "expaffine({},{},{},{})", Lit(atom.a), Lit(atom.b), Lit(atom.c), Lit(atom.d))
            }
            FunctionExpr::Linear { c, d } => write!(f, "linear({},{})", Lit(*c), Lit(*d)),
            FunctionExpr::Compose { outer, inner } => write!(f, "compose({outer},{inner})"),
            FunctionExpr::Iterate { base, n } => write!(f, "iter({base},{n})"),
            FunctionExpr::Translate { base, tau } => write!(f, "translate({base},{})", Lit(*tau)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fatou() -> FunctionExpr {
        FunctionExpr::fatou()
    }

    #[test]
    fn fatou_at_zero_is_two() {
        assert_eq!(fatou().eval(c(0.0, 0.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn fatou_fixes_i_pi() {
        let z = c(0.0, PI);
        let w = fatou().eval(z).unwrap();
        assert!((w - z).norm() <= 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn fatou_critical_value_at_two_pi_i() {
        let z = c(0.0, 2.0 * PI);
        let w = fatou().eval(z).unwrap();
        assert!((w - c(2.0, 2.0 * PI)).norm() < 1e-14);
        assert!(fatou().eval_derivative(z).unwrap().norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let d = fatou().eval_derivative(c(0.0, PI)).unwrap();
        assert!((d - c(2.0, 0.0)).norm() < 1e-15);
        let e = FunctionExpr::exp(c(1.0, 0.0)).unwrap();
        assert_eq!(e.eval_derivative(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn constructors_follow_tree_order() {
        let f = fatou();
        let g = f.translate(c(0.0, 2.0 * PI));
        let z0 = c(0.0, 0.0);
        let expected = f.eval(f.eval(z0).unwrap() + c(0.0, 2.0 * PI)).unwrap();
        assert_eq!(f.compose(&g).eval(z0).unwrap(), expected);
        assert_eq!(f.iterate(2).unwrap().eval(z0).unwrap(), f.eval(c(2.0, 0.0)).unwrap());
        let t = g.eval(c(0.0, PI)).unwrap();
        assert!((t - c(0.0, 3.0 * PI)).norm() < 1e-14);
    }

    #[test]
    fn rejects_degenerate_atoms_and_zero_iterates() {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        assert!(matches!(FunctionExpr::exp_affine(zero, one, one, one), Err(ExprError::Degenerate { .. })));
        assert!(matches!(FunctionExpr::exp_affine(one, zero, one, one), Err(ExprError::Degenerate { .. })));
        assert_eq!(fatou().iterate(0), Err(ExprError::IterateCount(0)));
        assert!(FunctionExpr::exp_affine(c(f64::NAN, 0.0), one, one, one).is_err());
    }

    #[test]
    fn overflow_is_flagged_and_absorbing() {
        let e = FunctionExpr::exp(c(1.0, 0.0)).unwrap();
        assert_eq!(e.eval(c(800.0, 0.0)), Value::Overflow);
        assert!(e.eval(c(690.0, 0.0)).finite().is_some());
        let ee = e.compose(&e);
        assert_eq!(ee.eval(c(800.0, 0.0)), Value::Overflow);
        assert_eq!(e.eval_value(Value::Overflow), Value::Overflow);
        assert_eq!(fatou().eval(c(-1000.0, 0.3)), Value::Overflow);
        assert_eq!(FunctionExpr::identity().eval(c(2e300, 0.0)), Value::Overflow);
    }

    #[test]
    fn log_abs_matches_direct_evaluation_where_finite() {
        let f = fatou();
        for z in [c(-3.0, 1.0), c(2.0, -7.0), c(-50.0, 0.5)] {
            let direct = f.eval(z).unwrap().norm().ln();
            assert!((f.log_abs(z).unwrap() - direct).abs() < 1e-12);
        }
        // e^{-z} at Re z = -1e4 overflows, the log form does not.
        let big = f.log_abs(c(-1e4, 0.0)).unwrap();
        assert!((big - 1e4).abs() < 1e-9);
    }

    #[test]
    fn fatou_words() {
        let f = fatou();
        let g = FunctionExpr::fatou_shifted();
        assert_eq!(f.fatou_word(), Some(FatouWord { applications: 1, shift: 0 }));
        assert_eq!(g.fatou_word(), Some(FatouWord { applications: 1, shift: 1 }));
        let w = f.iterate(3).unwrap().compose(&g.iterate(2).unwrap());
        assert_eq!(w.fatou_word(), Some(FatouWord { applications: 5, shift: 2 }));
        assert_eq!(f.translate(c(0.0, 1.0)).fatou_word(), None);
        assert_eq!(FunctionExpr::exp(c(0.25, 0.0)).unwrap().fatou_word(), None);
        assert_eq!(f.compose(&FunctionExpr::identity()).fatou_word(), None);
    }

    #[test]
    fn pure_translations() {
        let plus_one = FunctionExpr::identity().translate(c(1.0, 0.0));
        assert_eq!(plus_one.pure_translation(), Some(c(1.0, 0.0)));
        assert_eq!(plus_one.iterate(3).unwrap().compose(&plus_one).pure_translation(), Some(c(4.0, 0.0)));
        assert_eq!(FunctionExpr::identity().pure_translation(), Some(c(0.0, 0.0)));
        assert_eq!(FunctionExpr::linear(c(2.0, 0.0), c(1.0, 0.0)).unwrap().pure_translation(), None);
        assert_eq!(FunctionExpr::fatou().translate(c(1.0, 0.0)).pure_translation(), None);
    }

    #[test]
    fn commutation_examples() {
        let f = fatou();
        let g = FunctionExpr::fatou_shifted();
        let samples: Vec<_> = (0..100)
            .map(|k| c(-3.0 + 6.0 * ((k % 10) as f64 + 0.5) / 10.0, -3.0 + 6.0 * ((k / 10) as f64 + 0.5) / 10.0))
            .collect();
        let r = commutes_numerically(&f, &g, &samples, 1e-10);
        assert!(r.commutes, "{r:?}");
        assert_eq!(r.compared, 100);
        assert!(commutes_numerically(&f, &f, &samples, 1e-10).commutes);

        let e = FunctionExpr::exp(c(1.0, 0.0)).unwrap();
        let plus_one = FunctionExpr::identity().translate(c(1.0, 0.0));
        let r = commutes_numerically(&e, &plus_one, &[c(0.0, 0.0)], 1e-10);
        assert!(!r.commutes);
        let (z, fg, gf) = r.witness.unwrap();
        assert_eq!(z, c(0.0, 0.0));
        assert!((fg - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
        assert!((gf - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(fatou().to_string(), "fatou");
        assert_eq!(FunctionExpr::fatou_shifted().to_string(), format!("translate(fatou,0.0+{:?}i)", 2.0 * PI));
        assert_eq!(
            FunctionExpr::exp(c(0.25, 0.0)).unwrap().iterate(2).unwrap().to_string(),
            "iter(expaffine(0.25+0.0i,1.0+0.0i,0.0+0.0i,0.0+0.0i),2)"
        );
        assert_eq!(format_complex(c(1.5, -2.0)), "1.5-2.0i");
    }
}
