//! Singular values, postsingular orbits, hyperbolicity and growth order.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{ExpAffine, FunctionExpr, Value};
use crate::orbit::{classify_traced, Classification, EscapeConfig, Verdict};

/// Modulus bound on postsingular orbits used by [`is_hyperbolic`].
pub const DEFAULT_POSTSINGULAR_BOUND: f64 = 1e6;

/// Asymptotic values are counted as finite values only; whether the second
/// asymptotic value some authors attribute to `z + 1 + e^{-z}` (at infinity)
/// should count is left open.
pub const ASYMPTOTIC_VALUE_NOTE: &str = "asymptotic values listed are finite ones only; z+1+e^-z is reported with none";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularError {
    #[error("singular_set takes a single expaffine atom; use singular_set_of for {0}")]
    CompositeNotSupported(String),
    #[error("singular value image overflowed while forming a composite singular set")]
    Overflow,
    #[error("radii must be finite, positive, strictly increasing and at least two")]
    InvalidRadii,
    #[error("at least 256 samples per circle are required (got {0})")]
    TooFewSamples(usize),
    #[error("maximum modulus is <= 1 on all but at most one radius")]
    DegenerateRadii,
    #[error("log-modulus of a composite overflowed at radius {0}")]
    OrderOverflow(f64),
    #[error("fixed point for k={k} fails verification (residual {residual:e})")]
    FixedPointResidual { k: i64, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularKind {
    Critical,
    Asymptotic,
}

impl fmt::Display for SingularKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularKind::Critical => "cv",
            SingularKind::Asymptotic => "av",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularValue {
    pub kind: SingularKind,
    /// Lattice index of the critical point; 0 for asymptotic values.
    pub k: i64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSet {
    pub values: Vec<SingularValue>,
    /// Lattice truncation `|k| <= K`.
    pub truncation: u32,
    /// Set when built from `Sing((f∘g)^{-1}) ⊂ Sing(f^{-1}) ∪ f(Sing(g^{-1}))`.
    pub over_approximation: bool,
}

impl SingularSet {
    fn empty(truncation: u32) -> Self {
        SingularSet { values: Vec::new(), truncation, over_approximation: false }
    }

    pub fn critical_values(&self) -> impl Iterator<Item = &SingularValue> {
        self.values.iter().filter(|v| v.kind == SingularKind::Critical)
    }

    pub fn asymptotic_values(&self) -> impl Iterator<Item = &SingularValue> {
        self.values.iter().filter(|v| v.kind == SingularKind::Asymptotic)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Numerical class-B predicate.
    ///
    /// Lattice families grow linearly in `|k|`, so the set is declared
    /// unbounded once some value exceeds ten times the modulus of the value
    /// with smallest `|k|` (floored at 1). Needs `K` large enough for the
    /// lattice to leave that disk; `K >= 10` suffices for the families here.
    pub fn is_bounded(&self) -> bool {
        let Some(first) = self.values.iter().min_by_key(|v| v.k.unsigned_abs()) else {
            return true;
        };
        let limit = 10.0 * first.value.norm().max(1.0);
        self.values.iter().all(|v| v.value.norm() <= limit)
    }
}

/// Critical points `z_k = (Log(-c/(ab)) + 2kπi)/b`, `|k| <= K`, of an atom with `c ≠ 0`.
pub fn critical_points(atom: &ExpAffine, truncation: u32) -> Vec<(i64, Complex64)> {
    if atom.c() == Complex64::new(0.0, 0.0) {
        return Vec::new();
    }
    let base = (-atom.c() / (atom.a() * atom.b())).ln();
    let k_max = i64::from(truncation);
    (-k_max..=k_max).map(|k| (k, (base + Complex64::new(0.0, 2.0 * PI * k as f64)) / atom.b())).collect()
}

fn atom_singular_set(atom: &ExpAffine, truncation: u32) -> SingularSet {
    let values = if atom.c() == Complex64::new(0.0, 0.0) {
        vec![SingularValue { kind: SingularKind::Asymptotic, k: 0, value: atom.d() }]
    } else {
        critical_points(atom, truncation)
            .into_iter()
            .filter_map(|(k, z)| {
                atom.eval(z).finite().map(|value| SingularValue { kind: SingularKind::Critical, k, value })
            })
            .collect()
    };
    SingularSet { values, truncation, over_approximation: false }
}

/// Singular set of a single `expaffine` atom, lattice truncated to `|k| <= K`.
pub fn singular_set(f: &FunctionExpr, truncation: u32) -> Result<SingularSet, SingularError> {
    match f {
        FunctionExpr::ExpAffine(atom) => Ok(atom_singular_set(atom, truncation)),
        other => Err(SingularError::CompositeNotSupported(other.to_string())),
    }
}

fn union_with_image(outer: &FunctionExpr, a: SingularSet, b: SingularSet) -> Result<SingularSet, SingularError> {
    let mut values = a.values;
    for v in b.values {
        let Value::Finite(image) = outer.eval(v.value) else {
            return Err(SingularError::Overflow);
        };
        values.push(SingularValue { value: image, ..v });
    }
    Ok(SingularSet { values, truncation: a.truncation, over_approximation: true })
}

/// Singular set of any expression; composites yield the superset `A ∪ f(B)`.
pub fn singular_set_of(f: &FunctionExpr, truncation: u32) -> Result<SingularSet, SingularError> {
    match f {
        FunctionExpr::ExpAffine(atom) => Ok(atom_singular_set(atom, truncation)),
        FunctionExpr::Linear { .. } => Ok(SingularSet::empty(truncation)),
        FunctionExpr::Translate { base, tau } => {
            let mut set = singular_set_of(base, truncation)?;
            for v in &mut set.values {
                v.value += tau;
            }
            Ok(set)
        }
        FunctionExpr::Compose { outer, inner } => singular_set_composite(outer, inner, truncation),
        FunctionExpr::Iterate { base, n } => {
            let own = singular_set_of(base, truncation)?;
            let mut acc = own.clone();
            for _ in 1..*n {
                acc = union_with_image(base, own.clone(), acc)?;
            }
            Ok(acc)
        }
    }
}

/// `Sing(f^{-1}) ∪ f(Sing(g^{-1}))`, a superset of `Sing((f∘g)^{-1})`.
pub fn singular_set_composite(
    f: &FunctionExpr,
    g: &FunctionExpr,
    truncation: u32,
) -> Result<SingularSet, SingularError> {
    union_with_image(f, singular_set_of(f, truncation)?, singular_set_of(g, truncation)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PostsingularKind {
    Bounded,
    Unbounded,
    Undecided,
}

impl fmt::Display for PostsingularKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackedOrbit {
    pub singular: SingularValue,
    pub classification: Classification,
    /// Largest modulus along the recorded orbit prefix.
    pub max_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostsingularVerdict {
    pub verdict: PostsingularKind,
    pub orbits: Vec<TrackedOrbit>,
    /// Largest modulus seen over all tracked orbits.
    pub bound_witness: f64,
    pub over_approximation: bool,
}

impl PostsingularVerdict {
    /// Largest capture residual over all captured orbits.
    pub fn max_capture_residual(&self) -> Option<f64> {
        self.orbits
            .iter()
            .map(|o| o.classification.capture.map(|c| c.residual))
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
    }
}

/// Tracks the orbit of every singular value under `f`.
///
/// `Bounded` needs every orbit captured and within `bound`. `Unbounded` needs
/// an escaping orbit from an exact singular set; escape from an
/// over-approximated set gives `Undecided`.
pub fn postsingular_verdict(
    f: &FunctionExpr,
    sing: &SingularSet,
    cfg: &EscapeConfig,
    bound: f64,
) -> PostsingularVerdict {
    let orbits: Vec<TrackedOrbit> = sing
        .values
        .par_iter()
        .map(|sv| {
            let rec = classify_traced(f, sv.value, cfg);
            let max_modulus = rec.values.iter().map(|z| z.norm()).fold(sv.value.norm(), f64::max);
            TrackedOrbit { singular: *sv, classification: rec.classification, max_modulus }
        })
        .collect();
    let bound_witness = orbits.iter().map(|o| o.max_modulus).fold(0.0, f64::max);
    let any_escaping = orbits.iter().any(|o| o.classification.verdict == Verdict::Escaping);
    let all_bounded = orbits.iter().all(|o| o.classification.verdict == Verdict::Bounded);
    let verdict = if any_escaping {
        if sing.over_approximation {
            PostsingularKind::Undecided
        } else {
            PostsingularKind::Unbounded
        }
    } else if all_bounded && bound_witness <= bound {
        PostsingularKind::Bounded
    } else {
        PostsingularKind::Undecided
    };
    PostsingularVerdict { verdict, orbits, bound_witness, over_approximation: sing.over_approximation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hyperbolicity {
    Hyperbolic,
    NotHyperbolic,
    Undecided,
}

impl fmt::Display for Hyperbolicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Hyperbolicity from an already computed postsingular verdict.
pub fn hyperbolicity(post: &PostsingularVerdict, cfg: &EscapeConfig) -> Hyperbolicity {
    let attracting = 1.0 - cfg.bounded_multiplier_margin;
    let repelling = post.orbits.iter().any(|o| o.classification.capture.is_some_and(|c| c.multiplier > 1.0));
    match post.verdict {
        PostsingularKind::Unbounded => Hyperbolicity::NotHyperbolic,
        _ if repelling && !post.over_approximation => Hyperbolicity::NotHyperbolic,
        PostsingularKind::Bounded
            if post.orbits.iter().all(|o| o.classification.capture.is_some_and(|c| c.multiplier <= attracting)) =>
        {
            Hyperbolicity::Hyperbolic
        }
        _ => Hyperbolicity::Undecided,
    }
}

/// Hyperbolic when every singular orbit is captured by an attracting cycle.
pub fn is_hyperbolic(f: &FunctionExpr, sing: &SingularSet, cfg: &EscapeConfig) -> Hyperbolicity {
    hyperbolicity(&postsingular_verdict(f, sing, cfg, DEFAULT_POSTSINGULAR_BOUND), cfg)
}

/// Slope of `log log M(r)` against `log r` over the two largest usable radii.
///
/// `log M(r)` is the maximum of `ln|f|` over `samples_per_circle` equally
/// spaced points of `|z| = r`, evaluated without overflow for atoms.
pub fn order_estimate(f: &FunctionExpr, radii: &[f64], samples_per_circle: usize) -> Result<f64, SingularError> {
    if radii.len() < 2 || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SingularError::InvalidRadii);
    }
    if samples_per_circle < 256 {
        return Err(SingularError::TooFewSamples(samples_per_circle));
    }
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let log_max = (0..samples_per_circle)
            .into_par_iter()
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / samples_per_circle as f64;
                f.log_abs(Complex64::from_polar(r, theta))
            })
            .try_reduce(|| f64::NEG_INFINITY, |a, b| Some(a.max(b)))
            .ok_or(SingularError::OrderOverflow(r))?;
        if log_max > 0.0 {
            points.push((r.ln(), log_max.ln()));
        }
    }
    let [.., (x0, y0), (x1, y1)] = points[..] else {
        return Err(SingularError::DegenerateRadii);
    };
    Ok((y1 - y0) / (x1 - x0))
}

/// Fixed points `(2k+1)πi` of `z + 1 + e^{-z}`, each checked to `1e-12·(1+|z|)`.
pub fn fixed_points_fatou(ks: RangeInclusive<i64>) -> Result<Vec<Complex64>, SingularError> {
    let f = FunctionExpr::fatou();
    ks.map(|k| {
        let z = Complex64::new(0.0, (2 * k + 1) as f64 * PI);
        let residual = f.eval(z).finite().map_or(f64::INFINITY, |w| (w - z).norm());
        if residual <= 1e-12 * (1.0 + z.norm()) {
            Ok(z)
        } else {
            Err(SingularError::FixedPointResidual { k, residual })
        }
    })
    .collect()
}

/// One CSV row per singular value: `kind,k,re,im,verdict,capture_step`.
pub fn singular_csv(post: &PostsingularVerdict) -> String {
    let mut out = String::from("kind,k,re,im,verdict,capture_step\n");
    for o in &post.orbits {
        out.push_str(&format!(
            "{},{},{:?},{:?},{},{}\n",
            o.singular.kind,
            o.singular.k,
            o.singular.value.re,
            o.singular.value.im,
            o.classification.verdict,
            o.classification.step
        ));
    }
    out
}
