//! Three-valued orbit classification.
//!
//! An orbit is declared `Escaping` only on a certificate that implies
//! divergence, and `Bounded` only on positive evidence (an exact fixed point or
//! cycle, or capture by an attracting cycle). Everything else is `Undecided`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::function::{FunctionExpr, Value};

/// Longest cycle period searched for by exact-cycle and attractor detection.
pub const MAX_PERIOD: usize = 8;

/// Relative tolerance for exact fixed points and cycles.
pub const EXACT_CYCLE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("invalid escape configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate search box")]
    DegenerateBox,
    #[error("no escaping point found in the search box within the horizon")]
    NotFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeConfig {
    pub max_iter: usize,
    pub hard_radius: f64,
    pub fatou_re_threshold: f64,
    pub bounded_capture_eps: f64,
    pub bounded_multiplier_margin: f64,
    pub attractor_search: bool,
}

impl Default for EscapeConfig {
    fn default() -> Self {
        EscapeConfig {
            max_iter: 200,
            hard_radius: 1e15,
            fatou_re_threshold: 0.05,
            bounded_capture_eps: 1e-8,
            bounded_multiplier_margin: 0.01,
            attractor_search: true,
        }
    }
}

impl EscapeConfig {
    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), OrbitError> {
        let bad = |m: &str| Err(OrbitError::InvalidConfig(m.to_string()));
        if self.max_iter < 1 {
            return bad("max_iter must be >= 1");
        }
        if !(self.hard_radius >= 1e10) || !self.hard_radius.is_finite() {
            return bad("hard_radius must be finite and >= 1e10");
        }
        if !(self.fatou_re_threshold > 0.0) || !self.fatou_re_threshold.is_finite() {
            return bad("fatou_re_threshold must be > 0");
        }
        if !(self.bounded_capture_eps > 0.0) || !self.bounded_capture_eps.is_finite() {
            return bad("bounded_capture_eps must be > 0");
        }
        if !(self.bounded_multiplier_margin > 0.0 && self.bounded_multiplier_margin < 1.0) {
            return bad("bounded_multiplier_margin must lie in (0, 1)");
        }
        Ok(())
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Escaping,
    Bounded,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Escaping => "Escaping",
            Verdict::Bounded => "Bounded",
            Verdict::Undecided => "Undecided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Certificate {
    /// An iterate overflowed, or exceeded the hard radius and kept growing.
    OverflowCert,
    /// Fatou family: an iterate entered `Re z > threshold`, where `Re` grows monotonically.
    RealPartCert,
    /// Fatou word with a nonzero `2πi` shift whose untranslated part is
    /// bounded, or a pure translation `z ↦ z + s` with `s ≠ 0`.
    TranslationCert,
    /// Captured by an attracting cycle.
    AttractorCert,
    /// Exact fixed point or cycle that is not attracting.
    FixedPoint,
    HorizonExhausted,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The cycle an orbit was captured by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capture {
    /// A point of the cycle (refined when found by attractor search).
    pub point: Complex64,
    pub period: usize,
    /// Modulus of the cycle multiplier `|(f^p)'(point)|`.
    pub multiplier: f64,
    /// `|f^p(point) - point|`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Index of the orbit value at which the certificate fired.
    pub step: usize,
    pub capture: Option<Capture>,
}

impl Classification {
    fn escaping(certificate: Certificate, step: usize) -> Self {
        Classification { verdict: Verdict::Escaping, certificate, step, capture: None }
    }

    fn undecided(step: usize) -> Self {
        Classification { verdict: Verdict::Undecided, certificate: Certificate::HorizonExhausted, step, capture: None }
    }

    pub fn is_escaping(&self) -> bool {
        self.verdict == Verdict::Escaping
    }

    pub fn is_bounded(&self) -> bool {
        self.verdict == Verdict::Bounded
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} step={}", self.verdict, self.certificate, self.step)?;
        if let Some(c) = &self.capture {
            write!(f, " period={} multiplier={:.6e}", c.period, c.multiplier)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub seed: Complex64,
    pub values: Vec<Complex64>,
    pub classification: Classification,
}

/// Classifies the orbit of `z` under `f`.
pub fn classify(f: &FunctionExpr, z: Complex64, cfg: &EscapeConfig) -> Classification {
    trace(f, z, cfg, false).1
}

/// Classifies and also returns the orbit values up to the certificate step.
pub fn classify_traced(f: &FunctionExpr, z: Complex64, cfg: &EscapeConfig) -> OrbitRecord {
    let (values, classification) = trace(f, z, cfg, true);
    OrbitRecord { seed: z, values, classification }
}

/// Classifies an evaluated value. Overflowed inputs have no known location and
/// are reported `Undecided`.
pub fn classify_value(f: &FunctionExpr, v: Value, cfg: &EscapeConfig) -> Classification {
    match v {
        Value::Finite(z) => classify(f, z, cfg),
        Value::Overflow => Classification::undecided(0),
    }
}

fn trace(f: &FunctionExpr, seed: Complex64, cfg: &EscapeConfig, record: bool) -> (Vec<Complex64>, Classification) {
    if f.pure_translation().is_some_and(|s| s != Complex64::new(0.0, 0.0)) {
        let values = if record { vec![seed] } else { Vec::new() };
        return (values, Classification::escaping(Certificate::TranslationCert, 0));
    }
    let word = f.fatou_word();
    if let Some(w) = word {
        if w.shift != 0 {
            // f_word(z)^n = f^{nN}(z) + 2πi·nM, so a bounded untranslated orbit escapes.
            let untranslated = FunctionExpr::fatou()
                .iterate(u32::try_from(w.applications).unwrap_or(u32::MAX))
                .expect("fatou word has at least one application");
            let part = classify(&untranslated, seed, cfg);
            if part.is_bounded() {
                let values = if record { vec![seed] } else { Vec::new() };
                return (values, Classification::escaping(Certificate::TranslationCert, part.step));
            }
        }
    }
    scan(f, seed, cfg, word.is_some(), record)
}

fn scan(
    f: &FunctionExpr,
    seed: Complex64,
    cfg: &EscapeConfig,
    fatou_family: bool,
    record: bool,
) -> (Vec<Complex64>, Classification) {
    let mut values = Vec::new();
    // Last MAX_PERIOD orbit values, most recent last.
    let mut history: Vec<Complex64> = Vec::with_capacity(MAX_PERIOD + 1);
    let mut z = seed;
    for step in 0..cfg.max_iter {
        if record {
            values.push(z);
        }
        if fatou_family && z.re > cfg.fatou_re_threshold {
            return (values, Classification::escaping(Certificate::RealPartCert, step));
        }
        let Value::Finite(next) = f.eval(z) else {
            return (values, Classification::escaping(Certificate::OverflowCert, step));
        };
        if z.norm() > cfg.hard_radius && next.norm() > z.norm() {
            return (values, Classification::escaping(Certificate::OverflowCert, step));
        }
        history.push(z);
        if history.len() > MAX_PERIOD {
            history.remove(0);
        }
        if let Some(c) = exact_cycle(f, &history, next, cfg) {
            return (values, c.with_step(step + 1 - c.capture.map_or(1, |c| c.period)));
        }
        if cfg.attractor_search {
            if let Some(c) = attractor(f, &history, next, cfg) {
                if record {
                    values.push(next);
                }
                return (values, c.with_step(step + 1));
            }
        }
        z = next;
    }
    if record {
        values.push(z);
    }
    (values, Classification::undecided(cfg.max_iter))
}

impl Classification {
    fn with_step(mut self, step: usize) -> Self {
        self.step = step;
        self
    }
}

/// `next` coincides with an earlier value to `EXACT_CYCLE_TOL`: the orbit is on a cycle.
fn exact_cycle(f: &FunctionExpr, history: &[Complex64], next: Complex64, cfg: &EscapeConfig) -> Option<Classification> {
    for period in 1..=history.len() {
        let start = history[history.len() - period];
        if (next - start).norm() <= EXACT_CYCLE_TOL * (1.0 + start.norm()) {
            let (image, multiplier) = cycle_map(f, start, period)?;
            let capture =
                Capture { point: start, period, multiplier: multiplier.norm(), residual: (image - start).norm() };
            let attracting = capture.multiplier <= 1.0 - cfg.bounded_multiplier_margin;
            let certificate = if attracting { Certificate::AttractorCert } else { Certificate::FixedPoint };
            return Some(Classification { verdict: Verdict::Bounded, certificate, step: 0, capture: Some(capture) });
        }
    }
    None
}

/// `next` is within `bounded_capture_eps` of the value `period` steps earlier;
/// refine the nearby cycle by Newton's method and accept it when attracting.
fn attractor(f: &FunctionExpr, history: &[Complex64], next: Complex64, cfg: &EscapeConfig) -> Option<Classification> {
    let eps = cfg.bounded_capture_eps;
    for period in 1..=history.len() {
        let start = history[history.len() - period];
        if (next - start).norm() > eps * (1.0 + next.norm()) {
            continue;
        }
        let Some(capture) = refine_cycle(f, next, period) else {
            continue;
        };
        if capture.multiplier > 1.0 - cfg.bounded_multiplier_margin {
            continue;
        }
        if capture.residual > eps * (1.0 + capture.point.norm()) {
            continue;
        }
        if (next - capture.point).norm() > eps * (1.0 + capture.point.norm()) {
            continue;
        }
        return Some(Classification {
            verdict: Verdict::Bounded,
            certificate: Certificate::AttractorCert,
            step: 0,
            capture: Some(capture),
        });
    }
    None
}

/// `(f^p(z), (f^p)'(z))`, or `None` on overflow.
fn cycle_map(f: &FunctionExpr, z: Complex64, period: usize) -> Option<(Complex64, Complex64)> {
    let mut w = z;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..period {
        let (v, dv) = f.eval_with_derivative(w);
        w = v.finite()?;
        d *= dv.finite()?;
    }
    Some((w, d))
}

/// Newton iteration on `f^p(x) - x` starting at `x0`.
pub fn refine_cycle(f: &FunctionExpr, x0: Complex64, period: usize) -> Option<Capture> {
    let one = Complex64::new(1.0, 0.0);
    let mut x = x0;
    for _ in 0..20 {
        let (image, d) = cycle_map(f, x, period)?;
        let denom = d - one;
        if denom.norm() < 1e-300 {
            return None;
        }
        let delta = (image - x) / denom;
        x -= delta;
        if !(x.re.is_finite() && x.im.is_finite()) {
            return None;
        }
        if delta.norm() <= 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    let (image, d) = cycle_map(f, x, period)?;
    Some(Capture { point: x, period, multiplier: d.norm(), residual: (image - x).norm() })
}

/// Records `n` steps of the orbit of `z` (fewer if an iterate overflows) and
/// attaches the classification of `z` under `cfg`.
pub fn orbit(f: &FunctionExpr, z: Complex64, n: usize, cfg: &EscapeConfig) -> OrbitRecord {
    let mut values = Vec::with_capacity(n + 1);
    values.push(z);
    let mut w = z;
    for _ in 0..n {
        match f.eval(w) {
            Value::Finite(next) => {
                values.push(next);
                w = next;
            }
            Value::Overflow => break,
        }
    }
    OrbitRecord { seed: z, values, classification: classify(f, z, cfg) }
}

/// Axis-aligned search box `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Window { re_min, re_max, im_min, im_max }
    }

    pub fn is_valid(&self) -> bool {
        [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite())
            && self.re_min < self.re_max
            && self.im_min < self.im_max
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }
}

/// Number of refinement levels in [`find_escaping_point`]; level `L` probes a
/// `(2^L + 1)²` lattice including the box corners.
const SEARCH_LEVELS: u32 = 6;

/// Scans the box coarse to fine and returns the first point certified escaping.
pub fn find_escaping_point(f: &FunctionExpr, search: &Window, cfg: &EscapeConfig) -> Result<Complex64, OrbitError> {
    cfg.validate()?;
    if !search.is_valid() {
        return Err(OrbitError::DegenerateBox);
    }
    let center = search.center();
    if classify(f, center, cfg).is_escaping() {
        return Ok(center);
    }
    for level in 0..SEARCH_LEVELS {
        let n = 1usize << level;
        for j in 0..=n {
            for i in 0..=n {
                let z = Complex64::new(
                    search.re_min + (search.re_max - search.re_min) * i as f64 / n as f64,
                    search.im_min + (search.im_max - search.im_min) * j as f64 / n as f64,
                );
                if classify(f, z, cfg).is_escaping() {
                    return Ok(z);
                }
            }
        }
    }
    Err(OrbitError::NotFound)
}
