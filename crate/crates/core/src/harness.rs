//! Sampled, three-valued checks of escaping-set containments.
//!
//! Every check is a set of implications evaluated per sample:
//!
//! * the sample is *applicable* when the hypothesis is certified true and the
//!   conclusion is certified either way;
//! * it *passes* when the conclusion is certified true;
//! * it is *violated* when the conclusion is certified false;
//! * everything else is *vacuous*.
//!
//! So `applicable = passed + violated`, and an `Undecided` orbit never turns
//! into a pass or a violation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::function::{commutes_numerically, relative_difference, FunctionExpr, Value};
use crate::orbit::{classify, classify_value, EscapeConfig, Verdict, Window};
use crate::singular::{
    fixed_points_fatou, hyperbolicity, postsingular_verdict, singular_set_of, Hyperbolicity, PostsingularKind,
    SingularError, DEFAULT_POSTSINGULAR_BOUND,
};

/// Generator used for random sample specs; recorded in every report.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3), two uniform f64 draws per point";

/// Tolerance for the sampled permutability / semiconjugacy precondition.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

/// Convergence tolerance of the preimage root search, relative to `1 + |z|`.
pub const PREIMAGE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("power containment exponents must be >= 1 (got i={i}, j={j})")]
    Exponents { i: u32, j: u32 },
    #[error("invalid sample spec: {0}")]
    Samples(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("unknown pair {0:?} (expected fatou or exp)")]
    UnknownPair(String),
    #[error(transparent)]
    Singular(#[from] SingularError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SampleMode {
    /// Pixel centers of a `width × height` lattice.
    Grid {
        width: usize,
        height: usize,
    },
    Random {
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    #[serde(flatten)]
    pub mode: SampleMode,
    pub window: Window,
}

impl SampleSpec {
    pub fn grid(window: Window, width: usize, height: usize) -> Self {
        SampleSpec { mode: SampleMode::Grid { width, height }, window }
    }

    pub fn random(window: Window, count: usize, seed: u64) -> Self {
        SampleSpec { mode: SampleMode::Random { count, seed }, window }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if !self.window.is_valid() {
            return Err(HarnessError::Samples("window must satisfy min < max on both axes".into()));
        }
        let n = match self.mode {
            SampleMode::Grid { width, height } => width.saturating_mul(height),
            SampleMode::Random { count, .. } => count,
        };
        if n == 0 {
            return Err(HarnessError::Samples("sample spec yields no points".into()));
        }
        Ok(())
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            SampleMode::Random { seed, .. } => Some(seed),
            SampleMode::Grid { .. } => None,
        }
    }

    /// The deterministic point sequence of this spec.
    pub fn points(&self) -> Vec<Complex64> {
        let w = &self.window;
        match self.mode {
            SampleMode::Grid { width, height } => {
                let dx = (w.re_max - w.re_min) / width as f64;
                let dy = (w.im_max - w.im_min) / height as f64;
                (0..height)
                    .flat_map(|py| {
                        (0..width).map(move |px| {
                            Complex64::new(w.re_min + (px as f64 + 0.5) * dx, w.im_max - (py as f64 + 0.5) * dy)
                        })
                    })
                    .collect()
            }
            SampleMode::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        let v: f64 = rng.gen();
                        Complex64::new(w.re_max - u * (w.re_max - w.re_min), w.im_max - v * (w.im_max - w.im_min))
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for SampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.window;
        match self.mode {
            SampleMode::Grid { width, height } => write!(f, "grid {width}x{height}")?,
            SampleMode::Random { count, seed } => write!(f, "random {count} seed={seed}")?,
        }
        write!(f, " on [{},{}]x[{},{}]", w.re_min, w.re_max, w.im_min, w.im_max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub applicable: usize,
    pub passed: usize,
    pub violated: usize,
    pub vacuous_undecided: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.applicable + self.vacuous_undecided
    }

    pub fn vacuous_fraction(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.vacuous_undecided as f64 / self.total() as f64
        }
    }

    fn add(&mut self, outcome: &Outcome) {
        match outcome {
            Outcome::Vacuous => self.vacuous_undecided += 1,
            Outcome::Pass => {
                self.applicable += 1;
                self.passed += 1;
            }
            Outcome::Violation(_) => {
                self.applicable += 1;
                self.violated += 1;
            }
        }
    }
}

/// A certified counterexample: the sample, the clause, and the verdicts on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: Complex64,
    pub clause: String,
    pub hypothesis: Vec<(String, Verdict)>,
    pub conclusion: Vec<(String, Verdict)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Vacuous,
    Pass,
    Violation(Witness),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub check_name: String,
    pub functions: Vec<String>,
    pub sample_spec: Option<SampleSpec>,
    pub rng: Option<String>,
    pub cfg: Option<EscapeConfig>,
    pub counts: Counts,
    /// Counts per clause, keyed by clause label.
    pub clauses: BTreeMap<String, Counts>,
    pub violations: Vec<Witness>,
    pub warnings: Vec<String>,
    pub details: BTreeMap<String, Json>,
    pub wall_time_ms: f64,
}

impl PropertyReport {
    fn new(
        name: impl Into<String>,
        functions: Vec<String>,
        samples: Option<&SampleSpec>,
        cfg: Option<&EscapeConfig>,
    ) -> Self {
        PropertyReport {
            check_name: name.into(),
            functions,
            sample_spec: samples.copied(),
            rng: samples.and_then(|s| s.seed()).map(|_| RNG_ALGORITHM.to_string()),
            cfg: cfg.copied(),
            counts: Counts::default(),
            clauses: BTreeMap::new(),
            violations: Vec::new(),
            warnings: Vec::new(),
            details: BTreeMap::new(),
            wall_time_ms: 0.0,
        }
    }

    fn record(&mut self, clause: &str, outcome: Outcome) {
        self.counts.add(&outcome);
        self.clauses.entry(clause.to_string()).or_default().add(&outcome);
        if let Outcome::Violation(w) = outcome {
            self.violations.push(w);
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.sample_spec.as_ref().and_then(|s| s.seed())
    }

    /// Counts of a clause, zero when it never fired.
    pub fn clause(&self, label: &str) -> Counts {
        self.clauses.get(label).copied().unwrap_or_default()
    }

    /// `name,applicable,passed,violated,vacuous,seed`.
    pub fn csv_row(&self) -> String {
        let c = &self.counts;
        format!(
            "{},{},{},{},{},{}",
            self.check_name,
            c.applicable,
            c.passed,
            c.violated,
            c.vacuous_undecided,
            self.seed().map(|s| s.to_string()).unwrap_or_default()
        )
    }

    pub fn summary_line(&self) -> String {
        let c = &self.counts;
        format!(
            "{:<32} {} applicable={} passed={} violated={} vacuous={} ({:.1}% vacuous){}",
            self.check_name,
            if c.violated == 0 { "ok  " } else { "FAIL" },
            c.applicable,
            c.passed,
            c.violated,
            c.vacuous_undecided,
            100.0 * c.vacuous_fraction(),
            if self.warnings.is_empty() { String::new() } else { format!(" warnings={}", self.warnings.len()) }
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub const CSV_HEADER: &str = "name,applicable,passed,violated,vacuous,seed";

pub fn reports_csv(reports: &[PropertyReport]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// A single implication `hypothesis ⇒ conclusion` at one sample.
struct Clause<'a> {
    label: &'a str,
    z: Complex64,
    hypothesis: Vec<(String, Verdict)>,
    hypothesis_holds: bool,
    conclusion: Vec<(String, Verdict)>,
    /// `Some(true)` certified true, `Some(false)` certified false.
    conclusion_holds: Option<bool>,
}

impl Clause<'_> {
    fn outcome(self) -> (String, Outcome) {
        let outcome = match (self.hypothesis_holds, self.conclusion_holds) {
            (true, Some(true)) => Outcome::Pass,
            (true, Some(false)) => Outcome::Violation(Witness {
                z: self.z,
                clause: self.label.to_string(),
                hypothesis: self.hypothesis,
                conclusion: self.conclusion,
            }),
            _ => Outcome::Vacuous,
        };
        (self.label.to_string(), outcome)
    }
}

/// Membership claim `x ∈ I(F)`: certified true on Escaping, false on Bounded.
fn escapes(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Escaping => Some(true),
        Verdict::Bounded => Some(false),
        Verdict::Undecided => None,
    }
}

fn membership_clause(label: &str, z: Complex64, hyp: (&str, Verdict), concl: (&str, Verdict)) -> (String, Outcome) {
    Clause {
        label,
        z,
        hypothesis: vec![(hyp.0.to_string(), hyp.1)],
        hypothesis_holds: hyp.1 == Verdict::Escaping,
        conclusion: vec![(concl.0.to_string(), concl.1)],
        conclusion_holds: escapes(concl.1),
    }
    .outcome()
}

/// `x ∈ I(A) ∪ I(B)`.
fn union_holds(a: Verdict, b: Verdict) -> Option<bool> {
    if a == Verdict::Escaping || b == Verdict::Escaping {
        Some(true)
    } else if a == Verdict::Bounded && b == Verdict::Bounded {
        Some(false)
    } else {
        None
    }
}

fn run_samples<F>(report: &mut PropertyReport, points: &[Complex64], per_sample: F)
where
    F: Fn(Complex64) -> Vec<(String, Outcome)> + Sync,
{
    let outcomes: Vec<Vec<(String, Outcome)>> = points.par_iter().map(|&z| per_sample(z)).collect();
    for (label, outcome) in outcomes.into_iter().flatten() {
        report.record(&label, outcome);
    }
}

fn names(fs: &[&FunctionExpr]) -> Vec<String> {
    fs.iter().map(|f| f.to_string()).collect()
}

fn permutability_warning(report: &mut PropertyReport, f: &FunctionExpr, g: &FunctionExpr, points: &[Complex64]) {
    let c = commutes_numerically(f, g, points, HYPOTHESIS_TOL);
    report.details.insert("permutability_max_relative_difference".into(), json!(c.max_relative_difference));
    if let Some((z, fg, gf)) = c.witness {
        report.warnings.push(format!(
            "f and g do not commute numerically: at z={z} f(g(z))={fg} but g(f(z))={gf}; the containment assumes permutability"
        ));
    }
}

fn finish(mut report: PropertyReport, started: Instant) -> PropertyReport {
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    report
}

/// `I(f∘g) ⊂ I(f) ∪ I(g)`.
pub fn check_union_containment(
    f: &FunctionExpr,
    g: &FunctionExpr,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> PropertyReport {
    let started = Instant::now();
    let mut report = PropertyReport::new("union_containment", names(&[f, g]), Some(samples), Some(cfg));
    let points = samples.points();
    permutability_warning(&mut report, f, g, &points);
    let fg = f.compose(g);
    run_samples(&mut report, &points, |z| {
        let h = classify(&fg, z, cfg).verdict;
        if h != Verdict::Escaping {
            return vec![("I(fg) in I(f)+I(g)".into(), Outcome::Vacuous)];
        }
        let (vf, vg) = (classify(f, z, cfg).verdict, classify(g, z, cfg).verdict);
        vec![Clause {
            label: "I(fg) in I(f)+I(g)",
            z,
            hypothesis: vec![("fg".into(), h)],
            hypothesis_holds: true,
            conclusion: vec![("f".into(), vf), ("g".into(), vg)],
            conclusion_holds: union_holds(vf, vg),
        }
        .outcome()]
    });
    finish(report, started)
}

/// `I(f∘g)` is forward and backward invariant under `f` and `g`.
pub fn check_complete_invariance(
    f: &FunctionExpr,
    g: &FunctionExpr,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> PropertyReport {
    let started = Instant::now();
    let mut report = PropertyReport::new("complete_invariance", names(&[f, g]), Some(samples), Some(cfg));
    let points = samples.points();
    permutability_warning(&mut report, f, g, &points);
    let fg = f.compose(g);
    run_samples(&mut report, &points, |z| {
        let at_z = classify(&fg, z, cfg).verdict;
        let mut out = Vec::with_capacity(4);
        for (name, map) in [("f", f), ("g", g)] {
            let image = classify_value(&fg, map.eval(z), cfg).verdict;
            let (fwd, bwd) = if name == "f" { ("forward f", "backward f") } else { ("forward g", "backward g") };
            out.push(membership_clause(fwd, z, ("fg at z", at_z), ("fg at image", image)));
            out.push(membership_clause(bwd, z, ("fg at image", image), ("fg at z", at_z)));
        }
        out
    });
    finish(report, started)
}

/// `I(f^i∘g^j) ⊂ I(f) ∪ I(g)` and `I(f^i∘g^j) ⊂ I(f∘g)`.
///
/// For `i < j` the roles of `(f, i)` and `(g, j)` are swapped and the swap is
/// recorded in the report details.
pub fn check_power_containments(
    f: &FunctionExpr,
    g: &FunctionExpr,
    i: u32,
    j: u32,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> Result<PropertyReport, HarnessError> {
    if i < 1 || j < 1 {
        return Err(HarnessError::Exponents { i, j });
    }
    let started = Instant::now();
    let mut report =
        PropertyReport::new(format!("power_containments_{i}_{j}"), names(&[f, g]), Some(samples), Some(cfg));
    let swapped = i < j;
    let (p, q, pi, qj) = if swapped { (g, f, j, i) } else { (f, g, i, j) };
    report.details.insert("swapped".into(), json!(swapped));
    let points = samples.points();
    permutability_warning(&mut report, f, g, &points);
    let power = p.iterate(pi).expect("i >= 1").compose(&q.iterate(qj).expect("j >= 1"));
    let pq = p.compose(q);
    report.details.insert("composite".into(), json!(power.to_string()));
    run_samples(&mut report, &points, |z| {
        let h = classify(&power, z, cfg).verdict;
        if h != Verdict::Escaping {
            return vec![("(iii)".into(), Outcome::Vacuous), ("(iv)".into(), Outcome::Vacuous)];
        }
        let (vp, vq, vpq) = (classify(p, z, cfg).verdict, classify(q, z, cfg).verdict, classify(&pq, z, cfg).verdict);
        vec![
            Clause {
                label: "(iii)",
                z,
                hypothesis: vec![("power".into(), h)],
                hypothesis_holds: true,
                conclusion: vec![("p".into(), vp), ("q".into(), vq)],
                conclusion_holds: union_holds(vp, vq),
            }
            .outcome(),
            membership_clause("(iv)", z, ("power", h), ("pq", vpq)),
        ]
    });
    Ok(finish(report, started))
}

/// `I(f)`, `I(g)` backward invariant under `f∘g`; `w ∉ I(f) ⇒ g(w) ∉ I(f)` and symmetrically.
pub fn check_backward_invariance(
    f: &FunctionExpr,
    g: &FunctionExpr,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> PropertyReport {
    let started = Instant::now();
    let mut report = PropertyReport::new("backward_invariance", names(&[f, g]), Some(samples), Some(cfg));
    let points = samples.points();
    permutability_warning(&mut report, f, g, &points);
    let fg = f.compose(g);
    run_samples(&mut report, &points, |z| {
        let image = fg.eval(z);
        let mut out = Vec::with_capacity(4);
        for (label, target) in [("(1) I(f)", f), ("(1) I(g)", g)] {
            let at_image = classify_value(target, image, cfg).verdict;
            let at_z = classify(target, z, cfg).verdict;
            out.push(membership_clause(label, z, ("target at fg(z)", at_image), ("target at z", at_z)));
        }
        for (label, target, other) in [("(2) g keeps F(f)", f, g), ("(2) f keeps F(g)", g, f)] {
            let at_w = classify(target, z, cfg).verdict;
            let moved = classify_value(target, other.eval(z), cfg).verdict;
            out.push(
                Clause {
                    label,
                    z,
                    hypothesis: vec![("target at w".into(), at_w)],
                    hypothesis_holds: at_w == Verdict::Bounded,
                    conclusion: vec![("target at other(w)".into(), moved)],
                    conclusion_holds: escapes(moved).map(|e| !e),
                }
                .outcome(),
            );
        }
        out
    });
    finish(report, started)
}

/// `f^{-1}(I(h)) ⊂ I(g)` when `f∘g = h∘f`.
pub fn check_semiconjugacy(
    f: &FunctionExpr,
    g: &FunctionExpr,
    h: &FunctionExpr,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> PropertyReport {
    let started = Instant::now();
    let mut report = PropertyReport::new("semiconjugacy", names(&[f, g, h]), Some(samples), Some(cfg));
    let points = samples.points();
    let fg = f.compose(g);
    let hf = h.compose(f);
    let mut max_diff = 0.0f64;
    let mut compared = 0usize;
    let mut witness = None;
    for &z in &points {
        if let (Some(a), Some(b)) = (fg.eval(z).finite(), hf.eval(z).finite()) {
            compared += 1;
            let d = relative_difference(a, b);
            max_diff = max_diff.max(d);
            if d > HYPOTHESIS_TOL && witness.is_none() {
                witness = Some((z, a, b));
            }
        }
    }
    report.details.insert("hypothesis_max_relative_difference".into(), json!(max_diff));
    report.details.insert("hypothesis_compared".into(), json!(compared));
    report.details.insert("hypothesis_holds".into(), json!(witness.is_none()));
    if let Some((z, a, b)) = witness {
        report.warnings.push(format!("f∘g != h∘f numerically: at z={z} f(g(z))={a} but h(f(z))={b}"));
    }
    run_samples(&mut report, &points, |z| {
        let under_h = classify_value(h, f.eval(z), cfg).verdict;
        let under_g = classify(g, z, cfg).verdict;
        vec![membership_clause("f^-1(I(h)) in I(g)", z, ("h at f(z)", under_h), ("g at z", under_g))]
    });
    finish(report, started)
}

/// `g(I(f)) ⊂ I(f)` and `f(I(g)) ⊂ I(g)` for `f(z) = z + 1 + e^{-z}`, `g = f + 2πi`.
pub fn check_forward_invariance_pair(samples: &SampleSpec, cfg: &EscapeConfig) -> PropertyReport {
    let started = Instant::now();
    let f = FunctionExpr::fatou();
    let g = FunctionExpr::fatou_shifted();
    let mut report = PropertyReport::new("forward_invariance_pair", names(&[&f, &g]), Some(samples), Some(cfg));
    run_samples(&mut report, &samples.points(), |z| {
        vec![
            membership_clause(
                "g(I(f)) in I(f)",
                z,
                ("f at z", classify(&f, z, cfg).verdict),
                ("f at g(z)", classify_value(&f, g.eval(z), cfg).verdict),
            ),
            membership_clause(
                "f(I(g)) in I(g)",
                z,
                ("g at z", classify(&g, z, cfg).verdict),
                ("g at f(z)", classify_value(&g, f.eval(z), cfg).verdict),
            ),
        ]
    });
    finish(report, started)
}

/// `(f∘g)^n(z) = f^{2n}(z) + 2nπi` and `(g∘f)^n(z) = f^{2n}(z) + 2nπi` for `n <= n_max`.
///
/// Each side is iterated on its own; samples where either side overflows are
/// vacuous for that `n`.
pub fn check_composition_identity(samples: &SampleSpec, n_max: u32, tol: f64) -> PropertyReport {
    let started = Instant::now();
    let f = FunctionExpr::fatou();
    let g = FunctionExpr::fatou_shifted();
    let fg = f.compose(&g);
    let gf = g.compose(&f);
    let mut report = PropertyReport::new("composition_identity", names(&[&f, &g]), Some(samples), None);
    let points = samples.points();
    let per_point: Vec<(Vec<(String, Outcome)>, f64)> = points
        .par_iter()
        .map(|&z| {
            let mut out = Vec::new();
            let mut worst = 0.0f64;
            let (mut lhs_fg, mut lhs_gf) = (Value::Finite(z), Value::Finite(z));
            let mut rhs = Value::Finite(z);
            for n in 0..=n_max {
                if n > 0 {
                    lhs_fg = fg.eval_value(lhs_fg);
                    lhs_gf = gf.eval_value(lhs_gf);
                    rhs = f.eval_value(f.eval_value(rhs));
                }
                let shift = Complex64::new(0.0, 2.0 * PI * f64::from(n));
                for (label, lhs) in [("(fg)^n", lhs_fg), ("(gf)^n", lhs_gf)] {
                    let outcome = match (lhs, rhs) {
                        (Value::Finite(l), Value::Finite(r)) => {
                            let err = relative_difference(l, r + shift);
                            worst = worst.max(err);
                            if err <= tol {
                                Outcome::Pass
                            } else {
                                Outcome::Violation(Witness {
                                    z,
                                    clause: format!("{label} n={n} relative error {err:e}"),
                                    hypothesis: Vec::new(),
                                    conclusion: Vec::new(),
                                })
                            }
                        }
                        _ => Outcome::Vacuous,
                    };
                    out.push((label.to_string(), outcome));
                }
            }
            (out, worst)
        })
        .collect();
    let mut worst = 0.0f64;
    for (outcomes, w) in per_point {
        worst = worst.max(w);
        for (label, o) in outcomes {
            report.record(&label, o);
        }
    }
    report.details.insert("n_max".into(), json!(n_max));
    report.details.insert("tolerance".into(), json!(tol));
    report.details.insert("max_relative_error".into(), json!(worst));
    finish(report, started)
}

/// Fixed points `(2k+1)πi` of `f`: bounded under `f`, escaping under `g` and `f∘g`.
pub fn check_fixed_points_escape(
    ks: RangeInclusive<i64>,
    n_probe: u32,
    cfg: &EscapeConfig,
) -> Result<PropertyReport, HarnessError> {
    let started = Instant::now();
    let f = FunctionExpr::fatou();
    let g = FunctionExpr::fatou_shifted();
    let fg = f.compose(&g);
    let mut report = PropertyReport::new("fixed_points_escape", names(&[&f, &g]), None, Some(cfg));
    report.details.insert("k_range".into(), json!([ks.start(), ks.end()]));
    let fixed = fixed_points_fatou(ks)?;
    let mut counterexample = None;
    let mut probe_deviation = 0.0f64;
    for &z in &fixed {
        let (vf, vg, vfg) = (classify(&f, z, cfg).verdict, classify(&g, z, cfg).verdict, classify(&fg, z, cfg).verdict);
        let holds = match (vf, vg, vfg) {
            (Verdict::Bounded, Verdict::Escaping, Verdict::Escaping) => Some(true),
            (Verdict::Escaping, _, _) | (_, Verdict::Bounded, _) | (_, _, Verdict::Bounded) => Some(false),
            _ => None,
        };
        if vf == Verdict::Bounded && vfg == Verdict::Escaping && counterexample.is_none() {
            counterexample = Some(z);
        }
        let (label, outcome) = Clause {
            label: "Fix(f) in I(g) and I(fg), not I(f)",
            z,
            hypothesis: Vec::new(),
            hypothesis_holds: true,
            conclusion: vec![("f".into(), vf), ("g".into(), vg), ("fg".into(), vfg)],
            conclusion_holds: holds,
        }
        .outcome();
        report.record(&label, outcome);

        let mut w = z;
        for n in 1..=n_probe {
            match g.eval(w) {
                Value::Finite(next) => w = next,
                Value::Overflow => break,
            }
            let exact = (z + Complex64::new(0.0, 2.0 * PI * f64::from(n))).norm();
            probe_deviation = probe_deviation.max((w.norm() - exact).abs() / exact);
        }
    }
    report.details.insert("n_probe".into(), json!(n_probe));
    report.details.insert("probe_max_relative_deviation".into(), json!(probe_deviation));
    report.details.insert(
        "counterexample_I(fg)_not_in_I(f)_and_I(g)".into(),
        match counterexample {
            Some(z) => json!({ "witness": [z.re, z.im] }),
            None => Json::Null,
        },
    );
    Ok(finish(report, started))
}

/// Solves `g(w) = z` by damped Newton iteration from a few seeds.
///
/// Seeds are `2z - g(z)` (undoing the local translation of `g`) and `z`.
/// Returns the first root with `|g(w) - z| <= PREIMAGE_TOL·(1 + |z|)`.
pub fn solve_preimage(g: &FunctionExpr, z: Complex64) -> Option<Complex64> {
    let tol = PREIMAGE_TOL * (1.0 + z.norm());
    let mut seeds = Vec::with_capacity(2);
    if let Some(gz) = g.eval(z).finite() {
        seeds.push(z + z - gz);
    }
    seeds.push(z);
    'seeds: for seed in seeds {
        let mut w = seed;
        let Some(mut residual) = g.eval(w).finite().map(|v| v - z) else {
            continue;
        };
        for _ in 0..100 {
            if residual.norm() <= tol {
                return Some(w);
            }
            let Some(d) = g.eval_derivative(w).finite() else {
                continue 'seeds;
            };
            if d.norm() < 1e-300 {
                continue 'seeds;
            }
            let step = residual / d;
            let mut damping = 1.0;
            loop {
                let trial = w - step * damping;
                if let Some(r) = g.eval(trial).finite().map(|v| v - z) {
                    if r.norm() < residual.norm() {
                        w = trial;
                        residual = r;
                        break;
                    }
                }
                damping *= 0.5;
                if damping < 1e-6 {
                    continue 'seeds;
                }
            }
        }
        if residual.norm() <= tol {
            return Some(w);
        }
    }
    None
}

/// Preimages of escaping points escape: for `z ∈ I(f)` and a numerically found
/// `w` with `g(w) = z`, `w ∈ I(f)`. Non-convergent root searches are vacuous.
pub fn check_preimage_escape(
    f: &FunctionExpr,
    g: &FunctionExpr,
    samples: &SampleSpec,
    cfg: &EscapeConfig,
) -> PropertyReport {
    let started = Instant::now();
    let mut report = PropertyReport::new("preimage_escape", names(&[f, g]), Some(samples), Some(cfg));
    let points = samples.points();
    permutability_warning(&mut report, f, g, &points);
    let results: Vec<(Option<bool>, (String, Outcome))> = points
        .par_iter()
        .map(|&z| {
            let at_z = classify(f, z, cfg).verdict;
            if at_z != Verdict::Escaping {
                return (None, ("g^-1(I(f)) in I(f)".to_string(), Outcome::Vacuous));
            }
            match solve_preimage(g, z) {
                None => (Some(false), ("g^-1(I(f)) in I(f)".to_string(), Outcome::Vacuous)),
                Some(w) => {
                    let at_w = classify(f, w, cfg).verdict;
                    (Some(true), membership_clause("g^-1(I(f)) in I(f)", z, ("f at z", at_z), ("f at preimage", at_w)))
                }
            }
        })
        .collect();
    let (mut attempted, mut converged) = (0usize, 0usize);
    for (conv, (label, outcome)) in results {
        if let Some(c) = conv {
            attempted += 1;
            converged += usize::from(c);
        }
        report.record(&label, outcome);
    }
    report.details.insert("root_searches".into(), json!(attempted));
    report.details.insert("root_converged".into(), json!(converged));
    report.details.insert(
        "root_convergence_rate".into(),
        json!(if attempted == 0 { 0.0 } else { converged as f64 / attempted as f64 }),
    );
    finish(report, started)
}

/// Postsingular and hyperbolicity verdicts of one function, for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureEntry {
    pub function: String,
    pub postsingular: PostsingularKind,
    pub hyperbolicity: Hyperbolicity,
    pub over_approximation: bool,
    pub singular_values: usize,
    pub bound_witness: f64,
    pub max_capture_residual: Option<f64>,
}

/// Postsingular boundedness and hyperbolicity of every `f_k` imply the same
/// for `f_1 ∘ … ∘ f_n`; the composite uses the singular superset.
pub fn check_postsingular_closure_nfold(
    fs: &[FunctionExpr],
    truncation: u32,
    cfg: &EscapeConfig,
) -> Result<PropertyReport, HarnessError> {
    let started = Instant::now();
    let refs: Vec<&FunctionExpr> = fs.iter().collect();
    let name = if fs.len() == 2 {
        "postsingular_closure".to_string()
    } else {
        format!("postsingular_closure_{}fold", fs.len())
    };
    let mut report = PropertyReport::new(name, names(&refs), None, Some(cfg));
    let composite = fs[1..].iter().fold(fs[0].clone(), |acc, f| acc.compose(f));
    let entry = |f: &FunctionExpr| -> Result<ClosureEntry, HarnessError> {
        let sing = singular_set_of(f, truncation)?;
        let post = postsingular_verdict(f, &sing, cfg, DEFAULT_POSTSINGULAR_BOUND);
        Ok(ClosureEntry {
            function: f.to_string(),
            postsingular: post.verdict,
            hyperbolicity: hyperbolicity(&post, cfg),
            over_approximation: post.over_approximation,
            singular_values: sing.values.len(),
            bound_witness: post.bound_witness,
            max_capture_residual: post.max_capture_residual(),
        })
    };
    let parts = fs.iter().map(entry).collect::<Result<Vec<_>, _>>()?;
    let whole = entry(&composite)?;

    let all_bounded = parts.iter().all(|p| p.postsingular == PostsingularKind::Bounded);
    let bounded_concl = match whole.postsingular {
        PostsingularKind::Bounded => Some(true),
        PostsingularKind::Unbounded => Some(false),
        PostsingularKind::Undecided => None,
    };
    let verdicts = |pick: &dyn Fn(&ClosureEntry) -> Verdict| -> Vec<(String, Verdict)> {
        parts.iter().map(|p| (p.function.clone(), pick(p))).collect()
    };
    let as_verdict = |k: PostsingularKind| match k {
        PostsingularKind::Bounded => Verdict::Bounded,
        PostsingularKind::Unbounded => Verdict::Escaping,
        PostsingularKind::Undecided => Verdict::Undecided,
    };
    let (label, o) = Clause {
        label: "postsingularly bounded",
        z: Complex64::new(0.0, 0.0),
        hypothesis: verdicts(&|p| as_verdict(p.postsingular)),
        hypothesis_holds: all_bounded,
        conclusion: vec![(whole.function.clone(), as_verdict(whole.postsingular))],
        conclusion_holds: bounded_concl,
    }
    .outcome();
    report.record(&label, o);

    let hyp_verdict = |h: Hyperbolicity| match h {
        Hyperbolicity::Hyperbolic => Verdict::Bounded,
        Hyperbolicity::NotHyperbolic => Verdict::Escaping,
        Hyperbolicity::Undecided => Verdict::Undecided,
    };
    let all_hyperbolic = parts.iter().all(|p| p.hyperbolicity == Hyperbolicity::Hyperbolic);
    let (label, o) = Clause {
        label: "hyperbolic",
        z: Complex64::new(0.0, 0.0),
        hypothesis: verdicts(&|p| hyp_verdict(p.hyperbolicity)),
        hypothesis_holds: all_hyperbolic,
        conclusion: vec![(whole.function.clone(), hyp_verdict(whole.hyperbolicity))],
        conclusion_holds: match whole.hyperbolicity {
            Hyperbolicity::Hyperbolic => Some(true),
            Hyperbolicity::NotHyperbolic => Some(false),
            Hyperbolicity::Undecided => None,
        },
    }
    .outcome();
    report.record(&label, o);

    report.details.insert("truncation".into(), json!(truncation));
    report.details.insert("functions".into(), serde_json::to_value(&parts).expect("entries serialize"));
    report.details.insert("composite".into(), serde_json::to_value(&whole).expect("entries serialize"));
    Ok(finish(report, started))
}

pub fn check_postsingular_closure(
    f: &FunctionExpr,
    g: &FunctionExpr,
    truncation: u32,
    cfg: &EscapeConfig,
) -> Result<PropertyReport, HarnessError> {
    check_postsingular_closure_nfold(&[f.clone(), g.clone()], truncation, cfg)
}

/// Names accepted by `verify --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckName {
    UnionContainment,
    CompleteInvariance,
    PowerContainments,
    BackwardInvariance,
    Semiconjugacy,
    ForwardInvariancePair,
    CompositionIdentity,
    FixedPointsEscape,
    PreimageEscape,
    PostsingularClosure,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::UnionContainment,
        CheckName::CompleteInvariance,
        CheckName::PowerContainments,
        CheckName::BackwardInvariance,
        CheckName::Semiconjugacy,
        CheckName::ForwardInvariancePair,
        CheckName::CompositionIdentity,
        CheckName::FixedPointsEscape,
        CheckName::PreimageEscape,
        CheckName::PostsingularClosure,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::UnionContainment => "union_containment",
            CheckName::CompleteInvariance => "complete_invariance",
            CheckName::PowerContainments => "power_containments",
            CheckName::BackwardInvariance => "backward_invariance",
            CheckName::Semiconjugacy => "semiconjugacy",
            CheckName::ForwardInvariancePair => "forward_invariance_pair",
            CheckName::CompositionIdentity => "composition_identity",
            CheckName::FixedPointsEscape => "fixed_points_escape",
            CheckName::PreimageEscape => "preimage_escape",
            CheckName::PostsingularClosure => "postsingular_closure",
        }
    }

    /// Sample set used when none is given.
    pub fn default_samples(&self, seed: u64) -> Option<SampleSpec> {
        let square8 = Window::new(-8.0, 8.0, -8.0, 8.0);
        let square3 = Window::new(-3.0, 3.0, -3.0, 3.0);
        match self {
            CheckName::UnionContainment | CheckName::CompleteInvariance | CheckName::BackwardInvariance => {
                Some(SampleSpec::grid(square8, 256, 256))
            }
            CheckName::PowerContainments | CheckName::Semiconjugacy | CheckName::CompositionIdentity => {
                Some(SampleSpec::random(square3, 1000, seed))
            }
            CheckName::ForwardInvariancePair => Some(SampleSpec::random(Window::new(0.0, 8.0, -8.0, 8.0), 1000, seed)),
            CheckName::PreimageEscape => Some(SampleSpec::random(square8, 1000, seed)),
            CheckName::FixedPointsEscape | CheckName::PostsingularClosure => None,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| HarnessError::UnknownCheck(s.to_string()))
    }
}

/// A permutable pair under test.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub name: String,
    pub f: FunctionExpr,
    pub g: FunctionExpr,
}

impl Pair {
    /// `fatou`: `(z+1+e^{-z}, z+1+e^{-z}+2πi)`; `exp`: `(0.25e^z, 0.25e^z)`.
    pub fn canonical(name: &str) -> Result<Pair, HarnessError> {
        match name {
            "fatou" => Ok(Pair { name: name.into(), f: FunctionExpr::fatou(), g: FunctionExpr::fatou_shifted() }),
            "exp" => {
                let e = FunctionExpr::exp(Complex64::new(0.25, 0.0)).expect("valid atom");
                Ok(Pair { name: name.into(), f: e.clone(), g: e })
            }
            other => Err(HarnessError::UnknownPair(other.to_string())),
        }
    }
}

/// The semiconjugacy triple `(e^z, z + 1, e·w)`.
pub fn semiconjugacy_triple() -> (FunctionExpr, FunctionExpr, FunctionExpr) {
    let f = FunctionExpr::exp(Complex64::new(1.0, 0.0)).expect("valid atom");
    let g = FunctionExpr::identity().translate(Complex64::new(1.0, 0.0));
    let h = FunctionExpr::linear(Complex64::new(std::f64::consts::E, 0.0), Complex64::new(0.0, 0.0)).expect("finite");
    (f, g, h)
}

/// Settings shared by a suite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub cfg: EscapeConfig,
    /// Overrides every check's default sample set.
    pub samples: Option<SampleSpec>,
    pub seed: u64,
    pub truncation: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { cfg: EscapeConfig::default(), samples: None, seed: 20240601, truncation: 50 }
    }
}

/// Power pairs `(i, j)` exercised by the suite.
pub const POWER_PAIRS: [(u32, u32); 3] = [(2, 1), (1, 2), (3, 2)];

/// Runs one named check on a pair with suite defaults; some checks emit several reports.
pub fn run_check(check: CheckName, pair: &Pair, opts: &SuiteOptions) -> Result<Vec<PropertyReport>, HarnessError> {
    let samples = opts.samples.or_else(|| check.default_samples(opts.seed));
    if let Some(s) = &samples {
        s.validate()?;
    }
    let cfg = &opts.cfg;
    let (f, g) = (&pair.f, &pair.g);
    let s = samples.as_ref();
    Ok(match check {
        CheckName::UnionContainment => vec![check_union_containment(f, g, s.expect("sampled"), cfg)],
        CheckName::CompleteInvariance => vec![check_complete_invariance(f, g, s.expect("sampled"), cfg)],
        CheckName::BackwardInvariance => vec![check_backward_invariance(f, g, s.expect("sampled"), cfg)],
        CheckName::PowerContainments => POWER_PAIRS
            .iter()
            .map(|&(i, j)| check_power_containments(f, g, i, j, s.expect("sampled"), cfg))
            .collect::<Result<_, _>>()?,
        CheckName::Semiconjugacy => {
            let (sf, sg, sh) = semiconjugacy_triple();
            vec![check_semiconjugacy(&sf, &sg, &sh, s.expect("sampled"), cfg)]
        }
        CheckName::ForwardInvariancePair => vec![check_forward_invariance_pair(s.expect("sampled"), cfg)],
        CheckName::CompositionIdentity => vec![check_composition_identity(s.expect("sampled"), 8, 1e-9)],
        CheckName::FixedPointsEscape => vec![check_fixed_points_escape(-100..=100, 20, cfg)?],
        CheckName::PreimageEscape => vec![check_preimage_escape(f, g, s.expect("sampled"), cfg)],
        CheckName::PostsingularClosure => {
            let mut out = vec![check_postsingular_closure(f, g, opts.truncation, cfg)?];
            out.push(check_postsingular_closure_nfold(&[f.clone(), g.clone(), f.clone()], opts.truncation, cfg)?);
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> EscapeConfig {
        EscapeConfig::default()
    }

    #[test]
    fn sample_specs_are_deterministic() {
        let w = Window::new(-1.0, 1.0, -2.0, 2.0);
        let a = SampleSpec::random(w, 50, 7).points();
        assert_eq!(a, SampleSpec::random(w, 50, 7).points());
        assert_ne!(a, SampleSpec::random(w, 50, 8).points());
        assert!(a.iter().all(|z| z.re > -1.0 && z.re <= 1.0 && z.im > -2.0 && z.im <= 2.0));
        let g = SampleSpec::grid(w, 2, 2).points();
        assert_eq!(g, vec![c(-0.5, 1.0), c(0.5, 1.0), c(-0.5, -1.0), c(0.5, -1.0)]);
        assert!(SampleSpec::random(w, 0, 1).validate().is_err());
        assert!(SampleSpec::grid(Window::new(0.0, 0.0, 0.0, 1.0), 2, 2).validate().is_err());
    }

    #[test]
    fn self_pair_union_containment() {
        let f = FunctionExpr::fatou();
        let s = SampleSpec::grid(Window::new(-4.0, 4.0, -4.0, 4.0), 24, 24);
        let r = check_union_containment(&f, &f, &s, &cfg());
        assert_eq!(r.counts.violated, 0);
        assert!(r.counts.applicable > 0);
        assert!(r.warnings.is_empty());
        assert_eq!(r.counts.applicable, r.counts.passed + r.counts.violated);
    }

    #[test]
    fn non_commuting_pair_warns() {
        let e = FunctionExpr::exp(c(1.0, 0.0)).unwrap();
        let shift = FunctionExpr::identity().translate(c(1.0, 0.0));
        let s = SampleSpec::random(Window::new(-1.0, 1.0, -1.0, 1.0), 20, 3);
        let r = check_union_containment(&e, &shift, &s, &cfg());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn fixed_point_clauses_for_fatou_pair() {
        let f = FunctionExpr::fatou();
        let g = FunctionExpr::fatou_shifted();
        let fg = f.compose(&g);
        let z = c(0.0, PI);
        assert_eq!(classify(&fg, z, &cfg()).verdict, Verdict::Escaping);
        assert_eq!(classify_value(&fg, g.eval(z), &cfg()).verdict, Verdict::Escaping);
        // w = iπ is bounded under f, and g(iπ) = 3πi stays bounded under f.
        assert_eq!(classify_value(&f, g.eval(z), &cfg()).verdict, Verdict::Bounded);
    }

    #[test]
    fn backward_invariance_part_two_fires_on_fixed_points() {
        let f = FunctionExpr::fatou();
        let g = FunctionExpr::fatou_shifted();
        let s = SampleSpec::grid(Window::new(-0.5, 0.5, PI - 0.5, PI + 0.5), 1, 1);
        let r = check_backward_invariance(&f, &g, &s, &cfg());
        assert_eq!(r.clause("(2) g keeps F(f)").passed, 1);
        assert_eq!(r.counts.violated, 0);
    }

    #[test]
    fn power_containments_reject_zero_and_record_swap() {
        let f = FunctionExpr::fatou();
        let s = SampleSpec::random(Window::new(-1.0, 1.0, -1.0, 1.0), 10, 1);
        assert!(matches!(check_power_containments(&f, &f, 0, 1, &s, &cfg()), Err(HarnessError::Exponents { .. })));
        let r = check_power_containments(&f, &FunctionExpr::fatou_shifted(), 1, 2, &s, &cfg()).unwrap();
        assert_eq!(r.details["swapped"], json!(true));
        let r = check_power_containments(&f, &f, 1, 1, &s, &cfg()).unwrap();
        assert_eq!(r.details["swapped"], json!(false));
        assert_eq!(r.counts.violated, 0);
    }

    #[test]
    fn broken_semiconjugacy_warns_and_passes_trivially() {
        let (f, g, _) = semiconjugacy_triple();
        let half = FunctionExpr::linear(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        let s = SampleSpec::random(Window::new(-3.0, 3.0, -3.0, 3.0), 200, 11);
        let r = check_semiconjugacy(&f, &g, &half, &s, &cfg());
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.counts.violated, 0);
        assert_eq!(r.counts.applicable, 0);
    }

    #[test]
    fn semiconjugacy_self_triple_is_tautological() {
        let f = FunctionExpr::exp(c(0.25, 0.0)).unwrap();
        let s = SampleSpec::random(Window::new(-3.0, 3.0, -3.0, 3.0), 200, 5);
        let r = check_semiconjugacy(&f, &f, &f, &s, &cfg());
        assert!(r.warnings.is_empty());
        assert_eq!(r.counts.violated, 0);
    }

    #[test]
    fn composition_identity_small_cases() {
        let s = SampleSpec::grid(Window::new(-0.5, 0.5, -0.5, 0.5), 1, 1);
        let r = check_composition_identity(&s, 0, 1e-12);
        assert_eq!((r.counts.passed, r.counts.violated), (2, 0));
        // z = 0, n = 1: f(g(0)) = 3 + e^{-2} + 2πi = f²(0) + 2πi.
        let f = FunctionExpr::fatou();
        let lhs = f.compose(&FunctionExpr::fatou_shifted()).eval(c(0.0, 0.0)).unwrap();
        assert!((lhs - c(3.0 + f64::exp(-2.0), 2.0 * PI)).norm() < 1e-14);
        let r = check_composition_identity(&s, 1, 1e-12);
        assert_eq!(r.counts.violated, 0);
    }

    #[test]
    fn fixed_points_report_counterexample() {
        let r = check_fixed_points_escape(-1..=0, 10, &cfg()).unwrap();
        assert_eq!((r.counts.passed, r.counts.violated), (2, 0));
        assert!(!r.details["counterexample_I(fg)_not_in_I(f)_and_I(g)"].is_null());
        assert!(r.details["probe_max_relative_deviation"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn preimage_solver_finds_roots() {
        let g = FunctionExpr::fatou_shifted();
        let z = c(6.0, 1.0);
        let w = solve_preimage(&g, z).unwrap();
        assert!((g.eval(w).unwrap() - z).norm() <= PREIMAGE_TOL * (1.0 + z.norm()));
        assert!(w.re > 0.0);
        let r = check_preimage_escape(
            &FunctionExpr::fatou(),
            &g,
            &SampleSpec::random(Window::new(1.0, 8.0, -8.0, 8.0), 100, 2),
            &cfg(),
        );
        assert_eq!(r.counts.violated, 0);
        assert_eq!(r.details["root_converged"], json!(100));
    }

    #[test]
    fn postsingular_closure_examples() {
        let e = FunctionExpr::exp(c(0.25, 0.0)).unwrap();
        let r = check_postsingular_closure(&e, &e, 5, &cfg()).unwrap();
        assert_eq!((r.counts.passed, r.counts.violated), (2, 0));
        let big = FunctionExpr::exp(c(1.0, 0.0)).unwrap();
        let r = check_postsingular_closure(&big, &big, 5, &cfg()).unwrap();
        assert_eq!(r.counts.applicable, 0);
        let r = check_postsingular_closure_nfold(&[e.clone(), e.clone(), e], 5, &cfg()).unwrap();
        assert_eq!(r.check_name, "postsingular_closure_3fold");
        assert_eq!(r.counts.passed, 2);
    }

    #[test]
    fn violations_replay_on_their_witnesses() {
        // A deliberately false clause: "every escaping point of f is bounded under f".
        let f = FunctionExpr::fatou();
        let s = SampleSpec::random(Window::new(-2.0, 2.0, -2.0, 2.0), 40, 9);
        let run = |points: &[Complex64]| {
            let mut report = PropertyReport::new("false_clause", names(&[&f]), Some(&s), Some(&cfg()));
            run_samples(&mut report, points, |z| {
                let v = classify(&f, z, &cfg()).verdict;
                vec![membership_clause(
                    "I(f) in F(f)",
                    z,
                    ("f", v),
                    (
                        "not f",
                        match v {
                            Verdict::Escaping => Verdict::Bounded,
                            other => other,
                        },
                    ),
                )]
            });
            report
        };
        let first = run(&s.points());
        assert!(first.counts.violated > 0);
        assert_eq!(first.counts, run(&s.points()).counts);
        let witnesses: Vec<Complex64> = first.violations.iter().map(|w| w.z).collect();
        let replay = run(&witnesses);
        assert_eq!(replay.counts.violated, witnesses.len());
        assert_eq!(replay.violations, first.violations);
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
        }
        assert!("nope".parse::<CheckName>().is_err());
        assert!(Pair::canonical("fatou").is_ok());
        assert!(Pair::canonical("sine").is_err());
    }

    #[test]
    fn csv_rows_follow_header() {
        let r = check_fixed_points_escape(0..=0, 3, &cfg()).unwrap();
        let csv = reports_csv(&[r]);
        assert_eq!(csv, format!("{CSV_HEADER}\nfixed_points_escape,1,1,0,0,\n"));
    }
}
