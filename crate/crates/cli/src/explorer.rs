//! Lattice search for near-solutions of inhomogeneous value problems.
//!
//! Two engines produce [`SearchResult`]s. `slab_scan` enumerates the integer
//! box ‖x‖∞ ≤ R directly, cut down to the slab |L(x) − b| ≤ ε when a linear
//! form is present, and ranks candidates by the joint error
//! max(|Q_ξ(x) − a|, |L(x) − b|). `orbit_round` pushes a known integer point
//! along the exact value-preserving stabilizer flow and rounds back to the
//! lattice, generating candidates on distant regions of the same level set.
//!
//! Ranking in the hot loop is double precision; the winning point is always
//! re-evaluated in exact arithmetic before it is reported, and the two
//! evaluations must agree to 1e−12. Search runs in the original integer
//! lattice coordinates: the normalization certificate is used only to build
//! flow elements, never to skew the lattice.

use core::fmt;

use qflow_core::forms::{
    find_good_hyperplane, restrict_to_hyperplane, InhomogeneousForm, LinearForm,
};
use qflow_core::linalg::{Matrix, Vector};
use qflow_core::normalize::NormalizationCertificate;
use qflow_core::rationality::{check_hypotheses, is_irrational_inhom};
use qflow_core::scalar::Scalar;
use qflow_core::stabilizer::conjugated_flow;
use qflow_core::Error;
use rayon::prelude::*;

/// Unit of agreement required between the hot-loop ranking value and the
/// exact re-evaluation of the winner, scaled by the magnitude of the
/// intermediate terms the float evaluation sums (see `eval_tolerance`).
const REVERIFY_TOL: f64 = 1e-12;

/// Fuzz added to slab boundaries before rounding to integer candidates, so
/// points sitting exactly on the boundary are never lost to float rounding.
const SLAB_FUZZ: f64 = 1e-9;

/// Which engine produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    SlabScan,
    OrbitRound,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMode::SlabScan => write!(f, "slab_scan"),
            SearchMode::OrbitRound => write!(f, "orbit_round"),
        }
    }
}

/// One search problem: a form, an optional linear form, real targets, a slab
/// width, and a box radius. The linear form is present iff the second target
/// is present.
#[derive(Clone)]
pub struct SearchTask {
    form: InhomogeneousForm,
    linear: Option<LinearForm>,
    target_a: f64,
    target_b: Option<f64>,
    epsilon: f64,
    radius: i64,
}

impl SearchTask {
    pub fn new(
        form: InhomogeneousForm,
        linear: Option<LinearForm>,
        target_a: f64,
        target_b: Option<f64>,
        epsilon: f64,
        radius: i64,
    ) -> Result<SearchTask, Error> {
        if form.dim() != 3 {
            return Err(Error::Dimension("search expects a 3-dimensional form"));
        }
        if let Some(l) = &linear {
            if l.dim() != 3 {
                return Err(Error::Dimension("linear form must be 3-dimensional"));
            }
            if l.is_zero() {
                return Err(Error::ZeroLinearForm);
            }
        }
        if linear.is_some() != target_b.is_some() {
            return Err(Error::Parse(
                "target b must be given exactly when a linear form is given".into(),
            ));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Parse("epsilon must be a positive finite real".into()));
        }
        if !target_a.is_finite() || target_b.map_or(false, |b| !b.is_finite()) {
            return Err(Error::Parse("targets must be finite reals".into()));
        }
        if radius < 1 {
            return Err(Error::Parse("radius must be at least 1".into()));
        }
        Ok(SearchTask {
            form,
            linear,
            target_a,
            target_b,
            epsilon,
            radius,
        })
    }

    pub fn form(&self) -> &InhomogeneousForm {
        &self.form
    }

    pub fn linear(&self) -> Option<&LinearForm> {
        self.linear.as_ref()
    }

    pub fn target_a(&self) -> f64 {
        self.target_a
    }

    pub fn target_b(&self) -> Option<f64> {
        self.target_b
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }
}

/// Best point found by a search, with exactly re-verified errors.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Integer minimizer (zero vector when nothing was visited).
    pub best_x: Vector,
    /// |Q_ξ(best_x) − a|, infinite when nothing was visited.
    pub err_q: f64,
    /// |L(best_x) − b|, zero when no linear form is present.
    pub err_l: f64,
    /// Number of candidate points evaluated.
    pub visited: u64,
    pub mode_used: SearchMode,
    /// Joint error as ranked by the hot loop. Identical points produce
    /// identical ranking values, so this is exactly monotone across nested
    /// radii, unlike the exactly recomputed errors, which can wobble by the
    /// float evaluation noise near ties.
    pub(crate) rank_err: f64,
}

impl SearchResult {
    /// Joint error max(err_q, err_l), the quantity searches minimize.
    pub fn joint_err(&self) -> f64 {
        self.err_q.max(self.err_l)
    }
}

/// Double-precision images of the task data for the ranking loop.
struct FloatEval {
    a: [[f64; 3]; 3],
    xi: [f64; 3],
    l: [f64; 3],
}

impl FloatEval {
    fn new(task: &SearchTask) -> FloatEval {
        let mut a = [[0.0; 3]; 3];
        let mut xi = [0.0; 3];
        let mut l = [0.0; 3];
        let gram = task.form.gram();
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = gram[(i, j)].to_f64();
            }
            xi[i] = task.form.shift()[i].to_f64();
            if let Some(lf) = &task.linear {
                l[i] = lf.coeffs()[i].to_f64();
            }
        }
        FloatEval { a, xi, l }
    }

    #[inline]
    fn q(&self, x: [i64; 3]) -> f64 {
        let y = [
            x[0] as f64 + self.xi[0],
            x[1] as f64 + self.xi[1],
            x[2] as f64 + self.xi[2],
        ];
        let mut acc = 0.0;
        for i in 0..3 {
            let mut row = 0.0;
            for j in 0..3 {
                row += self.a[i][j] * y[j];
            }
            acc += y[i] * row;
        }
        acc
    }

    #[inline]
    fn l(&self, x: [i64; 3]) -> f64 {
        self.l[0] * x[0] as f64 + self.l[1] * x[1] as f64 + self.l[2] * x[2] as f64
    }
}

/// Running minimum with the deterministic tie-break: smaller joint error
/// first, then lexicographically smaller point. Also carries the hot-loop
/// error components so the winner can be cross-checked exactly.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    x: [i64; 3],
    err_q: f64,
    err_l: f64,
}

impl Candidate {
    fn joint(&self) -> f64 {
        self.err_q.max(self.err_l)
    }
}

fn better(new: &Candidate, cur: &Option<Candidate>) -> bool {
    match cur {
        None => true,
        Some(c) => {
            let (a, b) = (new.joint(), c.joint());
            a < b || (a == b && new.x < c.x)
        }
    }
}

fn merge(a: (Option<Candidate>, u64), b: (Option<Candidate>, u64)) -> (Option<Candidate>, u64) {
    let visited = a.1 + b.1;
    match (a.0, b.0) {
        (None, y) => (y, visited),
        (x, None) => (x, visited),
        (Some(x), Some(y)) => {
            if better(&x, &Some(y)) {
                (Some(x), visited)
            } else {
                (Some(y), visited)
            }
        }
    }
}

/// Exhaustive scan of the integer box, cut to the slab |L(x) − b| ≤ ε when a
/// linear form is present. The slab is enumerated by iterating the two free
/// coordinates and solving the linear constraint for the third; work is
/// parallelized over the leading free coordinate and merged with the same
/// deterministic tie-break, so the result does not depend on scheduling.
pub fn slab_scan(task: &SearchTask) -> SearchResult {
    let fe = FloatEval::new(task);
    let r = task.radius;
    let coords: Vec<i64> = (-r..=r).collect();
    let (best, visited) = match &task.linear {
        None => coords
            .par_iter()
            .map(|&x0| {
                let mut best: Option<Candidate> = None;
                let mut visited = 0u64;
                for x1 in -r..=r {
                    for x2 in -r..=r {
                        let x = [x0, x1, x2];
                        let cand = Candidate {
                            x,
                            err_q: (fe.q(x) - task.target_a).abs(),
                            err_l: 0.0,
                        };
                        visited += 1;
                        if better(&cand, &best) {
                            best = Some(cand);
                        }
                    }
                }
                (best, visited)
            })
            .reduce(|| (None, 0), merge),
        Some(l) => {
            let b = task.target_b.expect("task invariant: b present with L");
            // Solve for the coordinate with the largest coefficient; the
            // other two are free. Free coordinates keep their natural order.
            let lf = {
                let mut v = [0.0; 3];
                for i in 0..3 {
                    v[i] = l.coeffs()[i].to_f64();
                }
                v
            };
            let pivot = (0..3)
                .max_by(|&i, &j| lf[i].abs().partial_cmp(&lf[j].abs()).unwrap())
                .unwrap();
            assert!(lf[pivot] != 0.0, "nonzero linear form has a nonzero pivot");
            let free: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
            coords
                .par_iter()
                .map(|&u| {
                    let mut best: Option<Candidate> = None;
                    let mut visited = 0u64;
                    for v in -r..=r {
                        let rest = lf[free[0]] * u as f64 + lf[free[1]] * v as f64;
                        let mut lo = (b - task.epsilon - rest) / lf[pivot];
                        let mut hi = (b + task.epsilon - rest) / lf[pivot];
                        if lo > hi {
                            core::mem::swap(&mut lo, &mut hi);
                        }
                        let k_lo = ((lo - SLAB_FUZZ).ceil() as i64).max(-r);
                        let k_hi = ((hi + SLAB_FUZZ).floor() as i64).min(r);
                        for k in k_lo..=k_hi {
                            let mut x = [0i64; 3];
                            x[free[0]] = u;
                            x[free[1]] = v;
                            x[pivot] = k;
                            let cand = Candidate {
                                x,
                                err_q: (fe.q(x) - task.target_a).abs(),
                                err_l: (fe.l(x) - b).abs(),
                            };
                            visited += 1;
                            if better(&cand, &best) {
                                best = Some(cand);
                            }
                        }
                    }
                    (best, visited)
                })
                .reduce(|| (None, 0), merge)
        }
    };
    finish(task, best, visited, SearchMode::SlabScan)
}

/// Default flow grid: the 81 rationals k/4 for |k| ≤ 40. Keeps flowed
/// points within double-precision-safe magnitude for seeds with
/// ‖seed‖∞ ≤ 200.
pub fn default_t_grid() -> Vec<Scalar> {
    (-40..=40).map(|k| Scalar::ratio(k, 4)).collect()
}

/// Push an integer seed along the conjugated stabilizer flow, round each
/// flowed point back to the lattice, and keep the best candidate. The flow
/// preserves the pair values exactly; this is asserted for every grid point
/// before rounding. The seed itself always competes, so the result is never
/// worse than the seed.
pub fn orbit_round(
    task: &SearchTask,
    seed: &Vector,
    cert: &NormalizationCertificate,
    t_grid: &[Scalar],
) -> SearchResult {
    assert!(seed.dim() == 3 && seed.is_integral(), "seed must be an integer 3-vector");
    let fe = FloatEval::new(task);
    let q_seed = task.form.eval(seed);
    let l_seed = task.linear.as_ref().map(|l| l.eval(seed));

    let consider = |x: [i64; 3], best: &mut Option<Candidate>| {
        let cand = Candidate {
            x,
            err_q: (fe.q(x) - task.target_a).abs(),
            err_l: match task.target_b {
                Some(b) => (fe.l(x) - b).abs(),
                None => 0.0,
            },
        };
        if better(&cand, best) {
            *best = Some(cand);
        }
    };

    let seed_ints = {
        let mut s = [0i64; 3];
        for i in 0..3 {
            s[i] = seed[i].to_f64().round() as i64;
        }
        s
    };
    let mut best: Option<Candidate> = None;
    let mut visited = 1u64;
    consider(seed_ints, &mut best);

    for t in t_grid {
        let m = conjugated_flow(cert, t);
        let y = m.act(seed);
        assert!(
            task.form.eval(&y) == q_seed,
            "stabilizer flow must preserve the quadratic value exactly"
        );
        if let (Some(l), Some(ls)) = (&task.linear, &l_seed) {
            assert!(
                l.eval(&y) == *ls,
                "stabilizer flow must preserve the linear value exactly"
            );
        }
        let mut z = [0i64; 3];
        let mut ok = true;
        for i in 0..3 {
            let f = y[i].to_f64();
            if !f.is_finite() || f.abs() > 1e15 {
                ok = false;
                break;
            }
            z[i] = f.round() as i64;
        }
        if ok {
            visited += 1;
            consider(z, &mut best);
        }
    }
    finish(task, best, visited, SearchMode::OrbitRound)
}

/// Largest plausible float-evaluation error for points the task can visit:
/// REVERIFY_TOL scaled by the magnitude of the summed intermediate terms.
fn eval_tolerance(task: &SearchTask) -> f64 {
    let amax = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| task.form.gram()[(i, j)].to_f64().abs())
        .fold(0.0f64, f64::max);
    let ximax = (0..3)
        .map(|i| task.form.shift()[i].to_f64().abs())
        .fold(0.0f64, f64::max);
    let lmax = task
        .linear
        .as_ref()
        .map(|l| (0..3).map(|i| l.coeffs()[i].to_f64().abs()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    let reach = task.radius as f64 + ximax + 1.0;
    let scale = 9.0 * amax * reach * reach
        + 3.0 * lmax * reach
        + task.target_a.abs()
        + task.target_b.map_or(0.0, f64::abs)
        + 1.0;
    REVERIFY_TOL * scale
}

/// Build the reported result: exact re-evaluation of the winner, agreement
/// check against the ranking values, and the integrality lower bound for
/// integer-valued systems.
fn finish(
    task: &SearchTask,
    best: Option<Candidate>,
    visited: u64,
    mode_used: SearchMode,
) -> SearchResult {
    let Some(cand) = best else {
        return SearchResult {
            best_x: Vector::zeros(3),
            err_q: f64::INFINITY,
            err_l: f64::INFINITY,
            visited: 0,
            mode_used,
            rank_err: f64::INFINITY,
        };
    };
    let xv = Vector::from_ints(&cand.x);
    let err_q = (task.form.eval(&xv).to_f64() - task.target_a).abs();
    let err_l = match (&task.linear, task.target_b) {
        (Some(l), Some(b)) => (l.eval(&xv).to_f64() - b).abs(),
        _ => 0.0,
    };
    let tol = eval_tolerance(task);
    assert!(
        (err_q - cand.err_q).abs() <= tol && (err_l - cand.err_l).abs() <= tol,
        "exact re-evaluation disagrees with the ranking value beyond float noise"
    );
    if task.form.gram().is_integral() && task.form.shift().is_integral() {
        let frac = (task.target_a - task.target_a.round()).abs();
        assert!(
            err_q >= frac - REVERIFY_TOL,
            "integer-valued form reported an error below dist(target, Z)"
        );
    }
    SearchResult {
        best_x: xv,
        err_q,
        err_l,
        visited,
        mode_used,
        rank_err: cand.joint(),
    }
}

/// One row of a density table.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub target_a: f64,
    pub target_b: Option<f64>,
    pub radius: i64,
    pub result: SearchResult,
}

/// Run `slab_scan` over the cross product of targets and radii. Rows come
/// back target-major with radii in the given (ascending) order; cells are
/// computed in parallel. For each target the joint error is checked to be
/// nonincreasing in the radius, which is guaranteed because the search sets
/// are nested and the tie-break is identical.
///
/// Preconditions on the pair (tangency, irrationality, the combination
/// condition) are probed first and reported to stderr as a warning when they
/// fail; the table still runs, since the point of the negative controls is
/// to watch the search stall.
pub fn density_table(
    form: &InhomogeneousForm,
    linear: Option<&LinearForm>,
    targets: &[(f64, Option<f64>)],
    epsilon: f64,
    radii: &[i64],
) -> Result<Vec<TableRow>, Error> {
    let mut sorted = radii.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::Parse("at least one radius is required".into()));
    }
    warn_on_failing_hypotheses(form, linear);

    let mut tasks = Vec::new();
    for &(a, b) in targets {
        for &r in &sorted {
            tasks.push(SearchTask::new(
                form.clone(),
                linear.cloned(),
                a,
                b,
                epsilon,
                r,
            )?);
        }
    }
    let results: Vec<SearchResult> = tasks.par_iter().map(slab_scan).collect();
    let rows: Vec<TableRow> = tasks
        .iter()
        .zip(results)
        .map(|(t, result)| TableRow {
            target_a: t.target_a(),
            target_b: t.target_b(),
            radius: t.radius(),
            result,
        })
        .collect();

    for chunk in rows.chunks(sorted.len()) {
        for pair in chunk.windows(2) {
            assert!(
                pair[1].result.rank_err <= pair[0].result.rank_err,
                "joint error increased with the radius despite nested search sets"
            );
        }
    }
    Ok(rows)
}

fn warn_on_failing_hypotheses(form: &InhomogeneousForm, linear: Option<&LinearForm>) {
    if form.dim() != 3 {
        return;
    }
    match linear {
        Some(l) => {
            let report = check_hypotheses(&form.quadratic_form(), form.shift(), l);
            if !report.all_pass() {
                eprintln!(
                    "warning: density hypotheses fail (tangent={}, combination condition={}); running anyway",
                    report.tangent, report.combo_condition
                );
            }
        }
        None => {
            if !form.is_indefinite() || form.is_degenerate() || !is_irrational_inhom(form) {
                eprintln!(
                    "warning: single-form density hypotheses fail (indefinite={}, nondegenerate={}, irrational={}); running anyway",
                    form.is_indefinite(),
                    !form.is_degenerate(),
                    is_irrational_inhom(form)
                );
            }
        }
    }
}

/// Dimension reduction failure, tagged with the dimension being reduced
/// when the hyperplane search gave up.
#[derive(Debug)]
pub struct ReduceError {
    pub dimension: usize,
    pub source: Error,
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at dimension {}: {}", self.dimension, self.source)
    }
}

/// Result of iterated hyperplane restriction: the 3-dimensional form and the
/// integral hyperplane bases applied, outermost first.
#[derive(Debug)]
pub struct Reduction {
    pub form: InhomogeneousForm,
    pub bases: Vec<Matrix>,
}

/// Restrict an n-dimensional indefinite nondegenerate irrational form to
/// dimension 3 by repeatedly picking a good integral hyperplane. Each step
/// is re-verified to stay indefinite, nondegenerate, and irrational, and
/// each basis is integral, so integer points restrict to integer points.
/// A 3-dimensional input is returned unchanged.
pub fn reduce_dimension(f: &InhomogeneousForm, height_bound: i64) -> Result<Reduction, ReduceError> {
    let fail = |dimension: usize, source: Error| ReduceError { dimension, source };
    if f.dim() < 3 {
        return Err(fail(f.dim(), Error::Dimension("form must be at least 3-dimensional")));
    }
    let mut current = f.clone();
    let mut bases = Vec::new();
    while current.dim() > 3 {
        let n = current.dim();
        let b = find_good_hyperplane(&current, height_bound).map_err(|e| fail(n, e))?;
        assert!(b.is_integral(), "hyperplane basis must be integral");
        let next = restrict_to_hyperplane(&current, &b).map_err(|e| fail(n, e))?;
        assert!(next.is_indefinite(), "restriction must stay indefinite");
        assert!(!next.is_degenerate(), "restriction must stay nondegenerate");
        assert!(is_irrational_inhom(&next), "restriction must stay irrational");
        bases.push(b);
        current = next;
    }
    Ok(Reduction { form: current, bases })
}
