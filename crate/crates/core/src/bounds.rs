//! Closed-form bounds on the extremal parameters, the linear-programming
//! lower bound on m_r with an exact vertex-enumeration cross-check, and the
//! critical probability of the random model.
//!
//! Parameters (for a plane of order q and threshold r):
//! - m_r: size of a smallest percolating set,
//! - M_r: size of a largest non-percolating set,
//! - T_r: largest percolation time of a percolating set.

use num::rational::{BigRational, Ratio};
use num::{BigInt, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Whether bounds may use facts specific to PG(2,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlaneClass {
    /// Any projective plane of order q.
    #[default]
    Arbitrary,
    /// The Desarguesian plane PG(2,q): self-dual, contains ovals and, for
    /// even q, hyperovals.
    Desarguesian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parameter {
    #[serde(rename = "m_r")]
    MinPercolating,
    #[serde(rename = "M_r")]
    MaxNonPercolating,
    #[serde(rename = "T_r")]
    MaxTime,
}

impl Parameter {
    pub fn symbol(self) -> &'static str {
        match self {
            Parameter::MinPercolating => "m_r",
            Parameter::MaxNonPercolating => "M_r",
            Parameter::MaxTime => "T_r",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: u64,
    pub cite: String,
}

impl Bound {
    fn new(value: u64, cite: &str) -> Self {
        Bound {
            value,
            cite: cite.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub parameter: Parameter,
    pub q: u64,
    pub r: u64,
    pub lower: Bound,
    pub upper: Bound,
    pub exact: Option<u64>,
    pub exact_condition: Option<String>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(parameter: Parameter, q: u64, r: u64, lower: Bound, upper: Bound) -> Self {
        debug_assert!(lower.value <= upper.value, "{parameter:?} q={q} r={r}");
        BoundReport {
            parameter,
            q,
            r,
            lower,
            upper,
            exact: None,
            exact_condition: None,
            notes: Vec::new(),
        }
    }

    /// Marks the parameter as determined; both bounds collapse to `value`.
    fn exact(mut self, value: u64, cite: &str, condition: impl Into<String>) -> Self {
        self.lower = Bound::new(value, cite);
        self.upper = Bound::new(value, cite);
        self.exact = Some(value);
        self.exact_condition = Some(condition.into());
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }
}

fn check_range(q: u64, r: u64) -> Result<()> {
    if q < 2 || r == 0 || r > q + 1 {
        return Err(Error::BadRange(format!(
            "need q >= 2 and 1 <= r <= q+1, got q={q}, r={r}"
        )));
    }
    Ok(())
}

fn plane_size(q: u64) -> u64 {
    q * q + q + 1
}

/// Bounds on the smallest percolating set.
pub fn m_r_bounds(q: u64, r: u64, class: PlaneClass) -> Result<BoundReport> {
    check_range(q, r)?;
    let n = plane_size(q);
    let staircase = r * (r + 1) / 2;
    let mut lower = Bound::new(staircase, "staircase-lower");
    let mut notes = Vec::new();
    if let Some(lp) = best_lp_bound(q, r) {
        notes.push(format!(
            "line-sequence LP: j={}, N={}, h_min={}",
            lp.j, lp.n, lp.h_min
        ));
        if lp.ceiling > lower.value {
            lower = Bound::new(lp.ceiling, "line-sequence-lp");
        }
    }
    let upper = Bound::new((r - 1) * r + 1, "broom-upper");
    let mut report = BoundReport::new(Parameter::MinPercolating, q, r, lower, upper);
    report.notes = notes;
    if let Some(alpha_note) = fractional_regime_note(q, r) {
        report = report.note(alpha_note);
    }

    // lines in general position available: q+1 (ovals) or q+2 (hyperovals) in PG(2,q)
    let pg_lines = match q % 2 {
        0 => q + 2,
        _ => q + 1,
    };
    if r == q + 1 {
        return Ok(report.exact(
            n,
            "full-set-only",
            "r = q+1: only the full point set percolates",
        ));
    }
    if r * r < 2 * q {
        return Ok(report.exact(staircase, "broom-completion", "exact: r < sqrt(2q)"));
    }
    if class == PlaneClass::Desarguesian && 2 * r <= pg_lines {
        let cond = if q % 2 == 0 {
            "exact: 2r <= q+2 (dual hyperoval lines in PG(2,q))"
        } else {
            "exact: 2r <= q+1 (dual conic lines in PG(2,q))"
        };
        return Ok(report.exact(staircase, "general-position-lines", cond));
    }
    Ok(report)
}

/// Bounds on the largest non-percolating set.
pub fn big_m_r_bounds(q: u64, r: u64, class: PlaneClass) -> Result<BoundReport> {
    check_range(q, r)?;
    let n = plane_size(q);
    let report = if r == 1 {
        BoundReport::new(
            Parameter::MaxNonPercolating,
            q,
            r,
            Bound::new(0, "empty-set"),
            Bound::new(0, "empty-set"),
        )
        .exact(0, "empty-set", "r = 1: every nonempty set percolates")
    } else {
        let broom = q * (r - 1) + 1;
        let pencil = (q + 1) * (r - 1);
        let report = BoundReport::new(
            Parameter::MaxNonPercolating,
            q,
            r,
            Bound::new(broom, "broom-lower"),
            Bound::new(pencil, "pencil-upper"),
        )
        .note(format!(
            "(k,n)-arc comparison with n = r-1: at most {} points",
            (r - 1) * q + r - 1 - q
        ));
        if r == q + 1 {
            report.exact(n - 1, "full-set-only", "r = q+1: all but one point")
        } else if 2 * r < q + 4 {
            report.exact(broom, "two-infected-lines", "exact: r < q/2 + 2")
        } else if class == PlaneClass::Desarguesian && q % 2 == 0 && 2 * r == q + 4 {
            report.exact(pencil, "dual-hyperoval-union", "exact: q even, r = q/2 + 2")
        } else if class == PlaneClass::Desarguesian && q % 2 == 0 && r == q {
            report.exact(pencil, "hyperoval-complement", "exact: q even, r = q")
        } else {
            report
        }
    };
    Ok(report)
}

/// Percolation times found by computer search on PG(2,q): (q, r, time,
/// whether the value is the exact maximum).
pub const SEARCH_TIMES: &[(u64, u64, u64, bool)] = &[
    (3, 2, 2, true),
    (3, 3, 2, true),
    (5, 3, 3, true),
    (5, 4, 5, true),
    (5, 5, 8, true),
    (7, 5, 6, false),
    (7, 6, 9, false),
    (7, 7, 14, false),
    (11, 9, 10, false),
    (11, 10, 15, false),
    (11, 11, 21, false),
    (13, 13, 23, false),
    (17, 17, 24, false),
    (19, 19, 27, false),
];

/// Bounds on the largest percolation time.
pub fn big_t_r_bounds(q: u64, r: u64, class: PlaneClass) -> Result<BoundReport> {
    check_range(q, r)?;
    let n = plane_size(q);
    let base = |lower: Bound| {
        BoundReport::new(
            Parameter::MaxTime,
            q,
            r,
            lower,
            Bound::new(n, "one-new-line-per-round"),
        )
    };
    if r == q + 1 {
        return Ok(base(Bound::new(0, "full-set-only")).exact(
            0,
            "full-set-only",
            "r = q+1: only the full set percolates, in zero rounds",
        ));
    }
    if r == 1 {
        return Ok(base(Bound::new(1, "single-point")).exact(1, "single-point", "r = 1"));
    }
    if r == 2 {
        return Ok(base(Bound::new(2, "three-points")).exact(2, "three-points", "r = 2"));
    }
    let searched = match class {
        PlaneClass::Desarguesian => SEARCH_TIMES.iter().find(|e| e.0 == q && e.1 == r),
        PlaneClass::Arbitrary => None,
    };
    if let Some(&(_, _, t, true)) = searched {
        return Ok(base(Bound::new(t, "exhaustive-search")).exact(
            t,
            "exhaustive-search",
            "exhaustive search on PG(2,q)",
        ));
    }
    let choose2 = r * (r - 1) / 2;
    if r == 3 && q >= 4 {
        return Ok(base(Bound::new(3, "three-threshold-time")).exact(
            3,
            "three-threshold-time",
            "r = 3, q >= 4",
        ));
    }
    if r == 4 && q >= 6 {
        return Ok(base(Bound::new(4, "four-threshold-time")).exact(
            4,
            "four-threshold-time",
            "r = 4, q >= 6",
        ));
    }
    if r >= 5 && choose2 <= q {
        return Ok(base(Bound::new(r + 1, "slow-construction")).exact(
            r + 1,
            "slow-construction",
            "exact: r >= 5 and C(r,2) <= q",
        ));
    }
    // minimal percolating sets never finish in one round
    let mut lower = Bound::new(2, "no-single-round");
    if let Some(&(_, _, t, false)) = searched {
        if t > lower.value {
            lower = Bound::new(t, "search-witness");
        }
    }
    let mut report = base(lower);
    if r == 3 {
        // q = 2 or 3 without a search entry: the r-lines rule still caps the time
        report.upper = Bound::new(3, "three-threshold-time");
        report.lower.value = report.lower.value.min(3);
    }
    Ok(report)
}

/// Value of the LP bound at free parameters (j, N), with the flag
/// telling whether the optimal vertex lies in the polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpValue {
    pub value: BigRational,
    pub valid: bool,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// h_min = N r − N(q+1) j/(j+2) − N(N−1)/((j+1)(j+2)), valid when
/// j(q+1) ≤ N−1 ≤ 2(j+1)(q+1).
pub fn lp_h_min(q: u64, r: u64, j: u64, n: u64) -> Result<LpValue> {
    if j == 0 || n < 2 {
        return Err(Error::BadRange(format!(
            "need j >= 1 and N >= 2, got j={j}, N={n}"
        )));
    }
    let (q, r, j, n) = (q as i64, r as i64, j as i64, n as i64);
    let value =
        rat(n * r) - rat(n * (q + 1) * j) / rat(j + 2) - rat(n * (n - 1)) / rat((j + 1) * (j + 2));
    let valid = j * (q + 1) <= n - 1 && n - 1 <= 2 * (j + 1) * (q + 1);
    Ok(LpValue { value, valid })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpPoint {
    pub j: u64,
    pub n: u64,
    pub f: Vec<BigRational>,
    pub g: BigRational,
    pub h: BigRational,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub minimum: BigRational,
    pub argmin: LpPoint,
    /// Equality subsets whose system had no unique solution.
    pub degenerate: usize,
    pub feasible_vertices: usize,
}

/// Constraint rows a·x ≤ b over x = (f_1, …, f_j, g).
fn lp_constraints(q: u64, j: usize, n: u64) -> Vec<(Vec<BigRational>, BigRational)> {
    let dim = j + 1;
    let mut rows = Vec::with_capacity(j + 3);
    // line-count balance: 2f_1 + f_2 + … + f_j + g ≤ N(q+1)
    let mut a = vec![rat(1); dim];
    a[0] = rat(2);
    rows.push((a, rat((n * (q + 1)) as i64)));
    // monotonicity: f_k − f_{k−1} ≤ 0
    for k in 1..j {
        let mut a = vec![rat(0); dim];
        a[k] = rat(1);
        a[k - 1] = rat(-1);
        rows.push((a, rat(0)));
    }
    let mut a = vec![rat(0); dim];
    a[j - 1] = rat(-1);
    rows.push((a, rat(0)));
    let mut a = vec![rat(0); dim];
    a[j] = rat(-1);
    rows.push((a, rat(0)));
    // adjacency count: Σ k f_k + (j+1) g ≤ C(N,2)
    let a = (0..dim).map(|k| rat(k as i64 + 1)).collect();
    rows.push((a, rat((n * (n - 1) / 2) as i64)));
    rows
}

/// Solves a square system by Gauss-Jordan elimination; None when singular.
fn solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size).find(|&row| !m[row][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = m[col][col].recip();
        for k in col..size {
            m[col][k] = &m[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for row in 0..size {
            if row != col && !m[row][col].is_zero() {
                let factor = m[row][col].clone();
                for k in col..size {
                    let delta = &factor * &m[col][k];
                    m[row][k] -= delta;
                }
                let delta = &factor * &b[col];
                b[row] -= delta;
            }
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimizes h = N r − Σ f_k − g over the LP polytope by enumerating every
/// vertex candidate in exact rational arithmetic.
pub fn lp_vertex_oracle(q: u64, r: u64, j: u64, n: u64) -> Result<OracleResult> {
    if j == 0 || j > 6 || n < 2 {
        return Err(Error::BadRange(format!(
            "need 1 <= j <= 6 and N >= 2, got j={j}, N={n}"
        )));
    }
    let jj = j as usize;
    let rows = lp_constraints(q, jj, n);
    let objective = |x: &[BigRational]| -> BigRational {
        let mut h = rat((n * r) as i64);
        for v in x {
            h -= v;
        }
        h
    };
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    let mut degenerate = 0;
    let mut feasible = 0;
    for subset in subsets(rows.len(), jj + 1) {
        let m = subset.iter().map(|&i| rows[i].0.clone()).collect();
        let b = subset.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve(m, b) else {
            degenerate += 1;
            continue;
        };
        let inside = rows.iter().all(|(a, rhs)| {
            let lhs: BigRational = a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum();
            lhs <= *rhs
        });
        if !inside {
            continue;
        }
        feasible += 1;
        let h = objective(&x);
        if best.as_ref().is_none_or(|(bh, _)| h < *bh) {
            best = Some((h, x));
        }
    }
    // the origin is always a vertex, so a minimum exists
    let (minimum, x) = best.expect("origin is feasible");
    let g = x[jj].clone();
    let f = x[..jj].to_vec();
    Ok(OracleResult {
        argmin: LpPoint {
            j,
            n,
            f,
            g,
            h: minimum.clone(),
        },
        minimum,
        degenerate,
        feasible_vertices: feasible,
    })
}

/// The vertex where the balance, monotonicity and adjacency constraints are
/// tight: f_1 = … = f_j = f and g as below.
pub fn lp_tight_vertex(q: u64, j: u64, n: u64) -> (BigRational, BigRational) {
    let (q, j, n) = (q as i64, j as i64, n as i64);
    let f = rat(2 * n * (q + 1)) / rat(j + 2) - rat(n * (n - 1)) / rat((j + 2) * (j + 1));
    let g = rat(n * (n - 1)) / rat(j + 2) - rat(j * n * (q + 1)) / rat(j + 2);
    (f, g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpBest {
    pub j: u64,
    pub n: u64,
    pub h_min: BigRational,
    /// Smallest integer at least h_min.
    pub ceiling: u64,
}

/// Best valid LP bound over j = 1..q−1, maximizing over N in the validity
/// window (and N ≤ q²+q+1, the length of a line sequence).
pub fn best_lp_bound(q: u64, r: u64) -> Option<LpBest> {
    let lines = plane_size(q);
    let mut best: Option<LpBest> = None;
    for j in 1..q.max(2) {
        let lo = j * (q + 1) + 1;
        let hi = (2 * (j + 1) * (q + 1) + 1).min(lines);
        if lo > hi {
            break;
        }
        // h is a concave parabola in N with vertex at ((j+1)(r(j+2) − j(q+1)) + 1) / 2
        let peak = (j as i64 + 1) * (r as i64 * (j as i64 + 2) - j as i64 * (q as i64 + 1));
        let centre = ((peak + 1) / 2).clamp(lo as i64, hi as i64) as u64;
        let candidates = [
            lo,
            hi,
            centre,
            centre.saturating_sub(1).max(lo),
            (centre + 1).min(hi),
        ];
        for n in candidates {
            let v = lp_h_min(q, r, j, n).expect("j, N in range");
            debug_assert!(v.valid);
            if best.as_ref().is_none_or(|b| v.value > b.h_min) {
                let ceiling = v.value.ceil().to_integer().to_i64().unwrap_or(0).max(0) as u64;
                best = Some(LpBest {
                    j,
                    n,
                    h_min: v.value,
                    ceiling,
                });
            }
        }
    }
    best
}

/// For r = (1 − α) q with α in (1/((j+2)(j+3)), 1/((j+1)(j+2))], the
/// asymptotic form of the LP bound, reported for reference only.
fn fractional_regime_note(q: u64, r: u64) -> Option<String> {
    if r >= q {
        return None;
    }
    let alpha = 1.0 - r as f64 / q as f64;
    let j = (1..=q).find(|&j| {
        let (j, next) = (j as f64, j as f64 + 1.0);
        alpha > 1.0 / ((next + 1.0) * (next + 2.0)) && alpha <= 1.0 / ((j + 1.0) * (j + 2.0))
    })?;
    let closed = (1.0 - 2.0 * alpha.sqrt() - 2.0 * alpha) * (q * q) as f64;
    Some(format!(
        "asymptotic regime alpha={alpha:.4}, j={j}: (j/(j+2)) q^2 = {:.1}, (1-2sqrt(alpha)-2alpha) q^2 = {closed:.1} (o(q^2) terms dropped)",
        j as f64 / (j as f64 + 2.0) * (q * q) as f64
    ))
}

/// Exponent −(r+2)/r of the critical probability q^{−(r+2)/r}.
pub fn threshold_exponent(r: u64) -> Ratio<i64> {
    assert!(r >= 1);
    -Ratio::new(r as i64 + 2, r as i64)
}

pub fn critical_p(q: u64, r: u64) -> f64 {
    let e = threshold_exponent(r);
    (q as f64).powf(*e.numer() as f64 / *e.denom() as f64)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}
