//! Explicit point configurations with verified extremal behaviour.
//!
//! Every generator returning a [`ConstructionResult`] re-runs the percolation
//! engine on its output and fails with [`Error::VerificationFailed`] when any
//! claimed property does not hold. Free choices are resolved by the lowest
//! admissible index unless a seeded [`ChoicePolicy`] asks for random order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::percolation::{
    binomial2, closure, is_minimal_with, one_by_one_verify, percolates, Percolator,
};
use crate::plane::IncidencePlane;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionResult {
    pub name: String,
    pub q: usize,
    pub r: Option<usize>,
    pub point_indices: Vec<usize>,
    pub checks: Vec<Check>,
    /// Choices made and derived objects, for display.
    #[serde(skip)]
    pub parameters: Vec<(String, String)>,
    /// Lines the construction is built from, when meaningful.
    #[serde(skip)]
    pub lines: Vec<usize>,
}

impl ConstructionResult {
    pub fn points(&self, plane: &IncidencePlane) -> PointSet {
        plane.point_set(self.point_indices.iter().copied())
    }

    pub fn parameter(&self, key: &str) -> Option<&str> {
        self.parameters
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// How free choices are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChoicePolicy {
    #[default]
    LowestIndex,
    Seeded(u64),
}

#[derive(Debug)]
struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    fn new(policy: ChoicePolicy) -> Self {
        Chooser {
            rng: match policy {
                ChoicePolicy::LowestIndex => None,
                ChoicePolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    fn arrange<I: IntoIterator<Item = usize>>(&mut self, candidates: I) -> Vec<usize> {
        let mut v: Vec<usize> = candidates.into_iter().collect();
        v.sort_unstable();
        if let Some(rng) = self.rng.as_mut() {
            v.shuffle(rng);
        }
        v
    }
}

struct Builder {
    name: String,
    q: usize,
    r: Option<usize>,
    checks: Vec<Check>,
    parameters: Vec<(String, String)>,
}

impl Builder {
    fn new(name: &str, plane: &IncidencePlane, r: Option<usize>) -> Self {
        Builder {
            name: name.to_string(),
            q: plane.order(),
            r,
            checks: Vec::new(),
            parameters: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
        });
        self
    }

    fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    fn finish(self, points: &PointSet, lines: Vec<usize>) -> Result<ConstructionResult> {
        if let Some(bad) = self.checks.iter().find(|c| !c.pass) {
            return Err(Error::VerificationFailed {
                name: self.name,
                check: bad.name.clone(),
            });
        }
        Ok(ConstructionResult {
            name: self.name,
            q: self.q,
            r: self.r,
            point_indices: points.to_vec(),
            checks: self.checks,
            parameters: self.parameters,
            lines,
        })
    }
}

/// Union of the first `m` lines (ascending index) through `center`.
pub fn r_broom(plane: &IncidencePlane, center: usize, m: usize) -> Result<PointSet> {
    let q = plane.order();
    if m == 0 || m > q + 1 {
        return Err(Error::BadArity(format!(
            "broom needs 1..={} lines, got {m}",
            q + 1
        )));
    }
    if center >= plane.size() {
        return Err(Error::IndexOutOfRange {
            index: center,
            size: plane.size(),
        });
    }
    let lines = plane.lines_through_list(center)[..m]
        .iter()
        .map(|&l| l as usize);
    Ok(plane.union_of_lines(lines))
}

/// The centre plus r − 1 further points on each of the first r lines through
/// it: (r−1)r + 1 points whose first round infects an r-broom.
pub fn broom_seed(plane: &IncidencePlane, center: usize, r: usize) -> Result<PointSet> {
    let q = plane.order();
    if r == 0 || r > q {
        return Err(Error::BadRange(format!(
            "broom seed needs 1 <= r <= {q}, got {r}"
        )));
    }
    let mut set = plane.point_set([center]);
    for &l in &plane.lines_through_list(center)[..r] {
        let others = plane
            .points_on_list(l as usize)
            .iter()
            .map(|&x| x as usize)
            .filter(|&x| x != center);
        for x in others.take(r - 1) {
            set.insert(x);
        }
    }
    Ok(set)
}

/// An m-broom at `center`, checked against threshold r: it percolates iff m ≥ r.
pub fn broom_result(
    plane: &IncidencePlane,
    center: usize,
    m: usize,
    r: usize,
) -> Result<ConstructionResult> {
    let set = r_broom(plane, center, m)?;
    let q = plane.order();
    let mut b = Builder::new("broom", plane, Some(r));
    b.param("center", center).param("lines", m);
    b.check(format!("size = {}", m * q + 1), set.len() == m * q + 1);
    let perc = percolates(plane, &set, r);
    if m >= r {
        b.check(format!("percolates at r={r}"), perc);
    } else if m + 1 == r {
        b.check(format!("does not percolate at r={r}"), !perc);
    }
    let lines = plane.lines_through_list(center)[..m]
        .iter()
        .map(|&l| l as usize)
        .collect();
    b.finish(&set, lines)
}

/// No line meets `set` in more than two points.
pub fn is_arc(plane: &IncidencePlane, set: &PointSet) -> bool {
    (0..plane.size()).all(|l| plane.points_on(l).intersection_len(set) <= 2)
}

/// No point lies on more than two of `lines`.
pub fn in_general_position(plane: &IncidencePlane, lines: &[usize]) -> bool {
    let mut count = vec![0u8; plane.size()];
    for &l in lines {
        for &p in plane.points_on_list(l) {
            count[p as usize] += 1;
            if count[p as usize] > 2 {
                return false;
            }
        }
    }
    let mut distinct = lines.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len() == lines.len()
}

/// The conic x² = yz: points (t, t², 1) and (0, 1, 0).
pub fn conic_oval(plane: &IncidencePlane) -> Result<PointSet> {
    let c = plane.require_coordinates()?;
    let f = c.field();
    let mut pts: Vec<usize> = f
        .elements()
        .map(|t| c.point_index([t, f.mul(t, t), 1]).expect("nonzero"))
        .collect();
    pts.push(c.point_index([0, 1, 0]).expect("nonzero"));
    let set = plane.point_set(pts);
    if !is_arc(plane, &set) {
        return Err(Error::VerificationFailed {
            name: "oval".into(),
            check: "arc".into(),
        });
    }
    Ok(set)
}

/// The conic together with its nucleus (1, 0, 0); even orders only.
pub fn hyperoval(plane: &IncidencePlane) -> Result<PointSet> {
    let q = plane.order();
    let c = plane.require_coordinates()?;
    if q % 2 == 1 {
        return Err(Error::OddOrder(q as u32));
    }
    let mut set = conic_oval(plane)?;
    set.insert(c.point_index([1, 0, 0]).expect("nonzero"));
    if !is_arc(plane, &set) {
        return Err(Error::VerificationFailed {
            name: "hyperoval".into(),
            check: "arc".into(),
        });
    }
    Ok(set)
}

pub fn oval_result(plane: &IncidencePlane) -> Result<ConstructionResult> {
    let set = conic_oval(plane)?;
    let mut b = Builder::new("oval", plane, None);
    b.check(
        format!("size = {}", plane.order() + 1),
        set.len() == plane.order() + 1,
    )
    .check("no three collinear", is_arc(plane, &set));
    b.finish(&set, Vec::new())
}

pub fn hyperoval_result(plane: &IncidencePlane) -> Result<ConstructionResult> {
    let set = hyperoval(plane)?;
    let mut b = Builder::new("hyperoval", plane, None);
    let two_or_zero =
        (0..plane.size()).all(|l| matches!(plane.points_on(l).intersection_len(&set), 0 | 2));
    b.check(
        format!("size = {}", plane.order() + 2),
        set.len() == plane.order() + 2,
    )
    .check("no three collinear", is_arc(plane, &set))
    .check("every line meets it in 0 or 2 points", two_or_zero);
    b.finish(&set, Vec::new())
}

/// Lines of the dual conic, [t, t², 1] and [0, 1, 0], by ascending index.
fn dual_conic_lines(plane: &IncidencePlane) -> Result<Vec<usize>> {
    let c = plane.require_coordinates()?;
    let f = c.field();
    let mut lines: Vec<usize> = f
        .elements()
        .map(|t| c.line_index([t, f.mul(t, t), 1]).expect("nonzero"))
        .collect();
    lines.push(c.line_index([0, 1, 0]).expect("nonzero"));
    lines.sort_unstable();
    Ok(lines)
}

/// The largest available family of lines in general position: the dual conic,
/// followed by the dual nucleus [1, 0, 0] when q is even.
fn dual_arc_lines(plane: &IncidencePlane) -> Result<Vec<usize>> {
    let mut lines = dual_conic_lines(plane)?;
    if plane.order() % 2 == 0 {
        let c = plane.require_coordinates()?;
        lines.push(c.line_index([1, 0, 0]).expect("nonzero"));
    }
    Ok(lines)
}

/// k lines, no three concurrent, taken from the dual conic.
pub fn general_position_lines(plane: &IncidencePlane, k: usize) -> Result<Vec<usize>> {
    let q = plane.order();
    plane.require_coordinates()?;
    if k > q + 1 {
        return Err(Error::TooMany {
            requested: k,
            max: q + 1,
        });
    }
    let mut lines = dual_conic_lines(plane)?;
    lines.truncate(k);
    if !in_general_position(plane, &lines) {
        return Err(Error::VerificationFailed {
            name: "general_position_lines".into(),
            check: "no three concurrent".into(),
        });
    }
    Ok(lines)
}

/// Picks A_i: the first `r - i + 1` points of l_i off the earlier lines.
fn staircase(plane: &IncidencePlane, lines: &[usize], r: usize, chooser: &mut Chooser) -> PointSet {
    let mut set = plane.empty_points();
    let mut covered = plane.empty_points();
    for (i, &l) in lines.iter().take(r).enumerate() {
        let fresh = plane.points_on(l).difference(&covered);
        for p in chooser.arrange(&fresh).into_iter().take(r - i) {
            set.insert(p);
        }
        covered.union_with(plane.points_on(l));
    }
    set
}

/// A percolating set of size C(r+1, 2) built from lines in general position.
///
/// With at least 2r such lines the staircase on the first r of them percolates
/// along the sequence "all general-position lines, then the rest". Otherwise,
/// when r² < 2q, the same staircase is completed by an r-broom through a point
/// P of l_1 whose other lines avoid the pairwise intersections of l_2..l_r.
pub fn min_percolating_from_general_position(
    plane: &IncidencePlane,
    r: usize,
    policy: ChoicePolicy,
) -> Result<ConstructionResult> {
    min_percolating_with(plane, r, policy, Completion::Auto)
}

/// Which argument certifies that the staircase percolates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// Use 2r general-position lines when available, the broom otherwise.
    #[default]
    Auto,
    Lines,
    Broom,
}

pub fn min_percolating_with(
    plane: &IncidencePlane,
    r: usize,
    policy: ChoicePolicy,
    completion: Completion,
) -> Result<ConstructionResult> {
    let q = plane.order();
    if r == 0 || r > q + 1 {
        return Err(Error::BadRange(format!("r = {r} outside 1..={}", q + 1)));
    }
    let family = dual_arc_lines(plane)?;
    let mut chooser = Chooser::new(policy);
    let n = plane.size();
    let target = r * (r + 1) / 2;

    let use_lines = match completion {
        Completion::Auto | Completion::Lines => 2 * r <= family.len(),
        Completion::Broom => false,
    };
    let use_broom = completion != Completion::Lines && r * r < 2 * q && r <= family.len();
    let (variant, lines, sequence) = if use_lines {
        let mut seq = family.clone();
        seq.extend((0..n).filter(|l| !family.contains(l)));
        ("general-position", family[..r].to_vec(), seq)
    } else if use_broom {
        let lines = family[..r].to_vec();
        let rest_union = plane.union_of_lines(lines[1..].iter().copied());
        let mut crossings = plane.empty_points();
        for i in 1..r {
            for j in i + 1..r {
                crossings.insert(plane.meet(lines[i], lines[j])?);
            }
        }
        let candidates = plane.points_on(lines[0]).difference(&rest_union);
        let mut found = None;
        for p in chooser.arrange(&candidates) {
            let brooms: Vec<usize> = chooser
                .arrange(plane.lines_through(p).iter().filter(|&m| m != lines[0]))
                .into_iter()
                .filter(|&m| plane.points_on(m).intersection_len(&crossings) == 0)
                .take(r - 1)
                .collect();
            if brooms.len() == r - 1 {
                found = Some((p, brooms));
                break;
            }
        }
        let (p, brooms) = found.ok_or_else(|| {
            Error::ConstructionFailed("no point of l_1 admits r-1 broom lines".into())
        })?;
        let mut seq = lines.clone();
        seq.extend(&brooms);
        let mut placed = plane.empty_points();
        for &l in &seq {
            placed.insert(l);
        }
        let rest: Vec<usize> = (0..n).filter(|&l| !placed.contains(l)).collect();
        seq.extend(rest.iter().filter(|&&l| !plane.is_incident(p, l)));
        seq.extend(rest.iter().filter(|&&l| plane.is_incident(p, l)));
        ("broom-completion", lines, seq)
    } else {
        return Err(Error::PreconditionUnmet(format!(
            "need 2r <= {} general-position lines or r^2 < 2q (q={q}, r={r})",
            family.len()
        )));
    };

    let set = staircase(plane, &lines, r, &mut chooser);
    let mut perc = Percolator::new(plane, r);
    let mut b = Builder::new("min-percolating", plane, Some(r));
    b.param("variant", variant);
    b.param("lines", format!("{lines:?}"));
    b.check(format!("size = C(r+1,2) = {target}"), set.len() == target)
        .check(
            "lines in general position",
            in_general_position(plane, &lines),
        )
        .check("percolates", perc.percolates(&set))
        .check(
            "one-by-one sequence valid",
            one_by_one_verify(plane, &set, r, &sequence)?,
        )
        .check("inclusion-minimal", is_minimal_with(&mut perc, &set));
    b.finish(&set, lines)
}

/// A minimal percolating set with percolation time exactly 3, for
/// 4 ≤ r ≤ (q+7)/3.
///
/// Built on an r-broom l_1..l_r with centre P: P_1 on l_1, P_{2,1}, P_{2,2} on
/// l_2, the lines l'_1 = P_1P_{2,1} and l'_2 = P_1P_{2,2} cut every l_i in
/// P_{i,1}, P_{i,2}; a point P_{3,3} of l_3 then projects P_{j,1} onto each
/// l_i, i ≥ 4, giving r − 3 further points per line. Choices are admissible
/// when all these points are distinct and the engine confirms percolation in
/// exactly three rounds and inclusion-minimality; the first admissible choice
/// in choice order is returned. The centre is the first point in that order.
pub fn minimal_t3_set(
    plane: &IncidencePlane,
    r: usize,
    policy: ChoicePolicy,
) -> Result<ConstructionResult> {
    let q = plane.order();
    if r < 4 || 3 * r > q + 7 {
        return Err(Error::PreconditionUnmet(format!(
            "need 4 <= r <= (q+7)/3, got q={q}, r={r}"
        )));
    }
    let target = 3 + 2 * (r - 1) + (r - 3) * (r - 3);
    let mut chooser = Chooser::new(policy);
    let mut rejected = std::collections::BTreeMap::new();

    for p in chooser.arrange(0..plane.size()).into_iter().take(1) {
        let broom: Vec<usize> = chooser
            .arrange(plane.lines_through(p))
            .into_iter()
            .take(r)
            .collect();
        let on = |l: usize, ch: &mut Chooser| -> Vec<usize> {
            ch.arrange(plane.points_on(l).iter().filter(|&x| x != p))
        };
        for p1 in on(broom[0], &mut chooser) {
            let second = on(broom[1], &mut chooser);
            for (ia, &p21) in second.iter().enumerate() {
                for &p22 in &second[ia + 1..] {
                    let lp1 = plane.line_through(p1, p21)?;
                    let lp2 = plane.line_through(p1, p22)?;
                    let mut pi1 = vec![0; r];
                    let mut pi2 = vec![0; r];
                    for i in 1..r {
                        pi1[i] = plane.meet(broom[i], lp1)?;
                        pi2[i] = plane.meet(broom[i], lp2)?;
                    }
                    let third = on(broom[2], &mut chooser);
                    for &p33 in third.iter().filter(|&&x| x != pi1[2] && x != pi2[2]) {
                        let mut set = plane.point_set([p, p1, p33]);
                        for i in 1..r {
                            set.insert(pi1[i]);
                            set.insert(pi2[i]);
                        }
                        let mut spokes = Vec::with_capacity(r);
                        for j in (1..r).filter(|&j| j != 2) {
                            spokes.push((j, plane.line_through(p33, pi1[j])?));
                        }
                        for i in 3..r {
                            for &(j, spoke) in &spokes {
                                if j != i {
                                    set.insert(plane.meet(broom[i], spoke)?);
                                }
                            }
                        }
                        if set.len() != target {
                            continue;
                        }
                        match verify_t3(
                            plane,
                            r,
                            set,
                            TriplePoint {
                                centre: p,
                                p1,
                                p21,
                                p22,
                                p33,
                                broom: &broom,
                            },
                        ) {
                            Err(Error::VerificationFailed { check, .. }) => {
                                *rejected.entry(check).or_insert(0usize) += 1;
                            }
                            other => return other,
                        }
                    }
                }
            }
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no admissible choice of P, P_1, P_{{2,1}}, P_{{2,2}}, P_{{3,3}}; rejections: {rejected:?}"
    )))
}

struct TriplePoint<'a> {
    centre: usize,
    p1: usize,
    p21: usize,
    p22: usize,
    p33: usize,
    broom: &'a [usize],
}

fn verify_t3(
    plane: &IncidencePlane,
    r: usize,
    set: PointSet,
    c: TriplePoint<'_>,
) -> Result<ConstructionResult> {
    let target = 3 + 2 * (r - 1) + (r - 3) * (r - 3);
    let mut b = Builder::new("minimal-time-3", plane, Some(r));
    b.param("centre", c.centre)
        .param("p1", c.p1)
        .param("p21", c.p21)
        .param("p22", c.p22)
        .param("p33", c.p33);

    let trace = closure(plane, &set, r);
    let mut perc = Percolator::new(plane, r);
    b.check(format!("size = {target}"), set.len() == target)
        .check("percolates", trace.percolates)
        .check("time = 3", trace.time() == Some(3))
        .check("inclusion-minimal", is_minimal_with(&mut perc, &set));
    b.finish(&set, c.broom.to_vec())
}

/// A percolating set of size C(r+1, 2) that needs r + 1 rounds, for r ≥ 5 and
/// C(r,2) ≤ q.
///
/// Lines l_1..l_r in general position carry parts A_i of size r + 1 − i that
/// avoid all pairwise intersections. With A_r = {P} and A_{r−1} = {Q_1, Q_2},
/// the joins q_1 = PQ_1 and q_2 = PQ_2 must pass through l_1 ∩ l_2 and
/// l_1 ∩ l_3 respectively, and A_{r−2} avoids q_1 ∪ q_2. The generator fixes
/// l_r, P, l_{r−1}, Q_1 and Q_2 first and then derives l_1, l_2, l_3 through
/// points X_12 ∈ q_1 and X_13 ∈ q_2, which yields the same configuration.
pub fn slow_percolating_set(
    plane: &IncidencePlane,
    r: usize,
    policy: ChoicePolicy,
) -> Result<ConstructionResult> {
    let q = plane.order();
    if r < 5 || binomial2(r) > q {
        return Err(Error::PreconditionUnmet(format!(
            "need r >= 5 and C(r,2) <= q, got q={q}, r={r}"
        )));
    }
    let mut chooser = Chooser::new(policy);
    let n = plane.size();

    for l_last in chooser.arrange(0..n) {
        for p in chooser.arrange(plane.points_on(l_last)) {
            let off_p: Vec<usize> = chooser.arrange((0..n).filter(|&l| !plane.is_incident(p, l)));
            for &l_prev in off_p.iter().take(2) {
                let qs: Vec<usize> = chooser.arrange(
                    plane
                        .points_on(l_prev)
                        .iter()
                        .filter(|&x| !plane.is_incident(x, l_last)),
                );
                if let Some(result) =
                    try_slow(plane, r, &mut chooser, l_last, p, l_prev, qs[0], qs[1])?
                {
                    return Ok(result);
                }
            }
        }
    }
    Err(Error::ConstructionFailed(
        "no admissible slow configuration".into(),
    ))
}

#[allow(clippy::too_many_arguments)]
fn try_slow(
    plane: &IncidencePlane,
    r: usize,
    chooser: &mut Chooser,
    l_last: usize,
    p: usize,
    l_prev: usize,
    q1_pt: usize,
    q2_pt: usize,
) -> Result<Option<ConstructionResult>> {
    let n = plane.size();
    let q1 = plane.line_through(p, q1_pt)?;
    let q2 = plane.line_through(p, q2_pt)?;
    let forbidden_pts = plane.point_set([p, q1_pt, q2_pt]);

    // a new line may not pass through P, Q_1, Q_2 or any crossing of chosen lines
    let admissible = |chosen: &[usize], l: usize| -> bool {
        if chosen.contains(&l) || plane.points_on(l).intersection_len(&forbidden_pts) > 0 {
            return false;
        }
        for (i, &a) in chosen.iter().enumerate() {
            for &b in &chosen[i + 1..] {
                let x = plane.meet(a, b).expect("distinct");
                if plane.is_incident(x, l) {
                    return false;
                }
            }
        }
        true
    };

    let x12_cands = chooser.arrange(plane.points_on(q1).iter().filter(|&x| x != p && x != q1_pt));
    let x13_cands = chooser.arrange(plane.points_on(q2).iter().filter(|&x| x != p && x != q2_pt));
    for &x12 in &x12_cands {
        for &x13 in &x13_cands {
            let l1 = plane.line_through(x12, x13)?;
            if l1 == q1 || l1 == q2 || !admissible(&[l_prev, l_last], l1) {
                continue;
            }
            let mut chosen = vec![l_prev, l_last, l1];
            let l2 = chooser
                .arrange(plane.lines_through(x12))
                .into_iter()
                .find(|&l| l != q1 && admissible(&chosen, l));
            let Some(l2) = l2 else { continue };
            chosen.push(l2);
            let l3 = chooser
                .arrange(plane.lines_through(x13))
                .into_iter()
                .find(|&l| l != q2 && admissible(&chosen, l));
            let Some(l3) = l3 else { continue };
            chosen.push(l3);
            let mut middle = Vec::new();
            for l in chooser.arrange(0..n) {
                if middle.len() + 5 >= r {
                    break;
                }
                if admissible(&chosen, l) {
                    chosen.push(l);
                    middle.push(l);
                }
            }
            if middle.len() + 5 < r {
                continue;
            }
            let mut lines = vec![l1, l2, l3];
            lines.extend(middle);
            lines.push(l_prev);
            lines.push(l_last);
            // r = 5 has no middle lines and l_{r-2} = l_3
            if let Some(result) =
                finish_slow(plane, r, chooser, &lines, p, [q1_pt, q2_pt], [q1, q2])?
            {
                return Ok(Some(result));
            }
        }
    }
    Ok(None)
}

fn finish_slow(
    plane: &IncidencePlane,
    r: usize,
    chooser: &mut Chooser,
    lines: &[usize],
    p: usize,
    qpts: [usize; 2],
    qlines: [usize; 2],
) -> Result<Option<ConstructionResult>> {
    debug_assert_eq!(lines.len(), r);
    let mut crossings = plane.empty_points();
    for i in 0..r {
        for j in i + 1..r {
            crossings.insert(plane.meet(lines[i], lines[j])?);
        }
    }
    let q_union = plane.union_of_lines(qlines);
    let mut set = plane.point_set([p, qpts[0], qpts[1]]);
    let mut parts = vec![Vec::new(); r];
    parts[r - 1] = vec![p];
    parts[r - 2] = qpts.to_vec();
    for i in 0..r - 2 {
        let want = r - i;
        let mut avoid = crossings.clone();
        if i == r - 3 {
            avoid.union_with(&q_union);
        }
        let cands = chooser.arrange(plane.points_on(lines[i]).difference(&avoid).iter());
        if cands.len() < want {
            return Ok(None);
        }
        parts[i] = cands[..want].to_vec();
        for &x in &parts[i] {
            set.insert(x);
        }
    }
    let target = r * (r + 1) / 2;
    if set.len() != target {
        return Ok(None);
    }

    let mut b = Builder::new("slow-percolating", plane, Some(r));
    b.param("lines", format!("{lines:?}"))
        .param("p", p)
        .param("q1", qpts[0])
        .param("q2", qpts[1]);
    let sizes_ok = parts
        .iter()
        .enumerate()
        .all(|(i, part)| part.len() == r - i);
    let avoid_crossings = set.intersection_len(&crossings) == 0;
    let x12 = plane.meet(lines[0], lines[1])?;
    let x13 = plane.meet(lines[0], lines[2])?;
    let through = plane.is_incident(x12, qlines[0]) && plane.is_incident(x13, qlines[1]);
    let part_avoids = parts[r - 3].iter().all(|&x| !q_union.contains(x));
    let trace = closure(plane, &set, r);
    let single_line_rounds = (0..r - 1).all(|j| {
        trace
            .rounds
            .get(j)
            .is_some_and(|round| round.lines == [lines[j]])
    });
    b.check(format!("size = C(r+1,2) = {target}"), set.len() == target)
        .check(
            "lines in general position",
            in_general_position(plane, lines),
        )
        .check("part sizes r+1-i", sizes_ok)
        .check("no part contains a crossing", avoid_crossings)
        .check("joins of P with Q_1, Q_2 pass l1∩l2, l1∩l3", through)
        .check("part r-2 avoids both joins", part_avoids)
        .check("rounds 1..r-1 each infect only l_j", single_line_rounds)
        .check("percolates", trace.percolates)
        .check(format!("time = {}", r + 1), trace.time() == Some(r + 1));
    Ok(Some(b.finish(&set, lines.to_vec())?))
}

/// Union of the q + 2 lines of a dual hyperoval; even q only. With the default
/// r = q/2 + 2 this is a non-percolating set of size (q+1)(r−1).
pub fn dual_hyperoval_union(
    plane: &IncidencePlane,
    r: Option<usize>,
) -> Result<ConstructionResult> {
    let q = plane.order();
    plane.require_coordinates()?;
    if q % 2 == 1 {
        return Err(Error::OddOrder(q as u32));
    }
    let r = r.unwrap_or(q / 2 + 2);
    let lines = dual_arc_lines(plane)?;
    let set = plane.union_of_lines(lines.iter().copied());
    let expected = (q + 2) * (q + 1) / 2;
    let outside_meet = (0..plane.size())
        .filter(|l| !lines.contains(l))
        .all(|l| plane.points_on(l).intersection_len(&set) == q / 2 + 1);
    let mut b = Builder::new("dual-hyperoval-union", plane, Some(r));
    b.check(
        "q+2 lines in general position",
        lines.len() == q + 2 && in_general_position(plane, &lines),
    )
    .check(
        format!("size = (q+2)(q+1)/2 = {expected}"),
        set.len() == expected,
    )
    .check(
        format!("every other line meets it in {} points", q / 2 + 1),
        outside_meet,
    )
    .check(
        format!("does not percolate at r={r}"),
        !percolates(plane, &set, r),
    );
    if r == q / 2 + 2 {
        b.check("size = (q+1)(r-1)", set.len() == (q + 1) * (r - 1));
    }
    b.finish(&set, lines)
}

/// Complement of a hyperoval; even q only. Does not percolate at r = q.
pub fn hyperoval_complement(
    plane: &IncidencePlane,
    r: Option<usize>,
) -> Result<ConstructionResult> {
    let q = plane.order();
    let oval = hyperoval(plane)?;
    let r = r.unwrap_or(q);
    let set = oval.complement();
    let uninfected_ok =
        (0..plane.size()).all(|l| matches!(plane.points_on(l).intersection_len(&oval), 0 | 2));
    let mut b = Builder::new("hyperoval-complement", plane, Some(r));
    b.check(
        format!("size = (q+1)(q-1) = {}", (q + 1) * (q - 1)),
        set.len() == (q + 1) * (q - 1),
    )
    .check("every line has 0 or 2 uninfected points", uninfected_ok)
    .check(
        format!("does not percolate at r={r}"),
        !percolates(plane, &set, r),
    );
    b.finish(&set, Vec::new())
}
