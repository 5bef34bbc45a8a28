//! Instances pairing a finite point set `P` with a rectangle family, and the
//! induced trace family: each rectangle restricted to the points it contains.

use sha2::{Digest, Sha256};

use crate::geom::{Point, Rect};
use crate::solver::{self, SetSystem, SolveError};
use crate::CoordNum;

/// A point set together with a rectangle family over it.
///
/// Points are deduplicated at construction, keeping first occurrences, so
/// point indices always refer to distinct points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<C> {
    points: Vec<Point<C>>,
    rects: Vec<Rect<C>>,
}

impl<C: CoordNum> Instance<C> {
    pub fn new(points: Vec<Point<C>>, rects: Vec<Rect<C>>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let points = points.into_iter().filter(|p| seen.insert(*p)).collect();
        Instance { points, rects }
    }

    pub fn points(&self) -> &[Point<C>] {
        &self.points
    }

    pub fn rects(&self) -> &[Rect<C>] {
        &self.rects
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_rects(&self) -> usize {
        self.rects.len()
    }

    /// Hex digest of a canonical byte encoding of the instance.
    ///
    /// Coordinates must fit in an `i64`, which external input guarantees.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        let push = |h: &mut Sha256, v: C| {
            let v = v.to_i64().expect("coordinate fits in i64");
            h.update(v.to_le_bytes());
        };
        h.update((self.points.len() as u64).to_le_bytes());
        for p in &self.points {
            push(&mut h, p.x);
            push(&mut h, p.y);
        }
        h.update((self.rects.len() as u64).to_le_bytes());
        for r in &self.rects {
            push(&mut h, r.x_lo());
            push(&mut h, r.x_hi());
            push(&mut h, r.y_lo());
            push(&mut h, r.y_hi());
        }
        let out = h.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// The trace family: member `i` is the set of point indices rect `i` contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFamily {
    n_points: usize,
    member_sets: Vec<Vec<usize>>,
}

impl TraceFamily {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn member_sets(&self) -> &[Vec<usize>] {
        &self.member_sets
    }

    pub fn n_members(&self) -> usize {
        self.member_sets.len()
    }

    /// Members whose trace is empty. Such members make piercing through `P`
    /// impossible and are rejected by pipelines that assume none.
    pub fn empty_members(&self) -> Vec<usize> {
        self.member_sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_set_system(&self) -> SetSystem {
        SetSystem::new(self.n_points, self.member_sets.clone())
            .expect("trace indices are within the point set")
    }
}

/// Restrict every rectangle to the point set.
pub fn trace<C: CoordNum>(inst: &Instance<C>) -> TraceFamily {
    let member_sets = inst
        .rects()
        .iter()
        .map(|r| {
            inst.points()
                .iter()
                .enumerate()
                .filter(|(_, p)| r.contains(**p))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    TraceFamily { n_points: inst.n_points(), member_sets }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("index out of range: member {0}")]
    IndexOutOfRange(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

/// Do the selected members share a common point of `P`?
pub fn subfamily_trace_intersecting(
    tf: &TraceFamily,
    indices: &[usize],
) -> Result<bool, TraceError> {
    if indices.is_empty() {
        return Err(TraceError::InvalidParameters("empty subfamily selection".into()));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= tf.n_members()) {
        return Err(TraceError::IndexOutOfRange(bad));
    }
    let mut acc: Vec<usize> = tf.member_sets[indices[0]].clone();
    for &i in &indices[1..] {
        let s = &tf.member_sets[i];
        acc.retain(|e| s.binary_search(e).is_ok());
        if acc.is_empty() {
            return Ok(false);
        }
    }
    Ok(!acc.is_empty())
}

/// Outcome of a (p,q)-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PqOutcome {
    Holds,
    /// A p-subset among which no q members share a point.
    Violated { witness: Vec<usize> },
}

impl PqOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, PqOutcome::Holds)
    }
}

/// Above this many p-subsets the q = 2 check switches to the packing route.
const PQ_ENUMERATION_LIMIT: u128 = 200_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > PQ_ENUMERATION_LIMIT {
            return acc;
        }
    }
    acc
}

/// Among every p members, do some q share a common point of `P`?
///
/// Requires `p >= q >= 2`. Checked by p-subset enumeration; for q = 2 on
/// families where enumeration is infeasible, the equivalent packing test
/// `nu <= p - 1` is used instead (p members with no intersecting pair are
/// exactly p pairwise-disjoint members).
pub fn has_pq_property(tf: &TraceFamily, p: usize, q: usize) -> Result<PqOutcome, TraceError> {
    if q < 2 || p < q {
        return Err(TraceError::InvalidParameters(format!(
            "require p >= q >= 2, got p={p} q={q}"
        )));
    }
    if q == 2 && binomial(tf.n_members(), p) > PQ_ENUMERATION_LIMIT {
        return pq_by_packing(tf, p);
    }
    pq_by_enumeration(tf, p, q)
}

pub(crate) fn pq_by_enumeration(
    tf: &TraceFamily,
    p: usize,
    q: usize,
) -> Result<PqOutcome, TraceError> {
    use itertools::Itertools;
    let mut counts = vec![0usize; tf.n_points.max(1)];
    for combo in (0..tf.n_members()).combinations(p) {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut ok = false;
        'outer: for &i in &combo {
            for &e in &tf.member_sets[i] {
                counts[e] += 1;
                if counts[e] >= q {
                    ok = true;
                    break 'outer;
                }
            }
        }
        if !ok {
            return Ok(PqOutcome::Violated { witness: combo });
        }
    }
    Ok(PqOutcome::Holds)
}

pub(crate) fn pq_by_packing(tf: &TraceFamily, p: usize) -> Result<PqOutcome, TraceError> {
    let packing = solver::max_packing(&tf.to_set_system())?;
    if packing.value <= p - 1 {
        Ok(PqOutcome::Holds)
    } else {
        Ok(PqOutcome::Violated { witness: packing.certificate[..p].to_vec() })
    }
}
