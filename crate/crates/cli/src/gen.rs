//! Seeded instance generators.
//!
//! Every generator draws all randomness from a ChaCha stream seeded by the
//! caller, so equal seeds give identical output, and re-checks the
//! hypothesis it advertises before returning. Rejection sampling keeps the
//! raw distributions honest; repair points are inserted only where a
//! hypothesis would otherwise fail, and a draw that would need more repair
//! points than the point budget is rejected outright.

use std::collections::BTreeSet;

use pierce_lab::dinterval::DIntervalFamily;
use pierce_lab::geom::{rects_intersect, Point, Rect};
use pierce_lab::reduction::{check_claim_quadrants, ClaimOutcome};
use pierce_lab::solver::{
    min_hitting_set, oracle_min_hitting_set, SetSystem, SolveError,
};
use pierce_lab::trace::{self, has_pq_property, Instance, PqOutcome};
use pierce_lab::{fixtures, Coord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whole-instance redraws allowed before giving up.
pub const REJECTION_BUDGET: u64 = 10_000;
/// Per-rectangle redraws while growing a pairwise-intersecting family.
const RECT_ATTEMPTS: u64 = 20_000;

#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct GenStats {
    /// Whole-instance draws, including the accepted one.
    pub attempts: u64,
    /// Draws thrown away before one was accepted.
    pub rejections: u64,
    /// Repair points inserted into the accepted draw.
    pub repairs: usize,
}

impl GenStats {
    pub fn rejection_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.rejections as f64 / self.attempts as f64
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error(
        "rejection budget exhausted after {attempts} attempts; \
         widen the span, allow more points, or ask for fewer rectangles"
    )]
    RejectionBudget { attempts: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

/// A generated instance plus what the generator knows about it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance<Coord>,
    pub stats: GenStats,
    /// Oracle-confirmed trace piercing number, when the construction fixes
    /// one.
    pub tau: Option<usize>,
    /// Piercing origin, when the construction fixes one.
    pub origin: Option<Point<Coord>>,
}

fn require(cond: bool, what: &str) -> Result<(), GenError> {
    if cond {
        Ok(())
    } else {
        Err(GenError::InvalidParameters(what.to_string()))
    }
}

fn sample_rect(rng: &mut ChaCha8Rng, x_range: (Coord, Coord), y_range: (Coord, Coord)) -> Rect<Coord> {
    let (a, b) = (rng.gen_range(x_range.0..=x_range.1), rng.gen_range(x_range.0..=x_range.1));
    let (c, d) = (rng.gen_range(y_range.0..=y_range.1), rng.gen_range(y_range.0..=y_range.1));
    Rect::new(a.min(b), a.max(b), c.min(d), c.max(d)).expect("ordered endpoints")
}

/// Grow a pairwise-intersecting family by per-rectangle rejection.
fn sample_pairwise_rects(
    rng: &mut ChaCha8Rng,
    n_rects: usize,
    span: Coord,
) -> Option<Vec<Rect<Coord>>> {
    let mut rects: Vec<Rect<Coord>> = Vec::with_capacity(n_rects);
    while rects.len() < n_rects {
        let mut accepted = None;
        for _ in 0..RECT_ATTEMPTS {
            let r = sample_rect(rng, (0, span), (0, span));
            if rects.iter().all(|q| rects_intersect(q, &r)) {
                accepted = Some(r);
                break;
            }
        }
        rects.push(accepted?);
    }
    Some(rects)
}

fn sample_point_in(rng: &mut ChaCha8Rng, r: &Rect<Coord>) -> (Coord, Coord) {
    (rng.gen_range(r.x_lo()..=r.x_hi()), rng.gen_range(r.y_lo()..=r.y_hi()))
}

fn pair_intersection(a: &Rect<Coord>, b: &Rect<Coord>) -> Option<Rect<Coord>> {
    Rect::new(
        a.x_lo().max(b.x_lo()),
        a.x_hi().min(b.x_hi()),
        a.y_lo().max(b.y_lo()),
        a.y_hi().min(b.y_hi()),
    )
    .ok()
}

fn covered(points: &BTreeSet<(Coord, Coord)>, r: &Rect<Coord>) -> bool {
    points.iter().any(|&(x, y)| r.contains(Point::new(x, y)))
}

/// Insert one point inside `r`, preferring one that is not already present.
fn insert_point_in(
    rng: &mut ChaCha8Rng,
    points: &mut BTreeSet<(Coord, Coord)>,
    r: &Rect<Coord>,
) {
    for _ in 0..64 {
        if points.insert(sample_point_in(rng, r)) {
            return;
        }
    }
    // Tiny rectangle already saturated with points; scan for any free cell.
    for x in r.x_lo()..=r.x_hi() {
        for y in r.y_lo()..=r.y_hi() {
            if points.insert((x, y)) {
                return;
            }
        }
    }
}

fn to_instance(points: BTreeSet<(Coord, Coord)>, rects: Vec<Rect<Coord>>) -> Instance<Coord> {
    Instance::new(points.into_iter().map(|(x, y)| Point::new(x, y)).collect(), rects)
}

/// Uniform rectangles conditioned on pairwise intersection, uniform points,
/// then the cheapest repairs that give every rectangle and every pairwise
/// intersection a point. Rejected when the repairs alone would exceed
/// `n_points`.
pub fn gen_random_pairwise(
    seed: u64,
    n_rects: usize,
    n_points: usize,
    span: Coord,
) -> Result<Generated, GenError> {
    require(n_rects >= 1, "n_rects must be positive")?;
    require(n_points >= 1, "n_points must be positive")?;
    require(span >= 1, "span must be positive")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = GenStats::default();
    loop {
        stats.attempts += 1;
        if stats.attempts > REJECTION_BUDGET {
            return Err(GenError::RejectionBudget { attempts: stats.attempts });
        }
        let Some(rects) = sample_pairwise_rects(&mut rng, n_rects, span) else {
            stats.rejections += 1;
            continue;
        };
        let mut points: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        for _ in 0..n_points {
            points.insert((rng.gen_range(0..=span), rng.gen_range(0..=span)));
        }
        let Some(repairs) = repair_pairwise(&mut rng, &mut points, &rects, n_points) else {
            stats.rejections += 1;
            continue;
        };
        stats.repairs = repairs;
        let inst = to_instance(points, rects);
        confirm_pairwise_trace(&inst);
        return Ok(Generated { instance: inst, stats, tau: None, origin: None });
    }
}

/// Add points until every rectangle and every pairwise intersection holds
/// one, dropping uniform filler first when the budget is tight. Returns the
/// repair count, or None when the repairs alone cannot fit in `budget`
/// points.
fn repair_pairwise(
    rng: &mut ChaCha8Rng,
    points: &mut BTreeSet<(Coord, Coord)>,
    rects: &[Rect<Coord>],
    budget: usize,
) -> Option<usize> {
    let mut needed: Vec<Rect<Coord>> = Vec::new();
    for (i, a) in rects.iter().enumerate() {
        if !covered(points, a) {
            needed.push(*a);
        }
        for b in &rects[i + 1..] {
            let cap = pair_intersection(a, b).expect("family is pairwise intersecting");
            if !covered(points, &cap) {
                needed.push(cap);
            }
        }
    }
    // Each repair may satisfy later regions too, so re-check as we go.
    let mut repairs = 0;
    for region in needed {
        if covered(points, &region) {
            continue;
        }
        while points.len() >= budget {
            // Drop an arbitrary filler point; repairs take priority. If
            // nothing can be dropped the draw is rejected.
            let filler = points
                .iter()
                .copied()
                .find(|&p| !point_is_load_bearing(points, rects, p));
            match filler {
                Some(p) => {
                    points.remove(&p);
                }
                None => return None,
            }
        }
        insert_point_in(rng, points, &region);
        if !covered(points, &region) {
            return None;
        }
        repairs += 1;
    }
    Some(repairs)
}

/// True when removing the point would break some already-satisfied region.
fn point_is_load_bearing(
    points: &BTreeSet<(Coord, Coord)>,
    rects: &[Rect<Coord>],
    p: (Coord, Coord),
) -> bool {
    let mut rest = points.clone();
    rest.remove(&p);
    for (i, a) in rects.iter().enumerate() {
        if covered(points, a) && !covered(&rest, a) {
            return true;
        }
        for b in &rects[i + 1..] {
            let cap = pair_intersection(a, b).expect("family is pairwise intersecting");
            if covered(points, &cap) && !covered(&rest, &cap) {
                return true;
            }
        }
    }
    false
}

/// Construction guarantee, re-checked through the trace model.
fn confirm_pairwise_trace(inst: &Instance<Coord>) {
    let tf = trace::trace(inst);
    for (i, s) in tf.member_sets().iter().enumerate() {
        assert!(!s.is_empty(), "generated rectangle {i} has an empty trace");
        for j in i + 1..tf.n_members() {
            assert!(
                trace::subfamily_trace_intersecting(&tf, &[i, j]).expect("valid indices"),
                "generated rectangles {i} and {j} share no trace point"
            );
        }
    }
}

// Fixed rectangle cycles whose trace piercing numbers are known exactly.
// Coordinates are multiples of 4 for rectangle corners and hold points at
// off-grid midpoints, so membership is never a tie.
const CYCLE4_RECTS: [(Coord, Coord, Coord, Coord); 4] =
    [(0, 28, 8, 28), (4, 24, 4, 36), (8, 36, 0, 24), (12, 32, 12, 32)];
const CYCLE4_POINTS: [(Coord, Coord); 6] =
    [(4, 8), (8, 4), (12, 30), (26, 8), (26, 26), (30, 12)];
// The k = 5 member nests strictly inside the fourth cycle rectangle, so it
// intersects exactly the traces that rectangle does.
const CYCLE5_TWIN: (Coord, Coord, Coord, Coord) = (11, 33, 11, 33);

const CYCLE6_RECTS: [(Coord, Coord, Coord, Coord); 6] = [
    (0, 40, 20, 48),
    (4, 36, 4, 32),
    (8, 48, 16, 36),
    (12, 32, 0, 44),
    (16, 44, 12, 52),
    (20, 52, 8, 40),
];
const CYCLE6_POINTS: [(Coord, Coord); 14] = [
    (4, 20),
    (8, 16),
    (8, 34),
    (12, 4),
    (12, 34),
    (12, 38),
    (16, 12),
    (16, 46),
    (20, 8),
    (34, 8),
    (34, 38),
    (38, 12),
    (38, 16),
    (46, 16),
];

/// The trace piercing number each cycle instance is built to have. Growth
/// stops at 3: members added beyond k = 6 contain the sixth rectangle, so
/// any piercing of the base six already pierces them.
pub fn cycle_tau(k: usize) -> usize {
    match k {
        0..=5 => 2,
        _ => 3,
    }
}

fn rect_of(t: (Coord, Coord, Coord, Coord)) -> Rect<Coord> {
    Rect::new(t.0, t.1, t.2, t.3).expect("frozen tables are ordered")
}

/// A k-cycle of pairwise trace-intersecting rectangles with no point in the
/// common core and a known piercing number, confirmed against the exact
/// solver (and the exhaustive oracle where it fits) on every call.
pub fn gen_cycle(k: usize) -> Result<Generated, GenError> {
    require(k >= 3, "cycle needs k >= 3")?;
    let instance = match k {
        3 => fixtures::triangle(),
        4 | 5 => {
            let mut rects: Vec<_> = CYCLE4_RECTS.into_iter().map(rect_of).collect();
            if k == 5 {
                rects.push(rect_of(CYCLE5_TWIN));
            }
            Instance::new(
                CYCLE4_POINTS.iter().map(|&(x, y)| Point::new(x, y)).collect(),
                rects,
            )
        }
        _ => {
            let mut rects: Vec<_> = CYCLE6_RECTS.into_iter().map(rect_of).collect();
            for j in 1..=(k - 6) as Coord {
                // Each extra member strictly contains the sixth rectangle.
                rects.push(Rect::new(20 - j, 52 + j, 8 - j, 40 + j).expect("ordered"));
            }
            Instance::new(
                CYCLE6_POINTS.iter().map(|&(x, y)| Point::new(x, y)).collect(),
                rects,
            )
        }
    };
    confirm_pairwise_trace(&instance);
    let tau = confirm_tau(&instance, cycle_tau(k))?;
    Ok(Generated { instance, stats: GenStats::default(), tau: Some(tau), origin: None })
}

/// Exact trace piercing number, cross-checked against the exhaustive oracle
/// when the instance is small enough for it.
fn confirm_tau(inst: &Instance<Coord>, expected: usize) -> Result<usize, GenError> {
    let ss = trace::trace(inst).to_set_system();
    let exact = min_hitting_set(&ss)?;
    if let Ok(oracle) = oracle_min_hitting_set(&ss) {
        assert_eq!(
            oracle.value, exact.value,
            "solver and oracle disagree on a frozen cycle instance"
        );
    }
    assert_eq!(
        exact.value, expected,
        "frozen cycle instance has piercing number {}, table says {expected}",
        exact.value
    );
    Ok(exact.value)
}

/// Rectangles all containing the origin, each holding a trace point pair in
/// opposite closed quadrants, pairwise intersections all pointed. The
/// origin itself is kept out of the point set so piercing stays nontrivial.
pub fn gen_quadrant(
    seed: u64,
    n_rects: usize,
    n_points: usize,
    span: Coord,
) -> Result<Generated, GenError> {
    require(n_rects >= 1, "n_rects must be positive")?;
    require(n_points >= 2 * n_rects, "need n_points >= 2 * n_rects for the quadrant pairs")?;
    require(span >= 1, "span must be positive")?;
    let origin = Point::new(0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = GenStats::default();
    'draw: loop {
        stats.attempts += 1;
        if stats.attempts > REJECTION_BUDGET {
            return Err(GenError::RejectionBudget { attempts: stats.attempts });
        }
        let rects: Vec<Rect<Coord>> = (0..n_rects)
            .map(|_| {
                let x_lo = rng.gen_range(-span..=0);
                let x_hi = rng.gen_range(0..=span);
                let y_lo = rng.gen_range(-span..=0);
                let y_hi = rng.gen_range(0..=span);
                Rect::new(x_lo, x_hi, y_lo, y_hi).expect("ordered endpoints")
            })
            .collect();
        let mut points: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        for r in &rects {
            // Opposite closed quadrants: 1 and 3, or 2 and 4.
            let (qa, qb) = if rng.gen_bool(0.5) {
                (
                    Rect::new(0, r.x_hi(), 0, r.y_hi()).expect("ordered"),
                    Rect::new(r.x_lo(), 0, r.y_lo(), 0).expect("ordered"),
                )
            } else {
                (
                    Rect::new(r.x_lo(), 0, 0, r.y_hi()).expect("ordered"),
                    Rect::new(0, r.x_hi(), r.y_lo(), 0).expect("ordered"),
                )
            };
            for q in [qa, qb] {
                let mut placed = false;
                for _ in 0..64 {
                    // Two draws, keep the one closer to the origin: quadrant
                    // witnesses near the center also cover many pairs.
                    let p1 = sample_point_in(&mut rng, &q);
                    let p2 = sample_point_in(&mut rng, &q);
                    let p = if p1.0.abs() + p1.1.abs() <= p2.0.abs() + p2.1.abs() { p1 } else { p2 };
                    if p != (0, 0) && points.insert(p) {
                        placed = true;
                        break;
                    }
                }
                if !placed && !covered(&points, &q) {
                    // Degenerate strip with nothing but the origin free.
                    stats.rejections += 1;
                    continue 'draw;
                }
            }
        }
        if !repair_pairwise_no_origin(&mut rng, &mut points, &rects) || points.len() > n_points {
            stats.rejections += 1;
            continue;
        }
        let mut fill_tries = 0u32;
        while points.len() < n_points {
            fill_tries += 1;
            if fill_tries > 10_000 {
                // The span cannot host this many distinct points.
                break;
            }
            let p = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
            if p == (0, 0) {
                continue;
            }
            points.insert(p);
        }
        let inst = to_instance(points, rects);
        confirm_pairwise_trace(&inst);
        assert!(
            matches!(check_claim_quadrants(&inst, origin), ClaimOutcome::Holds),
            "generated instance misses its quadrant pair"
        );
        return Ok(Generated { instance: inst, stats, tau: None, origin: Some(origin) });
    }
}

/// Pair repairs that never place the origin itself. Every pairwise
/// intersection here contains the origin, so it has at least one spare cell
/// unless it is exactly the origin.
fn repair_pairwise_no_origin(
    rng: &mut ChaCha8Rng,
    points: &mut BTreeSet<(Coord, Coord)>,
    rects: &[Rect<Coord>],
) -> bool {
    for (i, a) in rects.iter().enumerate() {
        for b in &rects[i + 1..] {
            let cap = pair_intersection(a, b).expect("all rectangles contain the origin");
            if covered(points, &cap) {
                continue;
            }
            let mut placed = false;
            for _ in 0..64 {
                let p = sample_point_in(rng, &cap);
                if p != (0, 0) && points.insert(p) {
                    placed = true;
                    break;
                }
            }
            if !placed {
                for x in cap.x_lo()..=cap.x_hi() {
                    for y in cap.y_lo()..=cap.y_hi() {
                        if (x, y) != (0, 0) && points.insert((x, y)) {
                            placed = true;
                            break;
                        }
                    }
                    if placed {
                        break;
                    }
                }
            }
            if !placed {
                return false;
            }
        }
    }
    true
}

/// `n_clusters` far-apart groups, each internally pairwise trace
/// intersecting. Among any `n_clusters + 1` members two land in one group,
/// so the family has the (p, 2) trace property for p = n_clusters + 1.
pub fn gen_clusters(
    seed: u64,
    n_clusters: usize,
    rects_per_cluster: usize,
    points_per_cluster: usize,
    span: Coord,
) -> Result<Generated, GenError> {
    require(n_clusters >= 1, "n_clusters must be positive")?;
    require(rects_per_cluster >= 1, "rects_per_cluster must be positive")?;
    require(points_per_cluster >= 1, "points_per_cluster must be positive")?;
    require(span >= 1, "span must be positive")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = GenStats::default();
    let mut all_points: Vec<Point<Coord>> = Vec::new();
    let mut all_rects: Vec<Rect<Coord>> = Vec::new();
    for c in 0..n_clusters as Coord {
        // Gap of 2 between cluster windows keeps them strictly disjoint.
        let dx = c * (span + 2);
        let sub = gen_cluster_window(&mut rng, rects_per_cluster, points_per_cluster, span, &mut stats)?;
        all_points.extend(sub.points().iter().map(|p| Point::new(p.x + dx, p.y)));
        all_rects.extend(sub.rects().iter().map(|r| {
            Rect::new(r.x_lo() + dx, r.x_hi() + dx, r.y_lo(), r.y_hi()).expect("translation")
        }));
    }
    let instance = Instance::new(all_points, all_rects);
    let p = n_clusters + 1;
    let tf = trace::trace(&instance);
    assert!(tf.member_sets().iter().all(|s| !s.is_empty()), "cluster member lost its trace");
    assert!(
        matches!(has_pq_property(&tf, p, 2).expect("valid parameters"), PqOutcome::Holds),
        "cluster family misses its ({p}, 2) property"
    );
    Ok(Generated { instance, stats, tau: None, origin: None })
}

/// One cluster drawn like `gen_random_pairwise`, sharing the caller's rng
/// stream and stats.
fn gen_cluster_window(
    rng: &mut ChaCha8Rng,
    n_rects: usize,
    n_points: usize,
    span: Coord,
    stats: &mut GenStats,
) -> Result<Instance<Coord>, GenError> {
    loop {
        stats.attempts += 1;
        if stats.attempts > REJECTION_BUDGET {
            return Err(GenError::RejectionBudget { attempts: stats.attempts });
        }
        let Some(rects) = sample_pairwise_rects(rng, n_rects, span) else {
            stats.rejections += 1;
            continue;
        };
        let mut points: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        for _ in 0..n_points {
            points.insert((rng.gen_range(0..=span), rng.gen_range(0..=span)));
        }
        if repair_pairwise(rng, &mut points, &rects, n_points).is_none() {
            stats.rejections += 1;
            continue;
        }
        let inst = to_instance(points, rects);
        confirm_pairwise_trace(&inst);
        return Ok(inst);
    }
}

/// Pairwise-intersecting rectangles whose every subfamily of size at most 4
/// has a common trace point. Repairs walk subfamilies largest first, since
/// a point planted for a 4-subfamily settles its pairs and triples too.
pub fn gen_helly_hypothesis(
    seed: u64,
    n_rects: usize,
    n_points: usize,
    span: Coord,
) -> Result<Generated, GenError> {
    require(n_rects >= 1, "n_rects must be positive")?;
    require(n_points >= 1, "n_points must be positive")?;
    require(span >= 1, "span must be positive")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = GenStats::default();
    loop {
        stats.attempts += 1;
        if stats.attempts > REJECTION_BUDGET {
            return Err(GenError::RejectionBudget { attempts: stats.attempts });
        }
        let Some(rects) = sample_pairwise_rects(&mut rng, n_rects, span) else {
            stats.rejections += 1;
            continue;
        };
        let mut points: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        for _ in 0..n_points {
            points.insert((rng.gen_range(0..=span), rng.gen_range(0..=span)));
        }
        if !repair_subfamilies(&mut rng, &mut points, &rects, n_points) {
            stats.rejections += 1;
            continue;
        }
        let inst = to_instance(points, rects);
        let tf = trace::trace(&inst);
        for size in 1..=4.min(inst.n_rects()) {
            for sub in subsets_of_size(inst.n_rects(), size) {
                assert!(
                    trace::subfamily_trace_intersecting(&tf, &sub).expect("valid indices"),
                    "subfamily {sub:?} has an empty common trace after repair"
                );
            }
        }
        return Ok(Generated { instance: inst, stats, tau: None, origin: None });
    }
}

fn repair_subfamilies(
    rng: &mut ChaCha8Rng,
    points: &mut BTreeSet<(Coord, Coord)>,
    rects: &[Rect<Coord>],
    budget: usize,
) -> bool {
    for size in (1..=4.min(rects.len())).rev() {
        for sub in subsets_of_size(rects.len(), size) {
            // Pairwise-intersecting boxes meet along every axis separately,
            // so each subfamily has a nonempty common rectangle.
            let mut cap = rects[sub[0]];
            for &i in &sub[1..] {
                cap = match pair_intersection(&cap, &rects[i]) {
                    Some(c) => c,
                    None => return false,
                };
            }
            if covered(points, &cap) {
                continue;
            }
            if points.len() >= budget {
                return false;
            }
            insert_point_in(rng, points, &cap);
            if !covered(points, &cap) {
                return false;
            }
        }
    }
    true
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A random d-interval family: every member keeps at least one component,
/// each present component is a nonempty range on its line.
pub fn gen_dinterval(
    seed: u64,
    d: usize,
    n_members: usize,
    max_line: usize,
) -> Result<DIntervalFamily, GenError> {
    require(d >= 1, "d must be positive")?;
    require(n_members >= 1, "n_members must be positive")?;
    require(max_line >= 1, "max_line must be positive")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let line_sizes: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=max_line)).collect();
    let members: Vec<Vec<Option<(usize, usize)>>> = (0..n_members)
        .map(|_| {
            let mut m: Vec<Option<(usize, usize)>> = (0..d)
                .map(|line| {
                    if rng.gen_bool(0.6) {
                        let lo = rng.gen_range(0..line_sizes[line]);
                        let hi = rng.gen_range(lo..line_sizes[line]);
                        Some((lo, hi))
                    } else {
                        None
                    }
                })
                .collect();
            if m.iter().all(Option::is_none) {
                let line = rng.gen_range(0..d);
                let lo = rng.gen_range(0..line_sizes[line]);
                let hi = rng.gen_range(lo..line_sizes[line]);
                m[line] = Some((lo, hi));
            }
            m
        })
        .collect();
    Ok(DIntervalFamily::new(d, line_sizes, members).expect("construction satisfies the family invariants"))
}

/// A random set system with a nonempty universe and nonempty sets.
pub fn gen_set_system(seed: u64, max_universe: usize, max_sets: usize) -> SetSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = rng.gen_range(1..=max_universe.max(1));
    let n_sets = rng.gen_range(1..=max_sets.max(1));
    let sets = (0..n_sets)
        .map(|_| {
            let size = rng.gen_range(1..=universe);
            let mut s = BTreeSet::new();
            while s.len() < size {
                s.insert(rng.gen_range(0..universe));
            }
            s.into_iter().collect()
        })
        .collect();
    SetSystem::new(universe, sets).expect("elements drawn inside the universe")
}

#[cfg(test)]
mod tests {
    use super::*;
    use pierce_lab::solver::SolverConfig;

    #[test]
    fn random_pairwise_is_deterministic_and_valid() {
        let a = gen_random_pairwise(1, 3, 10, 20).unwrap();
        let b = gen_random_pairwise(1, 3, 10, 20).unwrap();
        assert_eq!(a.instance.points(), b.instance.points());
        assert_eq!(a.instance.rects(), b.instance.rects());
        assert!(a.instance.n_points() <= 10);
        assert_eq!(a.instance.n_rects(), 3);
    }

    #[test]
    fn random_pairwise_single_rect_always_accepted() {
        for seed in 0..20 {
            let g = gen_random_pairwise(seed, 1, 1, 5).unwrap();
            assert_eq!(g.stats.rejections, 0);
            assert_eq!(g.instance.n_rects(), 1);
        }
    }

    #[test]
    fn distinct_seeds_give_distinct_instances() {
        let a = gen_random_pairwise(10, 4, 12, 50).unwrap();
        let b = gen_random_pairwise(11, 4, 12, 50).unwrap();
        assert_ne!(a.instance.rects(), b.instance.rects());
    }

    #[test]
    fn cycle_matches_frozen_piercing_numbers() {
        for (k, want) in [(3, 2), (4, 2), (5, 2), (6, 3), (7, 3), (8, 3), (12, 3)] {
            let g = gen_cycle(k).unwrap();
            assert_eq!(g.instance.n_rects(), k);
            assert_eq!(g.tau, Some(want), "k = {k}");
        }
        assert!(gen_cycle(2).is_err());
    }

    #[test]
    fn cycle_three_is_the_triangle() {
        let g = gen_cycle(3).unwrap();
        let t = fixtures::triangle();
        assert_eq!(g.instance.points(), t.points());
        assert_eq!(g.instance.rects(), t.rects());
    }

    #[test]
    fn quadrant_instances_satisfy_their_claim() {
        for seed in 0..10 {
            let g = gen_quadrant(seed, 5, 20, 30).unwrap();
            let origin = g.origin.unwrap();
            assert_eq!(origin, Point::new(0, 0));
            assert!(matches!(
                check_claim_quadrants(&g.instance, origin),
                ClaimOutcome::Holds
            ));
            assert!(!g.instance.points().contains(&Point::new(0, 0)));
        }
    }

    #[test]
    fn clusters_have_the_advertised_pq_property() {
        let g = gen_clusters(7, 2, 3, 8, 25).unwrap();
        let tf = trace::trace(&g.instance);
        assert!(matches!(has_pq_property(&tf, 3, 2).unwrap(), PqOutcome::Holds));
        // Two separated clusters: somewhere a pair shares no trace point.
        assert!(matches!(
            has_pq_property(&tf, 2, 2).unwrap(),
            PqOutcome::Violated { .. }
        ));
    }

    #[test]
    fn helly_hypothesis_covers_every_small_subfamily() {
        let g = gen_helly_hypothesis(3, 6, 30, 40).unwrap();
        let tf = trace::trace(&g.instance);
        for sub in subsets_of_size(6, 4) {
            assert!(trace::subfamily_trace_intersecting(&tf, &sub).unwrap());
        }
    }

    #[test]
    fn dinterval_families_are_valid_and_deterministic() {
        let a = gen_dinterval(5, 3, 10, 12).unwrap();
        let b = gen_dinterval(5, 3, 10, 12).unwrap();
        assert_eq!(a.members(), b.members());
        assert_eq!(a.d(), 3);
        assert!(a.line_sizes().iter().all(|&s| (1..=12).contains(&s)));
    }

    #[test]
    fn set_systems_solve_identically_under_both_solvers() {
        for seed in 0..25 {
            let ss = gen_set_system(seed, 12, 8);
            let exact = min_hitting_set(&ss).unwrap();
            let oracle = oracle_min_hitting_set(&ss).unwrap();
            assert_eq!(exact.value, oracle.value, "seed {seed}");
        }
    }

    #[test]
    fn generated_instances_feed_the_pipeline() {
        let cfg = SolverConfig::default();
        for seed in 0..10 {
            let g = gen_random_pairwise(seed, 5, 15, 40).unwrap();
            let report = pierce_lab::reduction::pierce_8(&g.instance, &cfg).unwrap();
            assert!(report.piercing.len() <= 8);
        }
    }
}
