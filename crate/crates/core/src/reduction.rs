//! Constructive piercing pipelines: boundary guards, quadrant chains, the
//! rectangle-to-4-interval reduction, and the composed constructions with
//! certified size bounds (8, 12(p-1), 4(p-1), and the clustered composite).
//!
//! Every pipeline checks its hypotheses up front and reports violations with
//! a witness. Bound checks run on the exact optimum of the reduced system;
//! a bound failure is returned as a theorem violation carrying the instance,
//! since it would falsify the result the construction is based on.

use crate::dinterval::{self, DIntervalFamily};
use crate::geom::{
    classify_quadrant, common_intersection, rects_intersect, CommonIntersection, Point, Quadrant,
    Rect,
};
use crate::solver::{self, SolveError, SolverConfig};
use crate::trace::{self, has_pq_property, Instance, PqOutcome, TraceFamily};
use crate::CoordNum;

/// A point of `P` together with its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PPoint<C> {
    pub index: usize,
    pub point: Point<C>,
}

/// Up to four extremal points of `P` in the axis strips around the common
/// intersection `[a,b] x [c,d]`:
/// `s1`: largest x in `(-inf, a) x [c, d]`, `s2`: smallest x in
/// `(b, +inf) x [c, d]`, `s3`: largest y in `[a, b] x (-inf, c)`,
/// `s4`: smallest y in `[a, b] x (d, +inf)`. Ties break to the lowest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GuardSet<C> {
    pub s1: Option<PPoint<C>>,
    pub s2: Option<PPoint<C>>,
    pub s3: Option<PPoint<C>>,
    pub s4: Option<PPoint<C>>,
}

impl<C: CoordNum> GuardSet<C> {
    pub fn points(&self) -> Vec<PPoint<C>> {
        [self.s1, self.s2, self.s3, self.s4].into_iter().flatten().collect()
    }

    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        self.points().is_empty()
    }
}

/// Hypothesis failures detected before a pipeline runs, each with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisViolation {
    /// Rectangle contains no point of `P`.
    EmptyTrace { rect: usize },
    /// Two rectangles whose intersection contains no point of `P`.
    PairWithoutTracePoint { i: usize, j: usize },
    /// Two rectangles that do not even intersect geometrically.
    DisjointRects { i: usize, j: usize },
    /// Rectangle missing the opposite-quadrant point pair.
    QuadrantCondition { rect: usize },
    /// p members among which no two share a point of `P`.
    Pq { p: usize, witness: Vec<usize> },
}

impl std::fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HypothesisViolation::EmptyTrace { rect } => {
                write!(f, "rectangle {rect} contains no point of P")
            }
            HypothesisViolation::PairWithoutTracePoint { i, j } => {
                write!(f, "rectangles {i} and {j} share no point of P")
            }
            HypothesisViolation::DisjointRects { i, j } => {
                write!(f, "rectangles {i} and {j} are disjoint")
            }
            HypothesisViolation::QuadrantCondition { rect } => {
                write!(f, "rectangle {rect} has no opposite-quadrant point pair")
            }
            HypothesisViolation::Pq { p, witness } => {
                write!(f, "({p},2)-property fails on members {witness:?}")
            }
        }
    }
}

/// A bound failure: the exact optimum of the reduced system exceeded the
/// certified bound. Carries the instance for dumping; one of these would be
/// a publishable counterexample, so they are never expected to occur.
#[derive(Debug, Clone)]
pub struct TheoremViolation<C> {
    pub instance: Instance<C>,
    pub bound: usize,
    pub tau: usize,
    pub detail: String,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReductionError<C> {
    #[error("family not pairwise intersecting")]
    NotPairwiseIntersecting,
    #[error("hypothesis violation: {0}")]
    Hypothesis(HypothesisViolation),
    #[error("origin not contained in rectangle")]
    OriginNotContained,
    #[error("theorem violation: {detail} (tau {tau} exceeds bound {bound})", detail = .0.detail, tau = .0.tau, bound = .0.bound)]
    TheoremViolation(Box<TheoremViolation<C>>),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

/// Select the four extremal strip guards around the common intersection.
pub fn select_guards<C: CoordNum>(inst: &Instance<C>) -> Result<GuardSet<C>, ReductionError<C>> {
    let CommonIntersection::NonEmpty(core) = common_intersection(inst.rects()) else {
        return Err(ReductionError::NotPairwiseIntersecting);
    };
    let (a, b, c, d) = (core.x_lo(), core.x_hi(), core.y_lo(), core.y_hi());
    let mut s1: Option<PPoint<C>> = None;
    let mut s2: Option<PPoint<C>> = None;
    let mut s3: Option<PPoint<C>> = None;
    let mut s4: Option<PPoint<C>> = None;
    for (index, &point) in inst.points().iter().enumerate() {
        let cand = PPoint { index, point };
        if point.x < a && c <= point.y && point.y <= d {
            // strictly better only: ties keep the earliest index
            if s1.is_none_or(|g| point.x > g.point.x) {
                s1 = Some(cand);
            }
        }
        if point.x > b && c <= point.y && point.y <= d {
            if s2.is_none_or(|g| point.x < g.point.x) {
                s2 = Some(cand);
            }
        }
        if point.y < c && a <= point.x && point.x <= b {
            if s3.is_none_or(|g| point.y > g.point.y) {
                s3 = Some(cand);
            }
        }
        if point.y > d && a <= point.x && point.x <= b {
            if s4.is_none_or(|g| point.y < g.point.y) {
                s4 = Some(cand);
            }
        }
    }
    Ok(GuardSet { s1, s2, s3, s4 })
}

/// The sub-family of rectangles avoiding every guard point, with the
/// original rectangle indices preserved.
#[derive(Debug, Clone)]
pub struct ResidualFamily<C> {
    pub instance: Instance<C>,
    pub original_rect_indices: Vec<usize>,
}

pub fn residual_family<C: CoordNum>(
    inst: &Instance<C>,
    guards: &GuardSet<C>,
) -> ResidualFamily<C> {
    let guard_points = guards.points();
    let mut rects = Vec::new();
    let mut original_rect_indices = Vec::new();
    for (i, r) in inst.rects().iter().enumerate() {
        if !guard_points.iter().any(|g| r.contains(g.point)) {
            rects.push(*r);
            original_rect_indices.push(i);
        }
    }
    ResidualFamily {
        instance: Instance::new(inst.points().to_vec(), rects),
        original_rect_indices,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimOutcome {
    Holds,
    Violated { rect: usize },
}

/// Does every rectangle contain points of `P` in both closed quadrants 1
/// and 3, or in both closed quadrants 2 and 4, relative to `origin`?
pub fn check_claim_quadrants<C: CoordNum>(inst: &Instance<C>, origin: Point<C>) -> ClaimOutcome {
    for (i, r) in inst.rects().iter().enumerate() {
        let mut seen = [false; 4];
        for &p in inst.points() {
            if r.contains(p) {
                for q in Quadrant::ALL {
                    if q.contains_closed(p, origin) {
                        seen[q.index()] = true;
                    }
                }
            }
        }
        if !((seen[0] && seen[2]) || (seen[1] && seen[3])) {
            return ClaimOutcome::Violated { rect: i };
        }
    }
    ClaimOutcome::Holds
}

/// One point on a chain, with its index into `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainPoint<C> {
    pub p_index: usize,
    pub point: Point<C>,
}

/// Four staircase chains of Pareto-minimal points, one per quadrant label.
///
/// Within each quadrant the order `p1 <= p2 iff |dx1| <= |dx2| and
/// |dy1| <= |dy2|` (offsets from the origin) is a partial order; the chain
/// keeps the minimal points sorted by increasing |dx|. Because both points
/// lie on the same side of the origin in each axis, all comparisons are raw
/// coordinate comparisons.
#[derive(Debug, Clone)]
pub struct ChainSystem<C> {
    origin: Point<C>,
    chains: [Vec<ChainPoint<C>>; 4],
}

/// Compare |p.x - origin.x| for two points on the same x-side of origin.
fn cmp_abs_x<C: CoordNum>(a: Point<C>, b: Point<C>, q: Quadrant) -> std::cmp::Ordering {
    match q {
        Quadrant::Q1 | Quadrant::Q4 => a.x.cmp(&b.x),
        Quadrant::Q2 | Quadrant::Q3 => b.x.cmp(&a.x),
    }
}

fn cmp_abs_y<C: CoordNum>(a: Point<C>, b: Point<C>, q: Quadrant) -> std::cmp::Ordering {
    match q {
        Quadrant::Q1 | Quadrant::Q2 => a.y.cmp(&b.y),
        Quadrant::Q3 | Quadrant::Q4 => b.y.cmp(&a.y),
    }
}

impl<C: CoordNum> ChainSystem<C> {
    pub fn origin(&self) -> Point<C> {
        self.origin
    }

    pub fn chain(&self, q: Quadrant) -> &[ChainPoint<C>] {
        &self.chains[q.index()]
    }

    pub fn chain_sizes(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|i| self.chains[i].len())
    }
}

/// Label every point, then keep the Pareto-minimal points per quadrant,
/// sorted by increasing |dx| (ties by |dy| cannot survive the filter).
pub fn build_chains<C: CoordNum>(points: &[Point<C>], origin: Point<C>) -> ChainSystem<C> {
    let mut buckets: [Vec<ChainPoint<C>>; 4] = Default::default();
    for (p_index, &point) in points.iter().enumerate() {
        let q = classify_quadrant(point, origin);
        buckets[q.index()].push(ChainPoint { p_index, point });
    }
    for (qi, bucket) in buckets.iter_mut().enumerate() {
        let q = Quadrant::ALL[qi];
        bucket.sort_by(|a, b| {
            cmp_abs_x(a.point, b.point, q)
                .then(cmp_abs_y(a.point, b.point, q))
                .then(a.p_index.cmp(&b.p_index))
        });
        // Staircase sweep: after the sort, a point is minimal iff its |dy|
        // is strictly below everything kept so far.
        let mut kept: Vec<ChainPoint<C>> = Vec::new();
        for cp in bucket.iter() {
            if kept
                .last()
                .is_none_or(|m| cmp_abs_y(cp.point, m.point, q) == std::cmp::Ordering::Less)
            {
                kept.push(*cp);
            }
        }
        *bucket = kept;
    }
    ChainSystem { origin, chains: buckets }
}

/// Per-quadrant contiguous chain index ranges covered by one rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourInterval {
    pub ranges: [Option<(usize, usize)>; 4],
}

impl FourInterval {
    pub fn is_empty(&self) -> bool {
        self.ranges.iter().all(Option::is_none)
    }
}

/// Restrict a rectangle to the chains. Requires the rectangle to contain
/// the chain origin; that is what makes each restriction contiguous.
pub fn rect_to_4interval<C: CoordNum>(
    rect: &Rect<C>,
    cs: &ChainSystem<C>,
) -> Result<FourInterval, ReductionError<C>> {
    if !rect.contains(cs.origin()) {
        return Err(ReductionError::OriginNotContained);
    }
    let mut ranges = [None; 4];
    for q in Quadrant::ALL {
        let chain = cs.chain(q);
        let lo = chain.iter().position(|cp| rect.contains(cp.point));
        if let Some(lo) = lo {
            let hi = chain.iter().rposition(|cp| rect.contains(cp.point)).unwrap();
            for cp in &chain[lo..=hi] {
                assert!(rect.contains(cp.point), "chain restriction not contiguous");
            }
            ranges[q.index()] = Some((lo, hi));
        }
    }
    Ok(FourInterval { ranges })
}

/// How a piercing set was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PierceRoute {
    /// A single point of `P` lies in the common intersection.
    ShortCircuit,
    /// Guards plus the 4-interval reduction of the residual family.
    Guarded { guards: usize },
    /// Direct 4-interval reduction of the whole family.
    Direct,
    /// Partition by a geometric piercing, one direct reduction per class.
    Composite { classes: usize, geometric_tau: usize },
}

/// A piercing set `S` (a subset of `P`) together with the certified bound
/// and the exact quantities measured along the way.
#[derive(Debug, Clone)]
pub struct PierceReport<C> {
    pub piercing: Vec<PPoint<C>>,
    pub bound: usize,
    pub route: PierceRoute,
    /// Exact piercing number of the reduced 4-interval system, when one was
    /// built.
    pub interval_tau: Option<usize>,
    /// Exact packing numbers of the reduced system and of the trace family
    /// it came from; the first never exceeds the second.
    pub nu_interval: Option<usize>,
    pub nu_trace: Option<usize>,
    /// Total branch and bound nodes across all exact solves.
    pub solver_nodes: u64,
}

struct ReductionRun<C> {
    family: DIntervalFamily,
    lifted: Vec<PPoint<C>>,
    interval_tau: usize,
    nu_interval: usize,
    nu_trace: usize,
    nodes: u64,
}

/// Build chains over `P`, restrict every rectangle to a 4-interval, solve
/// the restriction exactly, and lift the certificate back into `P`.
///
/// Asserts the reduction invariants on every run: membership faithfulness
/// (a chain point is in a member's ranges iff the rectangle contains it)
/// and the packing transfer `nu(intervals) <= nu(traces)`.
fn reduce_and_solve<C: CoordNum>(
    inst: &Instance<C>,
    tf: &TraceFamily,
    origin: Point<C>,
    cfg: &SolverConfig,
) -> Result<ReductionRun<C>, ReductionError<C>> {
    let cs = build_chains(inst.points(), origin);
    let mut members = Vec::with_capacity(inst.n_rects());
    for rect in inst.rects() {
        let fi = rect_to_4interval(rect, &cs)?;
        assert!(
            !fi.is_empty(),
            "a rectangle with a nonempty trace always contains a chain point"
        );
        members.push(fi.ranges.to_vec());
    }
    // Membership faithfulness, checked exhaustively.
    for (rect, member) in inst.rects().iter().zip(&members) {
        for q in Quadrant::ALL {
            for (i, cp) in cs.chain(q).iter().enumerate() {
                let in_range =
                    member[q.index()].is_some_and(|(lo, hi)| lo <= i && i <= hi);
                assert_eq!(in_range, rect.contains(cp.point), "4-interval not faithful");
            }
        }
    }
    let fam = DIntervalFamily::new(4, cs.chain_sizes().to_vec(), members)
        .expect("ranges come from chain positions");
    let tau = dinterval::dinterval_tau(&fam, cfg)?;
    let nu_interval = dinterval::dinterval_nu(&fam, cfg)?;
    let nu_trace = solver::max_packing_with(&tf.to_set_system(), cfg)?;
    assert!(
        nu_interval.value <= nu_trace.value,
        "packing transfer violated: nu(intervals) > nu(traces)"
    );
    let offsets = fam.line_offsets();
    let mut lifted: Vec<PPoint<C>> = tau
        .certificate
        .iter()
        .map(|&e| {
            let line = match offsets.binary_search(&e) {
                Ok(l) => l,
                Err(l) => l - 1,
            };
            let cp = cs.chain(Quadrant::ALL[line])[e - offsets[line]];
            PPoint { index: cp.p_index, point: cp.point }
        })
        .collect();
    lifted.sort_by_key(|p| p.index);
    lifted.dedup_by_key(|p| p.index);
    Ok(ReductionRun {
        family: fam,
        lifted,
        interval_tau: tau.value,
        nu_interval: nu_interval.value,
        nu_trace: nu_trace.value,
        nodes: tau.stats.nodes + nu_interval.stats.nodes + nu_trace.stats.nodes,
    })
}

fn assert_pierces<C: CoordNum>(inst: &Instance<C>, piercing: &[PPoint<C>]) {
    for (i, r) in inst.rects().iter().enumerate() {
        assert!(
            piercing.iter().any(|p| r.contains(p.point)),
            "piercing set misses rectangle {i}"
        );
    }
}

fn merge_piercing<C: CoordNum>(mut pts: Vec<PPoint<C>>) -> Vec<PPoint<C>> {
    pts.sort_by_key(|p| p.index);
    pts.dedup_by_key(|p| p.index);
    pts
}

/// Check that every pairwise intersection (including each rectangle itself)
/// contains a point of `P`.
fn check_pairwise_trace<C: CoordNum>(tf: &TraceFamily) -> Result<(), ReductionError<C>> {
    for (i, s) in tf.member_sets().iter().enumerate() {
        if s.is_empty() {
            return Err(ReductionError::Hypothesis(HypothesisViolation::EmptyTrace {
                rect: i,
            }));
        }
    }
    for i in 0..tf.n_members() {
        for j in i + 1..tf.n_members() {
            let si = &tf.member_sets()[i];
            let sj = &tf.member_sets()[j];
            if !si.iter().any(|e| sj.binary_search(e).is_ok()) {
                return Err(ReductionError::Hypothesis(
                    HypothesisViolation::PairWithoutTracePoint { i, j },
                ));
            }
        }
    }
    Ok(())
}

/// Pierce a family in which every pairwise rectangle intersection contains a
/// point of `P`, with at most 8 points of `P`.
///
/// Route: if some point of `P` lies in the common intersection it alone
/// suffices; otherwise up to four strip guards are taken, the rectangles
/// avoiding them are restricted to the quadrant chains through the common
/// intersection's low corner, and an exact solve of that 4-interval system
/// (whose optimum never exceeds 4) completes the set.
pub fn pierce_8<C: CoordNum>(
    inst: &Instance<C>,
    cfg: &SolverConfig,
) -> Result<PierceReport<C>, ReductionError<C>> {
    if inst.n_rects() == 0 {
        return Ok(PierceReport {
            piercing: Vec::new(),
            bound: 8,
            route: PierceRoute::ShortCircuit,
            interval_tau: None,
            nu_interval: None,
            nu_trace: None,
            solver_nodes: 0,
        });
    }
    let tf = trace::trace(inst);
    check_pairwise_trace(&tf)?;
    let CommonIntersection::NonEmpty(core) = common_intersection(inst.rects()) else {
        // Unreachable once the pairwise trace check passed.
        return Err(ReductionError::NotPairwiseIntersecting);
    };
    if let Some((index, &point)) =
        inst.points().iter().enumerate().find(|(_, p)| core.contains(**p))
    {
        let piercing = vec![PPoint { index, point }];
        assert_pierces(inst, &piercing);
        return Ok(PierceReport {
            piercing,
            bound: 8,
            route: PierceRoute::ShortCircuit,
            interval_tau: None,
            nu_interval: None,
            nu_trace: None,
            solver_nodes: 0,
        });
    }
    let guards = select_guards(inst)?;
    let residual = residual_family(inst, &guards);
    let origin = core.lo_corner();
    if let ClaimOutcome::Violated { rect } = check_claim_quadrants(&residual.instance, origin) {
        let original = residual.original_rect_indices[rect];
        return Err(ReductionError::TheoremViolation(Box::new(TheoremViolation {
            instance: inst.clone(),
            bound: 8,
            tau: 0,
            detail: format!(
                "residual rectangle {original} misses the opposite-quadrant pair guaranteed \
                 under the pairwise hypothesis"
            ),
        })));
    }
    let residual_tf = trace::trace(&residual.instance);
    let run = reduce_and_solve(&residual.instance, &residual_tf, origin, cfg)?;
    if run.interval_tau > 4 {
        // An optimum above 4 forces a disjoint pair in the restriction,
        // which contradicts the pairwise hypothesis checked above.
        let pair = crate::verify::find_disjoint_pair_dintervals(&run.family);
        return Err(ReductionError::TheoremViolation(Box::new(TheoremViolation {
            instance: inst.clone(),
            bound: 4,
            tau: run.interval_tau,
            detail: format!(
                "4-interval restriction of the residual family needs more than 4 points; \
                 disjoint member pair: {pair:?}"
            ),
        })));
    }
    let mut piercing = guards.points();
    piercing.extend_from_slice(&run.lifted);
    let piercing = merge_piercing(piercing);
    assert!(piercing.len() <= 8, "guard plus lift never exceeds 8 points");
    assert_pierces(inst, &piercing);
    Ok(PierceReport {
        piercing,
        bound: 8,
        route: PierceRoute::Guarded { guards: guards.len() },
        interval_tau: Some(run.interval_tau),
        nu_interval: Some(run.nu_interval),
        nu_trace: Some(run.nu_trace),
        solver_nodes: run.nodes,
    })
}

fn check_pairwise_rects<C: CoordNum>(rects: &[Rect<C>]) -> Result<(), ReductionError<C>> {
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if !rects_intersect(&rects[i], &rects[j]) {
                return Err(ReductionError::Hypothesis(HypothesisViolation::DisjointRects {
                    i,
                    j,
                }));
            }
        }
    }
    Ok(())
}

fn check_pq<C: CoordNum>(tf: &TraceFamily, p: usize) -> Result<(), ReductionError<C>> {
    match has_pq_property(tf, p, 2) {
        Ok(PqOutcome::Holds) => Ok(()),
        Ok(PqOutcome::Violated { witness }) => {
            Err(ReductionError::Hypothesis(HypothesisViolation::Pq { p, witness }))
        }
        Err(trace::TraceError::Solver(e)) => Err(ReductionError::Solver(e)),
        Err(e) => Err(ReductionError::InvalidParameters(e.to_string())),
    }
}

/// Pierce a pairwise-intersecting family whose traces are all nonempty and
/// satisfy the (p,2)-property, with at most 12(p-1) points of `P`.
pub fn pierce_pairwise_p<C: CoordNum>(
    inst: &Instance<C>,
    p: usize,
    cfg: &SolverConfig,
) -> Result<PierceReport<C>, ReductionError<C>> {
    if p < 2 {
        return Err(ReductionError::InvalidParameters(format!("require p >= 2, got p={p}")));
    }
    if inst.n_rects() == 0 {
        return Ok(PierceReport {
            piercing: Vec::new(),
            bound: 12 * (p - 1),
            route: PierceRoute::Direct,
            interval_tau: None,
            nu_interval: None,
            nu_trace: None,
            solver_nodes: 0,
        });
    }
    check_pairwise_rects(inst.rects())?;
    let CommonIntersection::NonEmpty(core) = common_intersection(inst.rects()) else {
        return Err(ReductionError::NotPairwiseIntersecting);
    };
    pierce_pairwise_p_at(inst, p, core.lo_corner(), cfg)
}

/// As [`pierce_pairwise_p`], with a caller-chosen origin that must lie in
/// every rectangle.
pub fn pierce_pairwise_p_at<C: CoordNum>(
    inst: &Instance<C>,
    p: usize,
    origin: Point<C>,
    cfg: &SolverConfig,
) -> Result<PierceReport<C>, ReductionError<C>> {
    if p < 2 {
        return Err(ReductionError::InvalidParameters(format!("require p >= 2, got p={p}")));
    }
    if inst.rects().iter().any(|r| !r.contains(origin)) {
        return Err(ReductionError::OriginNotContained);
    }
    check_pairwise_rects(inst.rects())?;
    let tf = trace::trace(inst);
    if let Some(&rect) = tf.empty_members().first() {
        return Err(ReductionError::Hypothesis(HypothesisViolation::EmptyTrace { rect }));
    }
    check_pq(&tf, p)?;
    let bound = 12 * (p - 1);
    let run = reduce_and_solve(inst, &tf, origin, cfg)?;
    if run.interval_tau > bound {
        return Err(ReductionError::TheoremViolation(Box::new(TheoremViolation {
            instance: inst.clone(),
            bound,
            tau: run.interval_tau,
            detail: format!("4-interval restriction needs more than 12(p-1) = {bound} points"),
        })));
    }
    assert_pierces(inst, &run.lifted);
    Ok(PierceReport {
        piercing: run.lifted,
        bound,
        route: PierceRoute::Direct,
        interval_tau: Some(run.interval_tau),
        nu_interval: Some(run.nu_interval),
        nu_trace: Some(run.nu_trace),
        solver_nodes: run.nodes,
    })
}

/// Pierce a pairwise-intersecting family in which every rectangle has trace
/// points in closed quadrants 1 and 3 or in 2 and 4 around `origin`, and
/// whose traces satisfy the (p,2)-property, with at most 4(p-1) points.
pub fn pierce_quadrant_condition_p<C: CoordNum>(
    inst: &Instance<C>,
    p: usize,
    origin: Point<C>,
    cfg: &SolverConfig,
) -> Result<PierceReport<C>, ReductionError<C>> {
    if p < 2 {
        return Err(ReductionError::InvalidParameters(format!("require p >= 2, got p={p}")));
    }
    check_pairwise_rects(inst.rects())?;
    if let ClaimOutcome::Violated { rect } = check_claim_quadrants(inst, origin) {
        return Err(ReductionError::Hypothesis(HypothesisViolation::QuadrantCondition {
            rect,
        }));
    }
    let tf = trace::trace(inst);
    check_pq(&tf, p)?;
    // The quadrant condition puts trace points on both sides of the origin
    // in each axis of every rectangle, so each rectangle contains it.
    assert!(inst.rects().iter().all(|r| r.contains(origin)));
    let bound = 4 * (p - 1);
    if inst.n_rects() == 0 {
        return Ok(PierceReport {
            piercing: Vec::new(),
            bound,
            route: PierceRoute::Direct,
            interval_tau: None,
            nu_interval: None,
            nu_trace: None,
            solver_nodes: 0,
        });
    }
    let run = reduce_and_solve(inst, &tf, origin, cfg)?;
    if run.interval_tau > bound {
        return Err(ReductionError::TheoremViolation(Box::new(TheoremViolation {
            instance: inst.clone(),
            bound,
            tau: run.interval_tau,
            detail: format!("4-interval restriction needs more than 4(p-1) = {bound} points"),
        })));
    }
    assert_pierces(inst, &run.lifted);
    Ok(PierceReport {
        piercing: run.lifted,
        bound,
        route: PierceRoute::Direct,
        interval_tau: Some(run.interval_tau),
        nu_interval: Some(run.nu_interval),
        nu_trace: Some(run.nu_trace),
        solver_nodes: run.nodes,
    })
}

/// Pierce a family with nonempty traces and the (p,2)-property, without any
/// pairwise-intersection assumption: pierce the rectangles geometrically,
/// partition them by assigned piercing point, and run the pairwise pipeline
/// inside each class. The union is bounded by
/// `(geometric tau) * 12(p-1)` points of `P`.
pub fn pierce_pq_composite<C: CoordNum>(
    inst: &Instance<C>,
    p: usize,
    cfg: &SolverConfig,
) -> Result<PierceReport<C>, ReductionError<C>> {
    if p < 2 {
        return Err(ReductionError::InvalidParameters(format!("require p >= 2, got p={p}")));
    }
    let tf = trace::trace(inst);
    if let Some(&rect) = tf.empty_members().first() {
        return Err(ReductionError::Hypothesis(HypothesisViolation::EmptyTrace { rect }));
    }
    check_pq(&tf, p)?;
    let geo = solver::geometric_pierce(inst.rects(), cfg)?;
    let mut nodes = geo.result.stats.nodes;
    // Assign each rectangle to the first geometric piercing point inside it.
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); geo.points.len()];
    for (ri, r) in inst.rects().iter().enumerate() {
        let g = geo
            .points
            .iter()
            .position(|&pt| r.contains(pt))
            .expect("geometric piercing was validated");
        classes[g].push(ri);
    }
    let mut piercing = Vec::new();
    let mut n_classes = 0;
    for (g, class) in classes.iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        n_classes += 1;
        let class_inst = Instance::new(
            inst.points().to_vec(),
            class.iter().map(|&ri| inst.rects()[ri]).collect(),
        );
        let report = pierce_pairwise_p_at(&class_inst, p, geo.points[g], cfg)?;
        nodes += report.solver_nodes;
        piercing.extend_from_slice(&report.piercing);
    }
    let piercing = merge_piercing(piercing);
    let bound = geo.result.value * 12 * (p - 1);
    assert!(piercing.len() <= bound || inst.n_rects() == 0);
    assert_pierces(inst, &piercing);
    Ok(PierceReport {
        piercing,
        bound,
        route: PierceRoute::Composite { classes: n_classes, geometric_tau: geo.result.value },
        interval_tau: None,
        nu_interval: None,
        nu_trace: None,
        solver_nodes: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::oracle_min_hitting_set;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn pt(x: i64, y: i64) -> Point<i64> {
        Point::new(x, y)
    }

    fn rect(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Rect<i64> {
        Rect::new(x_lo, x_hi, y_lo, y_hi).unwrap()
    }

    #[test]
    fn triangle_guards_are_the_three_points() {
        let inst = fixtures::triangle();
        let g = select_guards(&inst).unwrap();
        assert_eq!(g.s1.unwrap().point, pt(-3, 0));
        assert_eq!(g.s2.unwrap().point, pt(3, 0));
        assert_eq!(g.s3.unwrap().point, pt(0, -3));
        assert_eq!(g.s4, None);
    }

    #[test]
    fn guard_ties_keep_the_lowest_index() {
        let inst = Instance::new(
            vec![pt(-2, 0), pt(-2, 1)],
            vec![rect(0, 1, 0, 1)],
        );
        let g = select_guards(&inst).unwrap();
        assert_eq!(g.s1.unwrap().index, 0);
    }

    #[test]
    fn points_in_one_strip_give_one_guard() {
        let inst = Instance::new(vec![pt(-5, 0), pt(-4, 1)], vec![rect(0, 2, 0, 2)]);
        let g = select_guards(&inst).unwrap();
        assert_eq!(g.s1.unwrap().point, pt(-4, 1));
        assert!(g.s2.is_none() && g.s3.is_none() && g.s4.is_none());
    }

    #[test]
    fn guards_need_a_common_intersection() {
        let inst = Instance::new(vec![], vec![rect(0, 1, 0, 1), rect(5, 6, 0, 1)]);
        assert!(matches!(
            select_guards(&inst),
            Err(ReductionError::NotPairwiseIntersecting)
        ));
    }

    #[test]
    fn triangle_residual_is_empty() {
        let inst = fixtures::triangle();
        let g = select_guards(&inst).unwrap();
        let res = residual_family(&inst, &g);
        assert_eq!(res.instance.n_rects(), 0);
        assert!(res.original_rect_indices.is_empty());
    }

    #[test]
    fn no_guards_keep_every_rect() {
        let inst = fixtures::triangle();
        let res = residual_family(&inst, &GuardSet::default());
        assert_eq!(res.original_rect_indices, vec![0, 1, 2]);
    }

    #[test]
    fn claim_check_examples() {
        let holds = Instance::new(vec![pt(1, 1), pt(-1, -1)], vec![rect(-2, 2, -2, 2)]);
        assert_eq!(check_claim_quadrants(&holds, pt(0, 0)), ClaimOutcome::Holds);
        let violated = Instance::new(vec![pt(1, 1), pt(-1, 1)], vec![rect(-2, 2, -2, 2)]);
        assert_eq!(
            check_claim_quadrants(&violated, pt(0, 0)),
            ClaimOutcome::Violated { rect: 0 }
        );
        let empty = Instance::new(vec![pt(1, 1)], vec![]);
        assert_eq!(check_claim_quadrants(&empty, pt(0, 0)), ClaimOutcome::Holds);
    }

    #[test]
    fn axis_points_satisfy_the_closed_claim() {
        // Points on opposite axes lie in closed Q1+Q3 simultaneously.
        let inst = Instance::new(vec![pt(5, 0), pt(-5, 0)], vec![rect(-6, 6, -1, 1)]);
        assert_eq!(check_claim_quadrants(&inst, pt(0, 0)), ClaimOutcome::Holds);
    }

    #[test]
    fn chains_keep_exactly_the_minimal_points() {
        let points = vec![pt(1, 3), pt(2, 2), pt(3, 1), pt(2, 3)];
        let cs = build_chains(&points, pt(0, 0));
        let chain: Vec<_> = cs.chain(Quadrant::Q1).iter().map(|cp| cp.point).collect();
        assert_eq!(chain, vec![pt(1, 3), pt(2, 2), pt(3, 1)]);

        // Independent check: brute-force minimality by pairwise comparison.
        for (i, &a) in points.iter().enumerate() {
            let dominated = points.iter().enumerate().any(|(j, &b)| {
                j != i && b.x <= a.x && b.y <= a.y
            });
            assert_eq!(!dominated, chain.contains(&a), "{a:?}");
        }
    }

    #[test]
    fn chains_split_by_quadrant() {
        let inst = fixtures::triangle();
        let cs = build_chains(inst.points(), pt(-1, -1));
        assert_eq!(cs.chain_sizes(), [1, 1, 0, 1]);
        assert_eq!(cs.chain(Quadrant::Q1)[0].point, pt(3, 0));
        assert_eq!(cs.chain(Quadrant::Q2)[0].point, pt(-3, 0));
        assert_eq!(cs.chain(Quadrant::Q4)[0].point, pt(0, -3));
    }

    #[test]
    fn rect_restriction_on_triangle_chains() {
        let inst = fixtures::triangle();
        let cs = build_chains(inst.points(), pt(-1, -1));
        let fi = rect_to_4interval(&inst.rects()[0], &cs).unwrap();
        assert_eq!(fi.ranges, [None, Some((0, 0)), None, Some((0, 0))]);
        let all = rect_to_4interval(&rect(-10, 10, -10, 10), &cs).unwrap();
        assert_eq!(all.ranges, [Some((0, 0)), Some((0, 0)), None, Some((0, 0))]);
    }

    #[test]
    fn restriction_requires_the_origin() {
        let cs = build_chains(&[pt(5, 5)], pt(0, 0));
        assert!(matches!(
            rect_to_4interval(&rect(4, 6, 4, 6), &cs),
            Err(ReductionError::OriginNotContained)
        ));
    }

    #[test]
    fn pierce8_triangle_uses_the_guards() {
        let inst = fixtures::triangle();
        let report = pierce_8(&inst, &cfg()).unwrap();
        let indices: Vec<_> = report.piercing.iter().map(|p| p.index).collect();
        assert_eq!(indices, vec![0, 1, 2]);
        assert_eq!(report.route, PierceRoute::Guarded { guards: 3 });
        assert_eq!(report.interval_tau, Some(0));
        // The construction is sound but not minimal: exact tau is 2.
        let tau = oracle_min_hitting_set(&trace::trace(&inst).to_set_system()).unwrap();
        assert_eq!(tau.value, 2);
        assert!(report.piercing.len() <= 8);
    }

    #[test]
    fn pierce8_short_circuits_on_a_shared_point() {
        let inst = Instance::new(
            vec![pt(9, 9), pt(0, 0)],
            vec![rect(-1, 1, -1, 1), rect(0, 2, 0, 2)],
        );
        let report = pierce_8(&inst, &cfg()).unwrap();
        assert_eq!(report.route, PierceRoute::ShortCircuit);
        assert_eq!(report.piercing.len(), 1);
        assert_eq!(report.piercing[0].index, 1);
    }

    #[test]
    fn pierce8_empty_family() {
        let inst = Instance::new(vec![pt(0, 0)], vec![]);
        let report = pierce_8(&inst, &cfg()).unwrap();
        assert!(report.piercing.is_empty());
    }

    #[test]
    fn pierce8_rejects_a_pair_without_trace_point() {
        let inst = Instance::new(
            vec![pt(0, 0), pt(3, 3)],
            vec![rect(0, 2, 0, 2), rect(1, 3, 1, 3)],
        );
        match pierce_8(&inst, &cfg()) {
            Err(ReductionError::Hypothesis(HypothesisViolation::PairWithoutTracePoint {
                i,
                j,
            })) => assert_eq!((i, j), (0, 1)),
            other => panic!("expected pair violation, got {other:?}"),
        }
    }

    #[test]
    fn pierce8_rejects_an_empty_trace() {
        let inst = Instance::new(vec![pt(10, 10)], vec![rect(0, 1, 0, 1)]);
        assert!(matches!(
            pierce_8(&inst, &cfg()),
            Err(ReductionError::Hypothesis(HypothesisViolation::EmptyTrace { rect: 0 }))
        ));
    }

    #[test]
    fn pairwise_pipeline_on_the_triangle() {
        let inst = fixtures::triangle();
        let report = pierce_pairwise_p(&inst, 2, &cfg()).unwrap();
        assert_eq!(report.bound, 12);
        assert_eq!(report.interval_tau, Some(2));
        assert_eq!(report.piercing.len(), 2);
        assert!(report.nu_interval.unwrap() <= report.nu_trace.unwrap());
    }

    #[test]
    fn pairwise_pipeline_rejects_disjoint_rects() {
        let inst = Instance::new(
            vec![pt(0, 0), pt(5, 5)],
            vec![rect(-1, 1, -1, 1), rect(4, 6, 4, 6)],
        );
        assert!(matches!(
            pierce_pairwise_p(&inst, 2, &cfg()),
            Err(ReductionError::Hypothesis(HypothesisViolation::DisjointRects { i: 0, j: 1 }))
        ));
    }

    #[test]
    fn quadrant_pipeline_small_fixture() {
        let inst = Instance::new(
            vec![pt(1, 1), pt(-1, -1), pt(2, 2), pt(-2, -2)],
            vec![rect(-3, 3, -3, 3), rect(-2, 2, -2, 2)],
        );
        let report = pierce_quadrant_condition_p(&inst, 2, pt(0, 0), &cfg()).unwrap();
        assert_eq!(report.bound, 4);
        assert_eq!(report.piercing.len(), 1);
    }

    #[test]
    fn quadrant_pipeline_rejects_same_side_rect() {
        let inst = Instance::new(
            vec![pt(1, 1), pt(-1, 1), pt(0, -1)],
            vec![rect(-2, 2, 0, 2), rect(-2, 2, -2, 2)],
        );
        // Rect 0 only reaches Q1 and Q2 points.
        assert!(matches!(
            pierce_quadrant_condition_p(&inst, 2, pt(0, 0), &cfg()),
            Err(ReductionError::Hypothesis(HypothesisViolation::QuadrantCondition { rect: 0 }))
        ));
    }

    fn translated_triangle(dx: i64, dy: i64) -> (Vec<Point<i64>>, Vec<Rect<i64>>) {
        let base = fixtures::triangle();
        let points = base.points().iter().map(|p| pt(p.x + dx, p.y + dy)).collect();
        let rects = base
            .rects()
            .iter()
            .map(|r| rect(r.x_lo() + dx, r.x_hi() + dx, r.y_lo() + dy, r.y_hi() + dy))
            .collect();
        (points, rects)
    }

    #[test]
    fn composite_splits_far_clusters() {
        let (mut points, mut rects) = translated_triangle(0, 0);
        let (p2, r2) = translated_triangle(100, 0);
        points.extend(p2);
        rects.extend(r2);
        let inst = Instance::new(points, rects);
        let report = pierce_pq_composite(&inst, 3, &cfg()).unwrap();
        match report.route {
            PierceRoute::Composite { classes, geometric_tau } => {
                assert_eq!(classes, 2);
                assert_eq!(geometric_tau, 2);
            }
            ref other => panic!("unexpected route {other:?}"),
        }
        assert_eq!(report.bound, 2 * 12 * 2);
        assert!(report.piercing.len() <= 4);
    }

    #[test]
    fn composite_on_one_cluster_matches_pairwise() {
        let inst = fixtures::triangle();
        let composite = pierce_pq_composite(&inst, 2, &cfg()).unwrap();
        match composite.route {
            PierceRoute::Composite { classes, geometric_tau } => {
                assert_eq!(classes, 1);
                assert_eq!(geometric_tau, 1);
            }
            ref other => panic!("unexpected route {other:?}"),
        }
        assert_eq!(composite.piercing.len(), 2);
    }

    #[test]
    fn composite_rejects_pq_violation() {
        let (mut points, mut rects) = translated_triangle(0, 0);
        let (p2, r2) = translated_triangle(100, 0);
        points.extend(p2);
        rects.extend(r2);
        let inst = Instance::new(points, rects);
        // Two far clusters contain a disjoint pair, so (2,2) fails.
        assert!(matches!(
            pierce_pq_composite(&inst, 2, &cfg()),
            Err(ReductionError::Hypothesis(HypothesisViolation::Pq { p: 2, .. }))
        ));
    }
}
