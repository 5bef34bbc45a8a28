//! Exact minimum hitting set and maximum packing on finite set systems,
//! plus an endpoint-grid solver for piercing rectangles with arbitrary
//! points of the plane.
//!
//! Two independent routes exist for both quantities: a branch and bound
//! solver for desk-scale inputs and a brute-force oracle for tiny ones.
//! The oracles share no search logic with the solvers and exist to
//! cross-check them.

use std::time::{Duration, Instant};

use crate::bitset::BitSet;
use crate::geom::{Point, Rect};
use crate::CoordNum;

/// A family of subsets of `{0, .., universe_size - 1}`.
///
/// Sets are stored sorted and deduplicated. Members may repeat and may be
/// empty; an empty member makes the hitting set problem infeasible and is
/// reported by the solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetSystemError {
    #[error("index out of range: set {set} contains element {element} >= universe {universe}")]
    ElementOutOfRange { set: usize, element: usize, universe: usize },
}

impl SetSystem {
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<Self, SetSystemError> {
        let mut sets = sets;
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.last() {
                if e >= universe_size {
                    return Err(SetSystemError::ElementOutOfRange {
                        set: i,
                        element: e,
                        universe: universe_size,
                    });
                }
            }
        }
        Ok(SetSystem { universe_size, sets })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn empty_set_indices(&self) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Bit mask over member indices of the members intersecting member `i`
    /// (including `i` itself unless it is empty).
    fn conflict_masks(&self) -> Vec<BitSet> {
        let m = self.n_sets();
        let mut elem_owners: Vec<Vec<usize>> = vec![Vec::new(); self.universe_size];
        for (i, s) in self.sets.iter().enumerate() {
            for &e in s {
                elem_owners[e].push(i);
            }
        }
        let mut adj = vec![BitSet::new(m); m];
        for owners in &elem_owners {
            for &i in owners {
                for &j in owners {
                    adj[i].insert(j);
                }
            }
        }
        adj
    }

    /// For each element, the mask of members containing it.
    fn element_masks(&self) -> Vec<BitSet> {
        let mut hits = vec![BitSet::new(self.n_sets()); self.universe_size];
        for (i, s) in self.sets.iter().enumerate() {
            for &e in s {
                hits[e].insert(i);
            }
        }
        hits
    }
}

#[derive(Debug, Clone)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

/// An exact optimum together with a re-validated certificate.
///
/// For hitting set the certificate lists universe elements; for packing it
/// lists member indices.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: usize,
    pub certificate: Vec<usize>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: crate::DEFAULT_NODE_BUDGET }
    }
}

const ORACLE_UNIVERSE_LIMIT: usize = 24;
const ORACLE_SETS_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("unpierceable member: set {0} is empty")]
    UnpierceableMember(usize),
    #[error(
        "solver budget exhausted after {nodes} nodes (best bounds {lower_bound}..={upper_bound})"
    )]
    BudgetExhausted { nodes: u64, lower_bound: usize, upper_bound: usize, best: Vec<usize> },
    #[error("universe too large for the exhaustive oracle: {0} > {ORACLE_UNIVERSE_LIMIT}")]
    UniverseTooLarge(usize),
    #[error("too many sets for the exhaustive packing oracle: {0} > {ORACLE_SETS_LIMIT}")]
    TooManySets(usize),
}

fn is_hitting(ss: &SetSystem, cert: &[usize]) -> bool {
    let chosen = BitSet::from_indices(ss.universe_size().max(1), cert);
    ss.sets().iter().all(|s| s.iter().any(|&e| chosen.contains(e)))
}

fn is_packing(ss: &SetSystem, cert: &[usize]) -> bool {
    for (a, &i) in cert.iter().enumerate() {
        for &j in &cert[a + 1..] {
            let si = &ss.sets()[i];
            let sj = &ss.sets()[j];
            if si.iter().any(|e| sj.binary_search(e).is_ok()) {
                return false;
            }
        }
    }
    cert.iter().all(|&i| i < ss.n_sets())
}

struct HittingSearch<'a> {
    ss: &'a SetSystem,
    hits: Vec<BitSet>,
    adj: Vec<BitSet>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl HittingSearch<'_> {
    /// Greedy maximal pairwise-disjoint subfamily among the uncovered sets;
    /// its size is a valid lower bound on how many more elements are needed.
    fn packing_bound(&self, uncovered: &BitSet) -> usize {
        let mut blocked = BitSet::new(self.ss.n_sets());
        let mut count = 0;
        for i in uncovered.ones() {
            if !blocked.contains(i) {
                count += 1;
                blocked.or_with(&self.adj[i]);
            }
        }
        count
    }

    /// Greedy hitting set of the uncovered sets: repeatedly take the element
    /// covering the most remaining sets, lowest element on ties.
    fn greedy_hitting(&self, uncovered: &BitSet) -> Vec<usize> {
        let mut uncovered = uncovered.clone();
        let mut out = Vec::new();
        while !uncovered.is_empty() {
            let mut best_e = usize::MAX;
            let mut best_gain = 0usize;
            for i in uncovered.ones() {
                for &e in &self.ss.sets()[i] {
                    let mut gain = 0;
                    for j in self.hits[e].ones() {
                        if uncovered.contains(j) {
                            gain += 1;
                        }
                    }
                    if gain > best_gain || (gain == best_gain && e < best_e) {
                        best_gain = gain;
                        best_e = e;
                    }
                }
            }
            debug_assert!(best_gain > 0);
            out.push(best_e);
            uncovered.and_not(&self.hits[best_e]);
        }
        out.sort_unstable();
        out
    }

    fn run(&mut self, chosen: &mut Vec<usize>, uncovered: &BitSet) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + self.packing_bound(uncovered) >= self.best.len() {
            return;
        }
        // Branch on a smallest uncovered set, lowest index on ties.
        let mut branch = usize::MAX;
        for i in uncovered.ones() {
            if branch == usize::MAX || self.ss.sets()[i].len() < self.ss.sets()[branch].len() {
                branch = i;
            }
        }
        for &e in &self.ss.sets()[branch] {
            let mut remaining = uncovered.clone();
            remaining.and_not(&self.hits[e]);
            chosen.push(e);
            self.run(chosen, &remaining);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Exact minimum hitting set with the default node budget.
pub fn min_hitting_set(ss: &SetSystem) -> Result<SolveResult, SolveError> {
    min_hitting_set_with(ss, &SolverConfig::default())
}

/// Exact minimum hitting set; branch and bound with a greedy-packing lower
/// bound. Deterministic: ties break toward the lowest index.
pub fn min_hitting_set_with(
    ss: &SetSystem,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    if let Some(&i) = ss.empty_set_indices().first() {
        return Err(SolveError::UnpierceableMember(i));
    }
    let all = BitSet::from_indices(ss.n_sets().max(1), &(0..ss.n_sets()).collect::<Vec<_>>());
    let mut search = HittingSearch {
        ss,
        hits: ss.element_masks(),
        adj: ss.conflict_masks(),
        best: Vec::new(),
        nodes: 0,
        budget: cfg.node_budget,
        exhausted: false,
    };
    let root_lb = search.packing_bound(&all);
    search.best = search.greedy_hitting(&all);
    if search.best.len() > root_lb {
        search.run(&mut Vec::new(), &all);
    }
    if search.exhausted {
        return Err(SolveError::BudgetExhausted {
            nodes: search.nodes,
            lower_bound: root_lb,
            upper_bound: search.best.len(),
            best: search.best,
        });
    }
    let mut certificate = search.best;
    certificate.sort_unstable();
    // Weak duality guard: the greedy packing at the root is a lower bound.
    assert!(root_lb <= certificate.len(), "packing bound exceeds optimum");
    assert!(is_hitting(ss, &certificate), "certificate fails re-validation");
    Ok(SolveResult {
        value: certificate.len(),
        certificate,
        stats: SolveStats { nodes: search.nodes, elapsed: start.elapsed() },
    })
}

struct PackingSearch<'a> {
    ss: &'a SetSystem,
    adj: Vec<BitSet>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl PackingSearch<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, candidates: &BitSet) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if chosen.len() + candidates.count_ones() <= self.best.len() {
            return;
        }
        let Some(i) = candidates.ones().next() else {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            return;
        };
        // Include i first so the greedy dive seeds a good incumbent.
        let mut included = candidates.clone();
        included.and_not(&self.adj[i]);
        let mut self_only = BitSet::new(self.ss.n_sets().max(1));
        self_only.insert(i);
        included.and_not(&self_only);
        chosen.push(i);
        self.run(chosen, &included);
        chosen.pop();
        if self.exhausted {
            return;
        }
        let mut excluded = candidates.clone();
        excluded.and_not(&self_only);
        self.run(chosen, &excluded);
    }
}

/// Exact maximum packing (pairwise disjoint members) with the default budget.
pub fn max_packing(ss: &SetSystem) -> Result<SolveResult, SolveError> {
    max_packing_with(ss, &SolverConfig::default())
}

/// Exact maximum packing; include/exclude branch and bound over members in
/// index order. Empty members are disjoint from everything and pack freely.
pub fn max_packing_with(ss: &SetSystem, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let all = BitSet::from_indices(ss.n_sets().max(1), &(0..ss.n_sets()).collect::<Vec<_>>());
    let mut search = PackingSearch {
        ss,
        adj: ss.conflict_masks(),
        best: Vec::new(),
        nodes: 0,
        budget: cfg.node_budget,
        exhausted: false,
    };
    search.run(&mut Vec::new(), &all);
    if search.exhausted {
        return Err(SolveError::BudgetExhausted {
            nodes: search.nodes,
            lower_bound: search.best.len(),
            upper_bound: ss.n_sets(),
            best: search.best,
        });
    }
    let mut certificate = search.best;
    certificate.sort_unstable();
    assert!(is_packing(ss, &certificate), "certificate fails re-validation");
    Ok(SolveResult {
        value: certificate.len(),
        certificate,
        stats: SolveStats { nodes: search.nodes, elapsed: start.elapsed() },
    })
}

/// Brute-force minimum hitting set by subset enumeration in increasing size,
/// lexicographically smallest certificate first. Independent of the branch
/// and bound path; universe capped at 24.
pub fn oracle_min_hitting_set(ss: &SetSystem) -> Result<SolveResult, SolveError> {
    use itertools::Itertools;
    let start = Instant::now();
    let n = ss.universe_size();
    if n > ORACLE_UNIVERSE_LIMIT {
        return Err(SolveError::UniverseTooLarge(n));
    }
    if let Some(&i) = ss.empty_set_indices().first() {
        return Err(SolveError::UnpierceableMember(i));
    }
    let masks: Vec<u32> = ss
        .sets()
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &e| m | 1 << e))
        .collect();
    let mut nodes = 0u64;
    for k in 0..=n {
        for combo in (0..n).combinations(k) {
            nodes += 1;
            let chosen = combo.iter().fold(0u32, |m, &e| m | 1 << e);
            if masks.iter().all(|&s| s & chosen != 0) {
                assert!(is_hitting(ss, &combo), "oracle certificate fails re-validation");
                return Ok(SolveResult {
                    value: k,
                    certificate: combo,
                    stats: SolveStats { nodes, elapsed: start.elapsed() },
                });
            }
        }
    }
    unreachable!("the full universe hits every non-empty set");
}

/// Brute-force maximum packing by subfamily enumeration; member count capped
/// at 20. Returns the numerically smallest optimal subfamily.
pub fn oracle_max_packing(ss: &SetSystem) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let m = ss.n_sets();
    if m > ORACLE_SETS_LIMIT {
        return Err(SolveError::TooManySets(m));
    }
    // conflict[i]: members sharing an element with member i, as a u32 mask.
    let mut conflict = vec![0u32; m];
    for i in 0..m {
        for j in 0..m {
            if i != j
                && ss.sets()[i]
                    .iter()
                    .any(|e| ss.sets()[j].binary_search(e).is_ok())
            {
                conflict[i] |= 1 << j;
            }
        }
    }
    let mut best_mask = 0u32;
    let mut valid = vec![false; 1usize << m];
    valid[0] = true;
    let mut nodes = 0u64;
    for mask in 1..(1u32 << m) {
        nodes += 1;
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        valid[mask as usize] = valid[rest as usize] && conflict[low] & rest == 0;
        if valid[mask as usize] && mask.count_ones() > best_mask.count_ones() {
            best_mask = mask;
        }
    }
    let certificate: Vec<usize> = (0..m).filter(|&i| best_mask & (1 << i) != 0).collect();
    assert!(is_packing(ss, &certificate), "oracle certificate fails re-validation");
    Ok(SolveResult {
        value: certificate.len(),
        certificate,
        stats: SolveStats { nodes, elapsed: start.elapsed() },
    })
}

/// A minimum set of plane points piercing every rectangle, found exactly on
/// the endpoint grid.
#[derive(Debug, Clone)]
pub struct GeometricPiercing<C> {
    pub points: Vec<Point<C>>,
    pub result: SolveResult,
}

/// Exact geometric piercing number of a rectangle family.
///
/// Candidates are restricted to the grid of all x-endpoints crossed with all
/// y-endpoints; this is lossless, because any piercing point can have each
/// coordinate lowered to the largest lower endpoint below it without leaving
/// any rectangle that contained it.
pub fn geometric_pierce<C: CoordNum>(
    rects: &[Rect<C>],
    cfg: &SolverConfig,
) -> Result<GeometricPiercing<C>, SolveError> {
    let start = Instant::now();
    if rects.is_empty() {
        return Ok(GeometricPiercing {
            points: Vec::new(),
            result: SolveResult {
                value: 0,
                certificate: Vec::new(),
                stats: SolveStats { nodes: 0, elapsed: start.elapsed() },
            },
        });
    }
    let mut xs: Vec<C> = rects.iter().flat_map(|r| [r.x_lo(), r.x_hi()]).collect();
    let mut ys: Vec<C> = rects.iter().flat_map(|r| [r.y_lo(), r.y_hi()]).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let grid_point = |e: usize| Point::new(xs[e / ys.len()], ys[e % ys.len()]);
    let sets: Vec<Vec<usize>> = rects
        .iter()
        .map(|r| {
            let mut s = Vec::new();
            for (ix, &x) in xs.iter().enumerate() {
                if x < r.x_lo() || x > r.x_hi() {
                    continue;
                }
                for (iy, &y) in ys.iter().enumerate() {
                    if r.y_lo() <= y && y <= r.y_hi() {
                        s.push(ix * ys.len() + iy);
                    }
                }
            }
            s
        })
        .collect();
    let ss = SetSystem::new(xs.len() * ys.len(), sets).expect("grid indices are in range");
    debug_assert!(ss.empty_set_indices().is_empty(), "every rectangle contains its own corner");
    let result = min_hitting_set_with(&ss, cfg)?;
    let points = result.certificate.iter().map(|&e| grid_point(e)).collect::<Vec<_>>();
    for r in rects {
        assert!(points.iter().any(|&p| r.contains(p)), "piercing fails re-validation");
    }
    Ok(GeometricPiercing { points, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;

    fn sys(universe: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::new(universe, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn element_out_of_range_is_rejected() {
        let err = SetSystem::new(2, vec![vec![0, 2]]).unwrap_err();
        assert!(err.to_string().contains("index out of range"));
    }

    #[test]
    fn shared_element_gives_tau_one() {
        let ss = sys(3, &[&[0, 1], &[1, 2]]);
        let r = min_hitting_set(&ss).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.certificate, vec![1]);
    }

    #[test]
    fn triangle_system_needs_two_elements() {
        // Pairwise-intersecting triple with no common element.
        let ss = sys(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let oracle = oracle_min_hitting_set(&ss).unwrap();
        assert_eq!(oracle.value, 2);
        assert_eq!(oracle.certificate, vec![0, 1]);
        let solved = min_hitting_set(&ss).unwrap();
        assert_eq!(solved.value, oracle.value);
    }

    #[test]
    fn empty_family_has_tau_zero() {
        let ss = sys(4, &[]);
        assert_eq!(min_hitting_set(&ss).unwrap().value, 0);
        assert_eq!(oracle_min_hitting_set(&ss).unwrap().value, 0);
    }

    #[test]
    fn empty_member_is_unpierceable() {
        let ss = sys(3, &[&[0], &[], &[1]]);
        let err = min_hitting_set(&ss).unwrap_err();
        assert_eq!(err, SolveError::UnpierceableMember(1));
        assert!(err.to_string().contains("unpierceable member"));
        assert_eq!(oracle_min_hitting_set(&ss).unwrap_err(), SolveError::UnpierceableMember(1));
    }

    #[test]
    fn disjoint_singletons_pack_fully() {
        let ss = sys(3, &[&[0], &[1], &[2]]);
        assert_eq!(max_packing(&ss).unwrap().value, 3);
        assert_eq!(max_packing(&ss).unwrap().certificate, vec![0, 1, 2]);
        assert_eq!(oracle_max_packing(&ss).unwrap().value, 3);
    }

    #[test]
    fn pairwise_intersecting_triple_packs_one() {
        let ss = sys(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(max_packing(&ss).unwrap().value, 1);
        assert_eq!(oracle_max_packing(&ss).unwrap().value, 1);
    }

    #[test]
    fn empty_members_pack_as_disjoint() {
        let ss = sys(2, &[&[], &[], &[0, 1]]);
        assert_eq!(max_packing(&ss).unwrap().value, 3);
    }

    #[test]
    fn oracle_limits_are_enforced() {
        let ss = sys(25, &[&[0]]);
        assert_eq!(oracle_min_hitting_set(&ss).unwrap_err(), SolveError::UniverseTooLarge(25));
        let many = SetSystem::new(1, vec![vec![0]; 21]).unwrap();
        assert_eq!(oracle_max_packing(&many).unwrap_err(), SolveError::TooManySets(21));
    }

    #[test]
    fn tiny_budget_reports_exhaustion_with_bounds() {
        let sets: Vec<Vec<usize>> = (0..10)
            .flat_map(|i| (i + 1..10).map(move |j| vec![i, j]))
            .collect();
        let ss = SetSystem::new(10, sets).unwrap();
        match min_hitting_set_with(&ss, &SolverConfig { node_budget: 1 }) {
            Err(SolveError::BudgetExhausted { nodes, lower_bound, upper_bound, .. }) => {
                assert!(nodes >= 1);
                assert!(lower_bound <= upper_bound);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn weak_duality_on_mixed_systems() {
        let systems = [
            sys(5, &[&[0, 1], &[1, 2], &[3], &[3, 4]]),
            sys(4, &[&[0], &[0, 1, 2], &[2, 3], &[1, 3]]),
            sys(6, &[&[0, 5], &[1, 2], &[2, 3], &[4]]),
        ];
        for ss in &systems {
            let tau = min_hitting_set(ss).unwrap().value;
            let nu = max_packing(ss).unwrap().value;
            assert!(nu <= tau, "nu={nu} tau={tau}");
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let ss = sys(6, &[&[0, 1, 2], &[2, 3], &[3, 4, 5], &[0, 5], &[1, 4]]);
        let a = min_hitting_set(&ss).unwrap();
        let b = min_hitting_set(&ss).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.certificate, b.certificate);
        assert_eq!(a.stats.nodes, b.stats.nodes);
        let pa = max_packing(&ss).unwrap();
        let pb = max_packing(&ss).unwrap();
        assert_eq!(pa.certificate, pb.certificate);
        assert_eq!(pa.stats.nodes, pb.stats.nodes);
    }

    fn rect(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Rect<i64> {
        Rect::new(x_lo, x_hi, y_lo, y_hi).unwrap()
    }

    #[test]
    fn geometric_pierce_single_rect() {
        let g = geometric_pierce(&[rect(2, 5, 1, 4)], &SolverConfig::default()).unwrap();
        assert_eq!(g.result.value, 1);
        assert!(rect(2, 5, 1, 4).contains(g.points[0]));
    }

    #[test]
    fn geometric_pierce_disjoint_pair_needs_two() {
        let g = geometric_pierce(
            &[rect(0, 1, 0, 1), rect(5, 6, 5, 6)],
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(g.result.value, 2);
    }

    #[test]
    fn geometric_pierce_triangle_fixture_needs_one() {
        let fam = [rect(-4, 1, -4, 1), rect(-1, 4, -4, 1), rect(-4, 4, -1, 4)];
        let g = geometric_pierce(&fam, &SolverConfig::default()).unwrap();
        assert_eq!(g.result.value, 1);
        for r in &fam {
            assert!(r.contains(g.points[0]));
        }
    }

    #[test]
    fn geometric_pierce_empty_family() {
        let g = geometric_pierce::<i64>(&[], &SolverConfig::default()).unwrap();
        assert_eq!(g.result.value, 0);
        assert!(g.points.is_empty());
    }
}
