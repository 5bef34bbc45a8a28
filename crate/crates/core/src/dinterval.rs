//! Families of d-intervals over d discrete lines: each member occupies at
//! most one contiguous index range per line. Piercing and packing reduce to
//! the set-system solvers over the union of the lines.

use crate::solver::{self, SetSystem, SolveError, SolveResult, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DIntervalFamily {
    d: usize,
    line_sizes: Vec<usize>,
    /// Per member, one optional inclusive range `(lo, hi)` per line.
    members: Vec<Vec<Option<(usize, usize)>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DIntervalError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("member {0} has every range absent")]
    EmptyMember(usize),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

impl DIntervalFamily {
    pub fn new(
        d: usize,
        line_sizes: Vec<usize>,
        members: Vec<Vec<Option<(usize, usize)>>>,
    ) -> Result<Self, DIntervalError> {
        if d == 0 || line_sizes.len() != d {
            return Err(DIntervalError::InvalidParameters(format!(
                "d = {d} with {} line sizes",
                line_sizes.len()
            )));
        }
        for (mi, m) in members.iter().enumerate() {
            if m.len() != d {
                return Err(DIntervalError::InvalidParameters(format!(
                    "member {mi} has {} components, expected {d}",
                    m.len()
                )));
            }
            if m.iter().all(Option::is_none) {
                return Err(DIntervalError::EmptyMember(mi));
            }
            for (line, range) in m.iter().enumerate() {
                if let Some((lo, hi)) = range {
                    if lo > hi || *hi >= line_sizes[line] {
                        return Err(DIntervalError::InvalidParameters(format!(
                            "member {mi} range ({lo}, {hi}) outside line {line} of size {}",
                            line_sizes[line]
                        )));
                    }
                }
            }
        }
        Ok(DIntervalFamily { d, line_sizes, members })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn line_sizes(&self) -> &[usize] {
        &self.line_sizes
    }

    pub fn members(&self) -> &[Vec<Option<(usize, usize)>>] {
        &self.members
    }

    pub fn n_members(&self) -> usize {
        self.members.len()
    }

    /// Start of each line in the flattened element universe.
    pub fn line_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.d);
        let mut acc = 0;
        for &s in &self.line_sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets
    }

    pub fn universe_size(&self) -> usize {
        self.line_sizes.iter().sum()
    }

    /// Flatten the family into a set system over all line points.
    pub fn to_set_system(&self) -> SetSystem {
        let offsets = self.line_offsets();
        let sets = self
            .members
            .iter()
            .map(|m| {
                let mut s = Vec::new();
                for (line, range) in m.iter().enumerate() {
                    if let Some((lo, hi)) = range {
                        s.extend((*lo..=*hi).map(|i| offsets[line] + i));
                    }
                }
                s
            })
            .collect();
        SetSystem::new(self.universe_size(), sets).expect("ranges were bounds-checked")
    }
}

/// Exact piercing number of the family.
pub fn dinterval_tau(
    fam: &DIntervalFamily,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    solver::min_hitting_set_with(&fam.to_set_system(), cfg)
}

/// Exact packing number of the family.
pub fn dinterval_nu(
    fam: &DIntervalFamily,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    solver::max_packing_with(&fam.to_set_system(), cfg)
}

/// Outcome of checking `tau <= (d^2 - d) nu` on one family.
#[derive(Debug, Clone)]
pub struct KaiserReport {
    pub d: usize,
    pub tau: SolveResult,
    pub nu: SolveResult,
    pub bound: usize,
    pub pass: bool,
}

/// Check the piercing-vs-packing bound `tau <= (d^2 - d) nu` exactly.
///
/// Requires `d >= 2`. A failing report would be a counterexample to the
/// bound this crate's piercing pipelines lean on, so callers treat
/// `pass = false` as a reportable event, not a routine result.
pub fn kaiser_check(
    fam: &DIntervalFamily,
    cfg: &SolverConfig,
) -> Result<KaiserReport, DIntervalError> {
    if fam.d() < 2 {
        return Err(DIntervalError::InvalidParameters(format!(
            "bound check requires d >= 2, got d = {}",
            fam.d()
        )));
    }
    let tau = dinterval_tau(fam, cfg)?;
    let nu = dinterval_nu(fam, cfg)?;
    assert!(nu.value <= tau.value, "weak duality violated: nu > tau");
    let bound = (fam.d() * fam.d() - fam.d()) * nu.value;
    let pass = tau.value <= bound;
    Ok(KaiserReport { d: fam.d(), tau, nu, bound, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::{oracle_max_packing, oracle_min_hitting_set};

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn constructor_rejects_malformed_members() {
        assert!(matches!(
            DIntervalFamily::new(2, vec![2, 2], vec![vec![None, None]]),
            Err(DIntervalError::EmptyMember(0))
        ));
        assert!(DIntervalFamily::new(2, vec![2, 2], vec![vec![Some((0, 2)), None]]).is_err());
        assert!(DIntervalFamily::new(2, vec![2, 2], vec![vec![Some((1, 0)), None]]).is_err());
        assert!(DIntervalFamily::new(2, vec![2, 2], vec![vec![Some((0, 1))]]).is_err());
        assert!(DIntervalFamily::new(0, vec![], vec![]).is_err());
    }

    #[test]
    fn single_member_needs_one_point() {
        let fam =
            DIntervalFamily::new(2, vec![3, 3], vec![vec![Some((0, 1)), Some((2, 2))]]).unwrap();
        assert_eq!(dinterval_tau(&fam, &cfg()).unwrap().value, 1);
        assert_eq!(dinterval_nu(&fam, &cfg()).unwrap().value, 1);
    }

    #[test]
    fn two_members_sharing_a_point_need_one() {
        let fam = DIntervalFamily::new(
            2,
            vec![3, 3],
            vec![
                vec![Some((0, 1)), None],
                vec![Some((1, 2)), Some((0, 0))],
            ],
        )
        .unwrap();
        assert_eq!(dinterval_tau(&fam, &cfg()).unwrap().value, 1);
    }

    #[test]
    fn disjoint_members_pack_and_need_two() {
        let fam = DIntervalFamily::new(
            2,
            vec![4, 1],
            vec![vec![Some((0, 1)), None], vec![Some((2, 3)), None]],
        )
        .unwrap();
        assert_eq!(dinterval_nu(&fam, &cfg()).unwrap().value, 2);
        assert_eq!(oracle_max_packing(&fam.to_set_system()).unwrap().value, 2);
        assert_eq!(dinterval_tau(&fam, &cfg()).unwrap().value, 2);
    }

    #[test]
    fn triangle_family_is_tight_for_d2() {
        let fam = fixtures::dinterval_triangle();
        let ss = fam.to_set_system();
        assert_eq!(
            ss.sets(),
            &[vec![0, 2], vec![0, 1], vec![1, 2]],
            "flattening: line 0 at offsets 0..2, line 1 at offset 2"
        );
        assert_eq!(oracle_min_hitting_set(&ss).unwrap().value, 2);
        assert_eq!(oracle_max_packing(&ss).unwrap().value, 1);
        let report = kaiser_check(&fam, &cfg()).unwrap();
        assert_eq!(report.tau.value, 2);
        assert_eq!(report.nu.value, 1);
        assert_eq!(report.bound, 2);
        assert!(report.pass);
    }

    #[test]
    fn single_4interval_member_passes_with_slack() {
        let fam = DIntervalFamily::new(
            4,
            vec![2, 2, 2, 2],
            vec![vec![Some((0, 1)), Some((0, 0)), None, Some((1, 1))]],
        )
        .unwrap();
        let report = kaiser_check(&fam, &cfg()).unwrap();
        assert_eq!(report.tau.value, 1);
        assert_eq!(report.nu.value, 1);
        assert_eq!(report.bound, 12);
        assert!(report.pass);
    }

    #[test]
    fn bound_check_requires_d_at_least_two() {
        let fam = DIntervalFamily::new(1, vec![3], vec![vec![Some((0, 1))]]).unwrap();
        assert!(matches!(
            kaiser_check(&fam, &cfg()),
            Err(DIntervalError::InvalidParameters(_))
        ));
    }
}
