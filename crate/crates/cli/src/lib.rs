//! File formats, seeded generators and the campaign driver behind the
//! `pierce-lab` binary.

pub mod gen;
pub mod io;
pub mod suite;

use pierce_lab::solver::SolverConfig;

pub const EXIT_OK: u8 = 0;
/// The input violates a pipeline or verifier hypothesis.
pub const EXIT_HYPOTHESIS: u8 = 2;
/// A certified bound failed; a counterexample file was written.
pub const EXIT_THEOREM: u8 = 3;
/// An exact solve ran out of its node budget.
pub const EXIT_BUDGET: u8 = 4;

pub const BUDGET_ENV: &str = "PIERCE_LAB_BUDGET";

/// Node budget resolution: explicit flag, then the environment variable,
/// then the library default. A set but unparsable variable is an error, not
/// a silent fallback.
pub fn resolve_budget(flag: Option<u64>) -> Result<SolverConfig, String> {
    if let Some(node_budget) = flag {
        return Ok(SolverConfig { node_budget });
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(|node_budget| SolverConfig { node_budget })
            .map_err(|_| format!("{BUDGET_ENV}={v} is not a node count")),
        Err(_) => Ok(SolverConfig { node_budget: pierce_lab::DEFAULT_NODE_BUDGET }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_flag_wins_over_default() {
        let cfg = resolve_budget(Some(123)).unwrap();
        assert_eq!(cfg.node_budget, 123);
        let cfg = resolve_budget(None).unwrap();
        assert_eq!(cfg.node_budget, pierce_lab::DEFAULT_NODE_BUDGET);
    }
}
