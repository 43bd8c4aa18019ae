//! End-to-end constrained existence: reduction when needed, fixpoint,
//! payoff selection, witness, profile and verification.

use crate::error::Result;
use crate::fixpoint::{check_thresholds, fixpoint_with, select_payoff, FixpointOptions, FixpointResult};
use crate::game::{GameGraph, ObjectiveSet, Payoff};
use crate::path_oracle::{PathOracle, DEFAULT_ENUMERATION_CAP};
use crate::reduction::{pull_back_profile, to_prefix_independent, Product};
use crate::synth::{synthesize, StrategyProfile};
use crate::verify::{verify_with_report, VerificationReport};
use crate::witness::{build_witness, SymbolicWitness};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub min: Payoff,
    pub max: Payoff,
    pub enumeration_cap: usize,
    pub fixpoint: FixpointOptions,
    pub witness: bool,
    pub synthesize: bool,
}

impl SolveOptions {
    pub fn new(min: Payoff, max: Payoff) -> Self {
        Self {
            min,
            max,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            fixpoint: FixpointOptions::default(),
            witness: false,
            synthesize: false,
        }
    }
}

/// Outcome of [`solve`]. For Reachability and Safety inputs the fixpoint,
/// witness and profile live on the product game, and `base_profile` is the
/// profile pulled back to the input game.
#[derive(Clone, Debug)]
pub struct Solution {
    pub payoff: Option<Payoff>,
    pub product: Option<Product>,
    pub fixpoint: FixpointResult,
    pub witness: Option<SymbolicWitness>,
    pub profile: Option<StrategyProfile>,
    pub verification: Option<VerificationReport>,
    pub base_profile: Option<StrategyProfile>,
}

impl Solution {
    pub fn exists(&self) -> bool {
        self.payoff.is_some()
    }

    /// The game the fixpoint, witness and profile refer to.
    pub fn solved_game<'a>(&'a self, input: &'a GameGraph) -> &'a GameGraph {
        self.product.as_ref().map_or(input, |p| &p.game)
    }

    pub fn solved_objectives<'a>(&'a self, input: &'a ObjectiveSet) -> &'a ObjectiveSet {
        self.product.as_ref().map_or(input, |p| &p.objectives)
    }
}

pub fn solve(game: &GameGraph, objectives: &ObjectiveSet, options: &SolveOptions) -> Result<Solution> {
    check_thresholds(game, &options.min, &options.max)?;
    let product = if objectives.kind().is_prefix_independent() {
        None
    } else {
        Some(to_prefix_independent(game, objectives)?)
    };
    let (g, o) = match &product {
        Some(p) => (&p.game, &p.objectives),
        None => (game, objectives),
    };
    let root = g.initial();
    let mut oracle = PathOracle::new(g, o)?.with_cap(options.enumeration_cap);
    let fixpoint = fixpoint_with(&mut oracle, root, options.fixpoint)?;
    let payoff = select_payoff(&fixpoint, root, &options.min, &options.max);

    let mut solution = Solution {
        payoff,
        product: None,
        fixpoint,
        witness: None,
        profile: None,
        verification: None,
        base_profile: None,
    };
    if let Some(p) = payoff.filter(|_| options.witness || options.synthesize) {
        let witness = build_witness(&mut oracle, &solution.fixpoint.table, root, &p)?;
        if options.synthesize {
            let profile = synthesize(&witness, g, o)?;
            solution.verification = Some(verify_with_report(g, o, root, &profile)?);
            if let Some(prod) = &product {
                solution.base_profile = Some(pull_back_profile(prod, game, &profile));
            }
            solution.profile = Some(profile);
        }
        solution.witness = Some(witness);
    }
    solution.product = product;
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{payoff_of, Objective};
    use crate::sample::running_example;
    use crate::synth::outcome_from;

    fn p(s: &str) -> Payoff {
        Payoff::parse(s, s.len()).unwrap()
    }

    #[test]
    fn running_example_decisions() {
        let (g, o) = running_example();
        let run = |min, max| solve(&g, &o, &SolveOptions::new(p(min), p(max))).unwrap().payoff;
        assert_eq!(run("01", "01"), Some(p("01")));
        assert_eq!(run("10", "11"), None);
        assert_eq!(run("00", "11"), Some(p("01")));
        assert_eq!(run("00", "00"), None);
    }

    #[test]
    fn full_pipeline_verifies() {
        let (g, o) = running_example();
        let mut opts = SolveOptions::new(p("00"), p("11"));
        opts.synthesize = true;
        let s = solve(&g, &o, &opts).unwrap();
        assert!(s.verification.unwrap().counterexample.is_none());
        let prof = s.profile.unwrap();
        let out = outcome_from(&prof, &g, 0, &prof.initial_states()).unwrap();
        assert_eq!(payoff_of(&out, &o), p("01"));
    }

    #[test]
    fn reachability_goes_through_the_product() {
        let (g, _) = running_example();
        let o = ObjectiveSet::new(
            &g,
            vec![
                Objective::Reachability(g.set_of([1])),
                Objective::Reachability(g.set_of([3])),
            ],
        )
        .unwrap();
        let mut opts = SolveOptions::new(p("00"), p("11"));
        opts.synthesize = true;
        let s = solve(&g, &o, &opts).unwrap();
        let prod = s.product.as_ref().unwrap();
        assert!(prod.vertex_count() <= prod.size_bound());
        assert!(s.verification.as_ref().unwrap().counterexample.is_none());
        let payoff = s.payoff.unwrap();
        let base = s.base_profile.unwrap();
        let out = outcome_from(&base, &g, 0, &base.initial_states()).unwrap();
        assert_eq!(payoff_of(&out, &o), payoff);
    }
}
