//! Seeded random factored distributions, for property checks.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::dist::{AlphabetSpec, Factor, FactoredDistribution, Family, Var};
use crate::error::Result;

/// Conditional table with every slice drawn from a flat Dirichlet.
pub fn random_factor<R: Rng + ?Sized>(
    name: impl Into<String>,
    given: Vec<Var>,
    outcome: Vec<Var>,
    alphabet: &AlphabetSpec,
    rng: &mut R,
) -> Factor {
    let slices: usize = given.iter().map(|&v| alphabet.size(v)).product();
    let width: usize = outcome.iter().map(|&v| alphabet.size(v)).product();
    let mut values = Vec::with_capacity(slices * width);
    for _ in 0..slices {
        let draws: Vec<f64> = (0..width).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        values.extend(draws.iter().map(|d| d / total));
    }
    let shape: Vec<usize> = given
        .iter()
        .chain(outcome.iter())
        .map(|&v| alphabet.size(v))
        .collect();
    let table = ndarray::ArrayD::from_shape_vec(ndarray::IxDyn(&shape), values)
        .expect("row-major length matches shape");
    Factor::new(name, given, outcome, table)
}

/// A random member of `family` over `alphabet`, channel included.
pub fn random_distribution<R: Rng + ?Sized>(
    family: Family,
    alphabet: AlphabetSpec,
    rng: &mut R,
) -> Result<FactoredDistribution> {
    let factors = family
        .signatures()
        .into_iter()
        .map(|(g, o)| {
            let name = factor_name(&g, &o);
            random_factor(name, g, o, &alphabet, rng)
        })
        .collect();
    let (g, o) = Family::channel_signature();
    let channel = random_factor(factor_name(&g, &o), g, o, &alphabet, rng);
    FactoredDistribution::new(family, alphabet, factors, channel)
}

pub fn factor_name(given: &[Var], outcome: &[Var]) -> String {
    let list = |vs: &[Var]| vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(",");
    if given.is_empty() {
        format!("p({})", list(outcome))
    } else {
        format!("p({}|{})", list(outcome), list(given))
    }
}

/// Singleton-alphabet specializations of the successive-decoding scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    /// `U` constant: only the dirty-paper coded stream remains.
    Sp1,
    /// `V, Ṽ` constant: only the independently generated stream remains.
    Sp2,
}

impl Corollary {
    pub fn apply(self, alphabet: AlphabetSpec) -> AlphabetSpec {
        match self {
            Corollary::Sp1 => alphabet.with(Var::U, 1),
            Corollary::Sp2 => alphabet.with(Var::V, 1).with(Var::VTilde, 1),
        }
    }
}
