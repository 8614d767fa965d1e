use std::fmt;

use ndarray::{ArrayD, Axis, Dimension, IxDyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance for conditional slices.
pub const PROB_TOL: f64 = 1e-12;

/// Default cap on the number of joint cells.
pub const DEFAULT_CELL_CAP: u64 = 10_000_000;

/// Random variables of the discrete IC-DMS, in canonical axis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    Q,
    W,
    X1,
    U,
    UTilde,
    V,
    VTilde,
    X2,
    Y1,
    Y2,
}

impl Var {
    pub const ALL: [Var; 10] = [
        Var::Q,
        Var::W,
        Var::X1,
        Var::U,
        Var::UTilde,
        Var::V,
        Var::VTilde,
        Var::X2,
        Var::Y1,
        Var::Y2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::W => "w",
            Var::X1 => "x1",
            Var::U => "u",
            Var::UTilde => "u_tilde",
            Var::V => "v",
            Var::VTilde => "v_tilde",
            Var::X2 => "x2",
            Var::Y1 => "y1",
            Var::Y2 => "y2",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Alphabet sizes of every variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetSpec {
    sizes: [usize; 10],
}

impl AlphabetSpec {
    /// Every variable binary except `Q`, which is a constant.
    pub fn binary() -> Self {
        Self::uniform(2).with(Var::Q, 1)
    }

    pub fn uniform(size: usize) -> Self {
        Self { sizes: [size; 10] }
    }

    pub fn with(mut self, var: Var, size: usize) -> Self {
        self.sizes[var as usize] = size;
        self
    }

    pub fn size(&self, var: Var) -> usize {
        self.sizes[var as usize]
    }

    pub fn validate(&self) -> Result<()> {
        for v in Var::ALL {
            if self.size(v) == 0 {
                return Err(Error::Axis(format!("alphabet of `{v}` is empty")));
            }
        }
        Ok(())
    }

    /// Number of joint cells over the given variables.
    pub fn cells(&self, vars: &[Var]) -> u128 {
        vars.iter().map(|&v| self.size(v) as u128).product()
    }
}

/// Which factorization a distribution follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `p(q)p(w,x1|q)p(u,ũ|w,q)p(v,ṽ|w,q)p(x2|ũ,ṽ,w,q)p(y1,y2|x1,x2)`
    Full,
    /// `p(q)p(x1,w|q)p(u|q)p(v,ṽ|w,q)p(x2|u,ṽ,w,q)p(y1,y2|x1,x2)`: no `Ũ`.
    Star,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Full => "full",
            Family::Star => "star",
        }
    }

    /// Joint axes, in canonical order.
    pub fn axes(self) -> Vec<Var> {
        match self {
            Family::Full => Var::ALL.to_vec(),
            Family::Star => Var::ALL.into_iter().filter(|&v| v != Var::UTilde).collect(),
        }
    }

    /// `(given, outcome)` variable sets of each source factor, excluding the
    /// channel.
    pub fn signatures(self) -> Vec<(Vec<Var>, Vec<Var>)> {
        use Var::*;
        match self {
            Family::Full => vec![
                (vec![], vec![Q]),
                (vec![Q], vec![W, X1]),
                (vec![W, Q], vec![U, UTilde]),
                (vec![W, Q], vec![V, VTilde]),
                (vec![UTilde, VTilde, W, Q], vec![X2]),
            ],
            Family::Star => vec![
                (vec![], vec![Q]),
                (vec![Q], vec![X1, W]),
                (vec![Q], vec![U]),
                (vec![W, Q], vec![V, VTilde]),
                (vec![U, VTilde, W, Q], vec![X2]),
            ],
        }
    }

    pub fn channel_signature() -> (Vec<Var>, Vec<Var>) {
        (vec![Var::X1, Var::X2], vec![Var::Y1, Var::Y2])
    }
}

/// A conditional probability table `p(outcome | given)`.
///
/// Table axes are `given` followed by `outcome`, in the declared order.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub name: String,
    pub given: Vec<Var>,
    pub outcome: Vec<Var>,
    pub table: ArrayD<f64>,
}

impl Factor {
    pub fn new(
        name: impl Into<String>,
        given: Vec<Var>,
        outcome: Vec<Var>,
        table: ArrayD<f64>,
    ) -> Self {
        Self {
            name: name.into(),
            given,
            outcome,
            table,
        }
    }

    /// Builds `p(outcome | given)` from a closure over index tuples.
    pub fn from_fn(
        name: impl Into<String>,
        given: Vec<Var>,
        outcome: Vec<Var>,
        alphabet: &AlphabetSpec,
        f: impl Fn(&[usize]) -> f64,
    ) -> Self {
        let shape: Vec<usize> = given
            .iter()
            .chain(outcome.iter())
            .map(|&v| alphabet.size(v))
            .collect();
        let table = ArrayD::from_shape_fn(IxDyn(&shape), |ix| f(ix.slice()));
        Self::new(name, given, outcome, table)
    }

    pub fn axes(&self) -> Vec<Var> {
        self.given
            .iter()
            .chain(self.outcome.iter())
            .copied()
            .collect()
    }

    /// Checks non-negativity and that every conditional slice sums to 1.
    pub fn validate(&self, alphabet: &AlphabetSpec) -> Result<()> {
        let expected: Vec<usize> = self.axes().iter().map(|&v| alphabet.size(v)).collect();
        if self.table.shape() != expected.as_slice() {
            return Err(Error::Axis(format!(
                "factor `{}` has shape {:?}, alphabet requires {:?}",
                self.name,
                self.table.shape(),
                expected
            )));
        }
        if let Some(&bad) = self.table.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::NegativeMass {
                factor: self.name.clone(),
                value: bad,
            });
        }
        let mut sums = self.table.clone();
        for _ in 0..self.outcome.len() {
            let last = sums.ndim() - 1;
            sums = sums.sum_axis(Axis(last));
        }
        for (ix, &mass) in sums.indexed_iter() {
            if (mass - 1.0).abs() > PROB_TOL {
                let slice = self
                    .given
                    .iter()
                    .zip(ix.slice())
                    .map(|(v, i)| format!("{v}={i}"))
                    .collect::<Vec<_>>()
                    .join(",");
                return Err(Error::Normalization {
                    factor: self.name.clone(),
                    slice: if slice.is_empty() {
                        "()".into()
                    } else {
                        format!("({slice})")
                    },
                    mass,
                });
            }
        }
        Ok(())
    }
}

/// Source factors plus channel for one of the two factorization families.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredDistribution {
    pub family: Family,
    pub alphabet: AlphabetSpec,
    pub factors: Vec<Factor>,
    pub channel: Factor,
}

fn same_set(a: &[Var], b: &[Var]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}

impl FactoredDistribution {
    pub fn new(
        family: Family,
        alphabet: AlphabetSpec,
        factors: Vec<Factor>,
        channel: Factor,
    ) -> Result<Self> {
        let fd = Self {
            family,
            alphabet,
            factors,
            channel,
        };
        fd.validate()?;
        Ok(fd)
    }

    /// Factor structure, shapes and normalization.
    pub fn validate(&self) -> Result<()> {
        self.alphabet.validate()?;
        let sigs = self.family.signatures();
        if self.factors.len() != sigs.len() {
            return Err(Error::FactorShape {
                factor: "factors".into(),
                family: self.family.name(),
                reason: format!(
                    "expected {} factors, got {}",
                    sigs.len(),
                    self.factors.len()
                ),
            });
        }
        let mut used = vec![false; sigs.len()];
        for f in &self.factors {
            let slot = sigs.iter().enumerate().position(|(k, (g, o))| {
                !used[k] && same_set(g, &f.given) && same_set(o, &f.outcome)
            });
            match slot {
                Some(k) => used[k] = true,
                None => {
                    return Err(Error::FactorShape {
                        factor: f.name.clone(),
                        family: self.family.name(),
                        reason: format!(
                            "p({}|{}) is not part of the factorization",
                            join(&f.outcome),
                            join(&f.given)
                        ),
                    })
                }
            }
            f.validate(&self.alphabet)?;
        }
        let (g, o) = Family::channel_signature();
        if !same_set(&g, &self.channel.given) || !same_set(&o, &self.channel.outcome) {
            return Err(Error::FactorShape {
                factor: self.channel.name.clone(),
                family: self.family.name(),
                reason: "channel must be p(y1,y2|x1,x2)".into(),
            });
        }
        self.channel.validate(&self.alphabet)
    }

    pub fn factor(&self, outcome_contains: Var) -> Option<&Factor> {
        self.factors
            .iter()
            .find(|f| f.outcome.contains(&outcome_contains))
    }
}

fn join(vars: &[Var]) -> String {
    vars.iter().map(|v| v.name()).collect::<Vec<_>>().join(",")
}
