use ndarray::{ArrayD, Axis, IxDyn};

use super::dist::{FactoredDistribution, Var, DEFAULT_CELL_CAP};
use crate::error::{Error, Result};

/// Dense joint probability table with labelled axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Var>,
    table: ArrayD<f64>,
}

impl JointPmf {
    /// Wraps an explicit table. Entries must be non-negative and sum to 1.
    pub fn new(axes: Vec<Var>, table: ArrayD<f64>) -> Result<Self> {
        if axes.len() != table.ndim() {
            return Err(Error::Axis(format!(
                "{} axis labels for a {}-dimensional table",
                axes.len(),
                table.ndim()
            )));
        }
        let mut seen = axes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != axes.len() {
            return Err(Error::Axis("duplicate axis label".into()));
        }
        if table.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::NegativeMass {
                factor: "joint".into(),
                value: table
                    .iter()
                    .copied()
                    .find(|p| !(*p >= 0.0))
                    .unwrap_or(f64::NAN),
            });
        }
        let total = table.sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization {
                factor: "joint".into(),
                slice: "()".into(),
                mass: total,
            });
        }
        let table = table.as_standard_layout().into_owned();
        Ok(Self { axes, table })
    }

    pub fn axes(&self) -> &[Var] {
        &self.axes
    }

    pub fn shape(&self) -> &[usize] {
        self.table.shape()
    }

    pub fn table(&self) -> &ArrayD<f64> {
        &self.table
    }

    /// Row-major cell masses.
    pub fn as_slice(&self) -> &[f64] {
        self.table
            .as_slice()
            .expect("joint tables are kept in standard layout")
    }

    pub fn axis_of(&self, var: Var) -> Result<usize> {
        self.axes
            .iter()
            .position(|&v| v == var)
            .ok_or(Error::UnknownAxis(var))
    }

    /// Marginal table over `keep`, with axes in joint order.
    pub fn marginal(&self, keep: &[Var]) -> Result<ArrayD<f64>> {
        let mut keep_axes = Vec::with_capacity(keep.len());
        for &v in keep {
            keep_axes.push(self.axis_of(v)?);
        }
        let mut out = self.table.clone();
        for ax in (0..self.axes.len()).rev() {
            if !keep_axes.contains(&ax) {
                out = out.sum_axis(Axis(ax));
            }
        }
        Ok(out)
    }
}

/// Materializes the product of all factors and the channel.
pub fn assemble_joint(fd: &FactoredDistribution) -> Result<JointPmf> {
    assemble_joint_capped(fd, DEFAULT_CELL_CAP)
}

pub fn assemble_joint_capped(fd: &FactoredDistribution, cap: u64) -> Result<JointPmf> {
    let axes = fd.family.axes();
    let cells = fd.alphabet.cells(&axes);
    if cells > cap as u128 {
        return Err(Error::CapExceeded { cells, cap });
    }
    fd.validate()?;

    let shape: Vec<usize> = axes.iter().map(|&v| fd.alphabet.size(v)).collect();
    let mut joint = ArrayD::<f64>::ones(IxDyn(&shape));
    for factor in fd.factors.iter().chain(std::iter::once(&fd.channel)) {
        // Permute the factor's axes into joint order, then insert the
        // missing axes as length-1 so it broadcasts.
        let f_axes = factor.axes();
        let mut order: Vec<(usize, usize)> = f_axes
            .iter()
            .enumerate()
            .map(|(k, v)| (axes.iter().position(|a| a == v).expect("validated"), k))
            .collect();
        order.sort();
        let perm: Vec<usize> = order.iter().map(|&(_, k)| k).collect();
        let mut view = factor.table.view().permuted_axes(IxDyn(&perm));
        for (pos, v) in axes.iter().enumerate() {
            if !f_axes.contains(v) {
                view = view.insert_axis(Axis(pos));
            }
        }
        let b = view
            .broadcast(joint.raw_dim())
            .ok_or_else(|| Error::Axis(format!("factor `{}` does not broadcast", factor.name)))?;
        joint *= &b;
    }
    JointPmf::new(axes, joint)
}

fn entropy_bits(table: &ArrayD<f64>) -> f64 {
    table
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

fn check_sets(j: &JointPmf, left: &[Var], right: &[Var], given: &[Var]) -> Result<()> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::Axis(
            "mutual information needs non-empty variable sets".into(),
        ));
    }
    let all: Vec<Var> = left.iter().chain(right).chain(given).copied().collect();
    for &v in &all {
        j.axis_of(v)?;
    }
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != all.len() {
        return Err(Error::Axis("variable sets overlap".into()));
    }
    Ok(())
}

/// Exact `I(left; right | given)` in bits.
///
/// Evaluated as `H(L,G) + H(R,G) − H(L,R,G) − H(G)` over marginal tables,
/// with `0·log 0 = 0`. The result is clamped at 0 against rounding.
pub fn conditional_mi(j: &JointPmf, left: &[Var], right: &[Var], given: &[Var]) -> Result<f64> {
    check_sets(j, left, right, given)?;
    let cat = |a: &[Var], b: &[Var]| -> Vec<Var> { a.iter().chain(b).copied().collect() };
    let h_lg = entropy_bits(&j.marginal(&cat(left, given))?);
    let h_rg = entropy_bits(&j.marginal(&cat(right, given))?);
    let h_lrg = entropy_bits(&j.marginal(&cat(&cat(left, right), given))?);
    let h_g = if given.is_empty() {
        0.0
    } else {
        entropy_bits(&j.marginal(given)?)
    };
    Ok((h_lg + h_rg - h_lrg - h_g).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::dist::{AlphabetSpec, Factor, Family};
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    fn pair(table: [[f64; 2]; 2]) -> JointPmf {
        JointPmf::new(vec![Var::X1, Var::Y1], arr2(&table).into_dyn()).unwrap()
    }

    #[test]
    fn correlated_bits_share_one_bit() {
        let j = pair([[0.5, 0.0], [0.0, 0.5]]);
        assert_abs_diff_eq!(
            conditional_mi(&j, &[Var::X1], &[Var::Y1], &[]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn independent_bits_share_nothing() {
        let j = pair([[0.06, 0.14], [0.24, 0.56]]);
        assert_abs_diff_eq!(
            conditional_mi(&j, &[Var::X1], &[Var::Y1], &[]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn bsc_capacity() {
        let e = 0.11;
        let j = pair([[0.5 * (1.0 - e), 0.5 * e], [0.5 * e, 0.5 * (1.0 - e)]]);
        let hb = -e * f64::log2(e) - (1.0 - e) * f64::log2(1.0 - e);
        let mi = conditional_mi(&j, &[Var::X1], &[Var::Y1], &[]).unwrap();
        assert_abs_diff_eq!(mi, 1.0 - hb, epsilon = 1e-14);
        assert_abs_diff_eq!(mi, 0.5001, epsilon = 1e-4);
    }

    #[test]
    fn axis_errors() {
        let j = pair([[0.5, 0.0], [0.0, 0.5]]);
        assert!(matches!(
            conditional_mi(&j, &[Var::X1], &[Var::Y2], &[]),
            Err(Error::UnknownAxis(Var::Y2))
        ));
        assert!(matches!(
            conditional_mi(&j, &[Var::X1], &[Var::X1], &[]),
            Err(Error::Axis(_))
        ));
        assert!(conditional_mi(&j, &[], &[Var::X1], &[]).is_err());
    }

    fn point_mass(alphabet: AlphabetSpec, family: Family) -> FactoredDistribution {
        // Every variable deterministically 0.
        let delta = |ix: &[usize], n_out: usize| -> f64 {
            let out = &ix[ix.len() - n_out..];
            if out.iter().all(|&i| i == 0) {
                1.0
            } else {
                0.0
            }
        };
        let factors = family
            .signatures()
            .into_iter()
            .enumerate()
            .map(|(k, (g, o))| {
                let n = o.len();
                Factor::from_fn(format!("f{k}"), g, o, &alphabet, |ix| delta(ix, n))
            })
            .collect();
        let (g, o) = Family::channel_signature();
        let channel = Factor::from_fn("channel", g, o, &alphabet, |ix| delta(ix, 2));
        FactoredDistribution::new(family, alphabet, factors, channel).unwrap()
    }

    #[test]
    fn singleton_alphabets_give_unit_cell() {
        let fd = point_mass(AlphabetSpec::uniform(1), Family::Full);
        let j = assemble_joint(&fd).unwrap();
        assert_eq!(j.as_slice(), &[1.0]);
    }

    #[test]
    fn deterministic_factors_give_one_cell() {
        let fd = point_mass(AlphabetSpec::uniform(2), Family::Full);
        let j = assemble_joint(&fd).unwrap();
        assert_eq!(j.as_slice().iter().filter(|&&p| p != 0.0).count(), 1);
        assert_eq!(j.as_slice()[0], 1.0);
    }

    #[test]
    fn cap_is_enforced() {
        let fd = point_mass(AlphabetSpec::uniform(2), Family::Full);
        assert!(matches!(
            assemble_joint_capped(&fd, 1000),
            Err(Error::CapExceeded {
                cells: 1024,
                cap: 1000
            })
        ));
    }
}
