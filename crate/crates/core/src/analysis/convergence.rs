use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::classify::classify_levels;
use crate::assembly::{assemble, Scheme};
use crate::discretization::MeshSpec;
use crate::eigensolver::solve;
use crate::error::{DiracError, Result};
use crate::physics::{OperatorParams, PotentialModel, ReferenceLevel};
use crate::scalar::LinalgReal;

/// Relative errors of the lowest genuine levels along a refinement sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy<T> {
    pub scheme: Scheme,
    pub n_values: Vec<usize>,
    pub reference: Vec<ReferenceLevel<T>>,
    /// `errors[i][l]`: relative error of level `l` at `n_values[i]`, `None`
    /// when no computed value matched it.
    pub errors: Vec<Vec<Option<T>>>,
    /// Fitted order `p` in `error ~ n^-p` per level.
    pub orders: Vec<Option<T>>,
    /// Number of spurious labels at each `n`.
    pub spurious: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
pub fn convergence_study<T: LinalgReal>(
    scheme: Scheme,
    params: &OperatorParams<T>,
    potential: &PotentialModel<T>,
    mesh: &MeshSpec<T>,
    n_values: &[usize],
    levels: usize,
    match_tol: T,
    reality_tol: T,
) -> Result<ConvergenceStudy<T>> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DiracError::InvalidCount(format!(
            "n values must be nonempty and strictly increasing, got {n_values:?}"
        )));
    }
    let mut errors = Vec::with_capacity(n_values.len());
    let mut spurious = Vec::with_capacity(n_values.len());
    let mut reference = Vec::new();
    for &n in n_values {
        let mesh = mesh.build(n)?;
        let system = assemble(scheme, params, &mesh, potential, false)?;
        let spectrum = solve(&system, reality_tol)?;
        let out = classify_levels(&spectrum.bindings, params, levels, match_tol)?;
        let row: Vec<Option<T>> = (0..levels)
            .map(|l| {
                out.classified
                    .matched(l, &out.reference)
                    .and_then(|e| e.rel_error)
            })
            .collect();
        errors.push(row);
        spurious.push(
            out.classified
                .entries
                .iter()
                .filter(|e| e.label.is_spurious())
                .count(),
        );
        reference = out.reference;
    }
    let orders = (0..levels)
        .map(|l| {
            let points: Vec<(T, T)> = n_values
                .iter()
                .zip(&errors)
                .filter_map(|(&n, row)| row[l].map(|e| (T::from_count(n), e)))
                .collect();
            fitted_order(&points)
        })
        .collect();
    Ok(ConvergenceStudy {
        scheme,
        n_values: n_values.to_vec(),
        reference,
        errors,
        orders,
        spurious,
    })
}

/// `-slope` of `log e` against `log n`; needs two points with nonzero error.
fn fitted_order<T: LinalgReal>(points: &[(T, T)]) -> Option<T> {
    if points.len() < 2 || points.iter().any(|&(_, e)| !(e > T::zero())) {
        return None;
    }
    let count = T::from_count(points.len());
    let mx = points.iter().fold(T::zero(), |s, &(n, _)| s + Float::ln(n)) / count;
    let my = points.iter().fold(T::zero(), |s, &(_, e)| s + Float::ln(e)) / count;
    let (num, den) = points
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(n, e)| {
            let dx = Float::ln(n) - mx;
            (a + dx * (Float::ln(e) - my), b + dx * dx)
        });
    Some(-num / den)
}

impl<T: LinalgReal> ConvergenceStudy<T> {
    /// Largest error over the first `levels` levels at the finest `n`.
    pub fn worst_final_error(&self, levels: usize) -> Option<T> {
        let last = self.errors.last()?;
        last.iter()
            .take(levels)
            .try_fold(T::zero(), |m, e| e.map(|e| Float::max(m, e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_fit() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.powi(-4)))
            .collect();
        assert!((fitted_order(&pts).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(fitted_order(&pts[..1]), None);
    }

    #[test]
    fn hermite_hydrogen_refines() {
        let params = OperatorParams::<f64>::new(1.0, -1).unwrap();
        let pot = PotentialModel::point(1.0);
        let spec = MeshSpec::new(1e-5, 60.0, 12.0);
        let study = convergence_study(
            Scheme::HermiteGalerkin,
            &params,
            &pot,
            &spec,
            &[30, 60],
            2,
            1e-3,
            1e-8,
        )
        .unwrap();
        let e = &study.errors;
        assert!(e[1][0].unwrap() < e[0][0].unwrap());
        assert!(study.orders[0].unwrap() > 2.0);
        assert!(convergence_study(
            Scheme::HermiteGalerkin,
            &params,
            &pot,
            &spec,
            &[60, 30],
            2,
            1e-3,
            1e-8
        )
        .is_err());
    }
}
