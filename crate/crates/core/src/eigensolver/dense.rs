use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};
use num_traits::Float;

use super::banded::{bandwidths, BandLu};
use super::spectrum::Spectrum;
use crate::assembly::{AssembledSystem, DofLayout};
use crate::discretization::HermitePart;
use crate::error::{DiracError, Result};
use crate::scalar::{LinalgReal, Real};

/// How the dense pencil is reduced to a standard eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy<T> {
    /// Eigenvalues `mu` of `(lhs - shift rhs)^-1 rhs`, mapped back through
    /// `lambda = shift + 1/mu`. Accuracy concentrates around `shift`.
    ShiftInvert { shift: T },
    /// Eigenvalues of `rhs^-1 lhs` (Cholesky-reduced when symmetric).
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Bound-state eigenvalues need `|Im lambda| <= reality_tol |lambda|`.
    pub reality_tol: T,
    pub eigenvectors: bool,
    pub strategy: Strategy<T>,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            reality_tol: T::lit(1e-8),
            eigenvectors: false,
            strategy: Strategy::ShiftInvert { shift: T::zero() },
        }
    }
}

/// All eigenvalues of an assembled pencil with the default strategy.
pub fn solve<T: LinalgReal>(system: &AssembledSystem<T>, reality_tol: T) -> Result<Spectrum<T>> {
    solve_with(
        system,
        &SolverOptions {
            reality_tol,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_with<T: LinalgReal>(
    system: &AssembledSystem<T>,
    options: &SolverOptions<T>,
) -> Result<Spectrum<T>> {
    let mut spectrum = solve_pencil_impl(
        &system.lhs,
        &system.rhs,
        system.scheme.is_symmetric(),
        system.params.rest_energy(),
        options,
        Some(&system.layout),
    )?;
    spectrum.scheme = Some(system.scheme);
    Ok(spectrum)
}

/// Solves a bare pencil `lhs X = lambda rhs X`.
///
/// `symmetric` selects the symmetric-definite path (rhs must be positive
/// definite); `rest_energy` fixes the bound-state window.
pub fn solve_pencil<T: LinalgReal>(
    lhs: &DMatrix<T>,
    rhs: &DMatrix<T>,
    symmetric: bool,
    rest_energy: T,
    options: &SolverOptions<T>,
) -> Result<Spectrum<T>> {
    solve_pencil_impl(lhs, rhs, symmetric, rest_energy, options, None)
}

struct Eigenpairs<T: Real> {
    values: Vec<Complex<T>>,
    /// Vectors in scaled coordinates for the bound-state window, keyed by
    /// position in `values`.
    vectors: Vec<(usize, DVector<T>)>,
}

fn solve_pencil_impl<T: LinalgReal>(
    lhs: &DMatrix<T>,
    rhs: &DMatrix<T>,
    symmetric: bool,
    rest_energy: T,
    options: &SolverOptions<T>,
    layout: Option<&DofLayout>,
) -> Result<Spectrum<T>> {
    let n = lhs.nrows();
    if lhs.ncols() != n || rhs.nrows() != n || rhs.ncols() != n || n == 0 {
        return Err(DiracError::DimensionMismatch(format!(
            "pencil {}x{} / {}x{}",
            lhs.nrows(),
            lhs.ncols(),
            rhs.nrows(),
            rhs.ncols()
        )));
    }
    if !(options.reality_tol >= T::zero()) {
        return Err(DiracError::InvalidTolerance(
            options.reality_tol.to_f64_lossy(),
        ));
    }

    // Hermite slope unknowns scale like h^3 in the mass matrix; equilibrate.
    let scale = DVector::from_iterator(
        n,
        rhs.diagonal().iter().map(|&d| {
            let d = Float::abs(d);
            if d > T::zero() {
                T::one() / Float::sqrt(d)
            } else {
                T::one()
            }
        }),
    );
    let a = scaled(lhs, &scale);
    let b = scaled(rhs, &scale);
    let in_window = |v: T| v > -rest_energy && v < rest_energy;

    let pairs = if symmetric {
        symmetric_pairs(&a, &b, options, rest_energy, &in_window)?
    } else {
        general_pairs(&a, &b, options, rest_energy, layout, &in_window)?
    };

    let mut raw = Vec::with_capacity(n);
    let mut bound: Vec<(T, Option<DVector<T>>)> = Vec::new();
    let mut max_imag = T::zero();
    let mut vectors = pairs.vectors.into_iter().peekable();
    for (i, value) in pairs.values.iter().enumerate() {
        let vector = match vectors.peek() {
            Some((k, _)) if *k == i => vectors.next().map(|(_, v)| v),
            _ => None,
        };
        if !value.re.is_finite() {
            continue;
        }
        raw.push(value.re);
        if !in_window(value.re) {
            continue;
        }
        let im = Float::abs(value.im);
        if im > options.reality_tol * Float::abs(value.re) {
            return Err(DiracError::ComplexSpectrum {
                re: value.re.to_f64_lossy(),
                im: value.im.to_f64_lossy(),
            });
        }
        max_imag = Float::max(max_imag, im);
        let vector = vector.map(|v| normalise(v.component_mul(&scale), rhs, layout));
        bound.push((value.re, vector));
    }
    raw.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    bound.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));

    let eigenvectors = if options.eigenvectors {
        Some(
            bound
                .iter()
                .map(|(_, v)| v.clone().ok_or(DiracError::MissingEigenvectors))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(Spectrum {
        scheme: None,
        rest_energy,
        raw,
        bindings: bound.iter().map(|(v, _)| *v - rest_energy).collect(),
        max_imag,
        eigenvectors,
        layout: layout.copied(),
    })
}

fn scaled<T: LinalgReal>(m: &DMatrix<T>, s: &DVector<T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| s[i] * m[(i, j)] * s[j])
}

fn max_iterations(n: usize) -> usize {
    100 * n + 1000
}

/// Shifts tried in turn until `lhs - shift rhs` is safely nonsingular.
fn shift_candidates<T: Real>(shift: T, rest_energy: T) -> [T; 3] {
    let w = Float::max(rest_energy, T::one());
    [shift, shift + T::lit(0.173) * w, shift - T::lit(0.291) * w]
}

fn well_conditioned_lu<T: LinalgReal>(
    m: DMatrix<T>,
) -> Option<nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>> {
    let n = m.nrows();
    let lu = m.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let largest = diag
        .iter()
        .fold(T::zero(), |acc, &d| Float::max(acc, Float::abs(d)));
    let smallest = diag
        .iter()
        .fold(T::infinity(), |acc, &d| Float::min(acc, Float::abs(d)));
    let threshold = largest * T::epsilon() * T::from_count(n.max(1));
    (smallest > threshold).then_some(lu)
}

fn symmetric_pairs<T: LinalgReal>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    options: &SolverOptions<T>,
    rest_energy: T,
    in_window: &impl Fn(T) -> bool,
) -> Result<Eigenpairs<T>> {
    let n = a.nrows();
    let chol = b.clone().cholesky().ok_or(DiracError::SingularRhs)?;
    let l = chol.l();
    let eps = T::epsilon();

    let (mus, y, shift) = match options.strategy {
        Strategy::Direct => {
            let w = l.solve_lower_triangular(a).ok_or(DiracError::SingularRhs)?;
            let c = l
                .solve_lower_triangular(&w.transpose())
                .ok_or(DiracError::SingularRhs)?;
            let c = (&c + c.transpose()) * T::lit(0.5);
            let eig = SymmetricEigen::try_new(c, eps, max_iterations(n))
                .ok_or_else(|| DiracError::Decomposition("symmetric QR did not converge".into()))?;
            (eig.eigenvalues, eig.eigenvectors, None)
        }
        Strategy::ShiftInvert { shift } => {
            let mut found = None;
            for sigma in shift_candidates(shift, rest_energy) {
                if let Some(lu) = well_conditioned_lu(a - b * sigma) {
                    found = Some((lu, sigma));
                    break;
                }
            }
            let (lu, sigma) = found.ok_or_else(|| {
                DiracError::Decomposition("no admissible shift for the shifted pencil".into())
            })?;
            let x = lu
                .solve(&l)
                .ok_or_else(|| DiracError::Decomposition("shifted solve failed".into()))?;
            let c = l.transpose() * x;
            let c = (&c + c.transpose()) * T::lit(0.5);
            let eig = SymmetricEigen::try_new(c, eps, max_iterations(n))
                .ok_or_else(|| DiracError::Decomposition("symmetric QR did not converge".into()))?;
            (eig.eigenvalues, eig.eigenvectors, Some(sigma))
        }
    };

    let values: Vec<Complex<T>> = mus
        .iter()
        .map(|&mu| {
            let lambda = match shift {
                None => mu,
                Some(sigma) => sigma + T::one() / mu,
            };
            Complex::new(lambda, T::zero())
        })
        .collect();

    let mut vectors = Vec::new();
    if options.eigenvectors {
        for (i, value) in values.iter().enumerate() {
            if value.re.is_finite() && in_window(value.re) {
                let yi = y.column(i).into_owned();
                let x = l
                    .tr_solve_lower_triangular(&yi)
                    .ok_or(DiracError::SingularRhs)?;
                vectors.push((i, x));
            }
        }
    }
    Ok(Eigenpairs { values, vectors })
}

fn general_pairs<T: LinalgReal>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    options: &SolverOptions<T>,
    rest_energy: T,
    layout: Option<&DofLayout>,
    in_window: &impl Fn(T) -> bool,
) -> Result<Eigenpairs<T>> {
    let n = a.nrows();
    let eps = T::epsilon();
    let b_lu = well_conditioned_lu(b.clone()).ok_or(DiracError::SingularRhs)?;

    let (c, shift) = match options.strategy {
        Strategy::Direct => {
            let c = b_lu.solve(a).ok_or(DiracError::SingularRhs)?;
            (c, None)
        }
        Strategy::ShiftInvert { shift } => {
            let mut found = None;
            for sigma in shift_candidates(shift, rest_energy) {
                if let Some(lu) = well_conditioned_lu(a - b * sigma) {
                    found = Some((lu, sigma));
                    break;
                }
            }
            let (lu, sigma) = found.ok_or_else(|| {
                DiracError::Decomposition("no admissible shift for the shifted pencil".into())
            })?;
            let c = lu
                .solve(b)
                .ok_or_else(|| DiracError::Decomposition("shifted solve failed".into()))?;
            (c, Some(sigma))
        }
    };
    let schur = Schur::try_new(c, eps, max_iterations(n))
        .ok_or_else(|| DiracError::Decomposition("Schur iteration did not converge".into()))?;
    let values: Vec<Complex<T>> = schur
        .complex_eigenvalues()
        .iter()
        .map(|mu| match shift {
            None => *mu,
            Some(sigma) => {
                let inv = if mu.re.is_zero() && mu.im.is_zero() {
                    Complex::new(T::infinity(), T::zero())
                } else {
                    mu.inv()
                };
                Complex::new(sigma + inv.re, inv.im)
            }
        })
        .collect();

    let mut vectors = Vec::new();
    if options.eigenvectors {
        let order = node_major_order(n, layout);
        let (kl, ku) = bandwidths(n, |i, j| {
            let (p, q) = (order[i], order[j]);
            Float::abs(a[(p, q)]) + Float::abs(b[(p, q)])
        });
        for (i, value) in values.iter().enumerate() {
            if value.re.is_finite() && in_window(value.re) {
                vectors.push((i, inverse_iteration(a, b, value.re, &order, kl, ku)));
            }
        }
    }
    Ok(Eigenpairs { values, vectors })
}

/// Permutation grouping all unknowns of a node together, which makes the
/// assembled matrices banded.
fn node_major_order(n: usize, layout: Option<&DofLayout>) -> Vec<usize> {
    let Some(layout) = layout.filter(|l| l.size() == n) else {
        return (0..n).collect();
    };
    let cs = layout.component_size();
    let mut keyed: Vec<((usize, usize, usize), usize)> = (0..n)
        .map(|global| {
            let component = global / cs;
            let (node, part) = layout
                .node_of(global % cs)
                .expect("every local index maps to a node");
            let part = usize::from(part == HermitePart::Slope);
            ((node, component, part), global)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, g)| g).collect()
}

fn inverse_iteration<T: LinalgReal>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    lambda: T,
    order: &[usize],
    kl: usize,
    ku: usize,
) -> DVector<T> {
    let n = a.nrows();
    let lu = BandLu::factor(n, kl, ku, |i, j| {
        let (p, q) = (order[i], order[j]);
        a[(p, q)] - lambda * b[(p, q)]
    });
    let mut v = DVector::from_fn(n, |i, _| {
        T::one() + T::lit(0.5) * Float::sin(T::from_count(i + 1))
    });
    for _ in 0..3 {
        let w = b * &v;
        let mut permuted: Vec<T> = order.iter().map(|&p| w[p]).collect();
        lu.solve_in_place(&mut permuted);
        for (k, &p) in order.iter().enumerate() {
            v[p] = permuted[k];
        }
        let norm = v.amax();
        if norm > T::zero() && norm.is_finite() {
            v /= norm;
        }
    }
    v
}

/// Unit rhs-norm, largest large-component value entry positive.
fn normalise<T: LinalgReal>(
    mut x: DVector<T>,
    rhs: &DMatrix<T>,
    layout: Option<&DofLayout>,
) -> DVector<T> {
    let quad = x.dot(&(rhs * &x));
    let norm = if quad > T::zero() {
        Float::sqrt(quad)
    } else {
        x.norm()
    };
    if norm > T::zero() {
        x /= norm;
    }
    let head = layout.map_or(x.len(), |l| l.interior());
    let pivot = (0..head).fold(0, |best, i| {
        if Float::abs(x[i]) > Float::abs(x[best]) {
            i
        } else {
            best
        }
    });
    if x[pivot] < T::zero() {
        x = -x;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(strategy: Strategy<f64>) -> SolverOptions<f64> {
        SolverOptions {
            reality_tol: 1e-8,
            eigenvectors: true,
            strategy,
        }
    }

    #[test]
    fn diagonal_pencils() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0]));
        let id = DMatrix::identity(2, 2);
        for strategy in [Strategy::Direct, Strategy::ShiftInvert { shift: 0.0 }] {
            for symmetric in [true, false] {
                let s = solve_pencil(&a, &id, symmetric, 10.0, &options(strategy)).unwrap();
                assert!((s.raw[0] - 2.0).abs() < 1e-14 && (s.raw[1] - 3.0).abs() < 1e-14);
                let b = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0]));
                let s = solve_pencil(&id, &b, symmetric, 10.0, &options(strategy)).unwrap();
                assert!((s.raw[0] - 0.25).abs() < 1e-14 && (s.raw[1] - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_rhs_rejected() {
        let a = DMatrix::identity(2, 2);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        for symmetric in [true, false] {
            assert!(matches!(
                solve_pencil(&a, &b, symmetric, 10.0, &SolverOptions::default()),
                Err(DiracError::SingularRhs)
            ));
        }
    }

    #[test]
    fn complex_eigenvalues_rejected_inside_window() {
        // rotation generator: eigenvalues 1 +- 2i
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -2.0, 1.0]);
        let id = DMatrix::identity(2, 2);
        assert!(matches!(
            solve_pencil(&a, &id, false, 10.0, &SolverOptions::default()),
            Err(DiracError::ComplexSpectrum { .. })
        ));
        // outside the window the pair is simply discarded
        let s = solve_pencil(&a, &id, false, 0.5, &SolverOptions::default()).unwrap();
        assert!(s.bindings.is_empty());
    }

    #[test]
    fn eigenvectors_satisfy_the_pencil() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.5, 3.0, 1.0, 0.0, 0.2, 5.0]);
        let b = DMatrix::from_row_slice(3, 3, &[2.0, 0.1, 0.0, 0.0, 1.0, 0.1, 0.0, 0.0, 1.5]);
        let s = solve_pencil(
            &a,
            &b,
            false,
            100.0,
            &options(Strategy::ShiftInvert { shift: 0.0 }),
        )
        .unwrap();
        assert_eq!(s.bindings.len(), 3);
        for k in 0..3 {
            let x = s.eigenvector(k).unwrap();
            let r = &a * x - (&b * x) * s.lambda(k);
            assert!(r.norm() < 1e-12, "residual {}", r.norm());
        }
    }
}
