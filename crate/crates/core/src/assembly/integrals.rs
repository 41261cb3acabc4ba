use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::layout::DofLayout;
use super::tau::StabilizationProfile;
use crate::discretization::{
    hat_shapes, hermite_shapes, BasisFamily, BasisKind, HermitePart, Mesh, QuadratureRule, Shape,
};
use crate::error::{DiracError, Result};
use crate::physics::PotentialModel;
use crate::scalar::Real;

/// Weight function `q` inside an element integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weight {
    One,
    Potential,
}

/// Selects the integral `int phi_trial^(s) phi_test^(r) x^(-t) q(x) dx`.
///
/// Rows of an assembled block belong to the test function, columns to the
/// trial function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockMatrixSpec {
    pub r: u8,
    pub s: u8,
    pub t: u8,
    pub q: Weight,
}

impl BlockMatrixSpec {
    pub const M000: Self = Self::literal(0, 0, 0, Weight::One);
    pub const M100: Self = Self::literal(1, 0, 0, Weight::One);
    pub const M010: Self = Self::literal(0, 1, 0, Weight::One);
    pub const M110: Self = Self::literal(1, 1, 0, Weight::One);
    pub const M001: Self = Self::literal(0, 0, 1, Weight::One);
    pub const M101: Self = Self::literal(1, 0, 1, Weight::One);
    pub const M000_V: Self = Self::literal(0, 0, 0, Weight::Potential);
    pub const M100_V: Self = Self::literal(1, 0, 0, Weight::Potential);

    const fn literal(r: u8, s: u8, t: u8, q: Weight) -> Self {
        Self { r, s, t, q }
    }

    pub fn new(r: u8, s: u8, t: u8, q: Weight) -> Result<Self> {
        for order in [r, s, t] {
            if order > 1 {
                return Err(DiracError::UnsupportedOrder(order));
            }
        }
        Ok(Self { r, s, t, q })
    }

    fn pick<T: Copy>(order: u8, shape: &Shape<T>) -> T {
        if order == 0 {
            shape.value
        } else {
            shape.d1
        }
    }
}

/// A single global basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisDof {
    Hat(usize),
    Hermite(usize, HermitePart),
}

impl BasisDof {
    fn node(self) -> usize {
        match self {
            Self::Hat(j) | Self::Hermite(j, _) => j,
        }
    }

    fn eval<T: Real>(self, basis: &BasisFamily<'_, T>, x: T, order: u8) -> Result<T> {
        match self {
            Self::Hat(j) => basis.eval_hat(j, x, order),
            Self::Hermite(j, part) => basis.eval_hermite(j, part, x, order),
        }
    }
}

fn weight_at<T: Real>(spec: BlockMatrixSpec, potential: &PotentialModel<T>, x: T) -> Result<T> {
    let q = match spec.q {
        Weight::One => T::one(),
        Weight::Potential => potential.value(x)?,
    };
    Ok(if spec.t == 1 { q / x } else { q })
}

/// One entry of a block matrix, integrated element by element through the
/// global basis evaluation.
pub fn element_integral<T: Real>(
    spec: BlockMatrixSpec,
    basis: &BasisFamily<'_, T>,
    potential: &PotentialModel<T>,
    test: BasisDof,
    trial: BasisDof,
) -> Result<T> {
    let expected = basis.kind();
    for dof in [test, trial] {
        let kind = match dof {
            BasisDof::Hat(_) => BasisKind::LinearHat,
            BasisDof::Hermite(..) => BasisKind::CubicHermite,
        };
        if kind != expected {
            return Err(DiracError::BasisMismatch(
                "dof does not belong to the basis",
            ));
        }
    }
    let (i, j) = (test.node(), trial.node());
    if i.abs_diff(j) >= 2 {
        return Ok(T::zero());
    }
    let mesh = basis.mesh();
    // supports: elements node and node + 1
    let first = i.max(j);
    let last = i.min(j) + 1;
    let mut total = T::zero();
    for k in first..=last {
        let (lo, hi) = mesh.element(k);
        let rule = QuadratureRule::on_interval(lo, hi);
        for (&x, &w) in rule.points.iter().zip(rule.weights.iter()) {
            let psi = test.eval(basis, x, spec.r)?;
            let phi = trial.eval(basis, x, spec.s)?;
            total += w * psi * phi * weight_at(spec, potential, x)?;
        }
    }
    Ok(total)
}

/// Shape functions active at one quadrature point, tagged with their index
/// inside a component block (`None` for eliminated boundary dofs).
pub(crate) struct PointShapes<T> {
    pub entries: [(Option<usize>, Shape<T>); 4],
    pub len: usize,
}

impl<T: Real> PointShapes<T> {
    pub fn active(&self) -> impl Iterator<Item = (usize, &Shape<T>)> {
        self.entries[..self.len]
            .iter()
            .filter_map(|(idx, shape)| idx.map(|i| (i, shape)))
    }
}

/// Calls `visit(k, x, w, shapes)` for every quadrature point of every element.
pub(crate) fn for_each_point<T: Real>(
    mesh: &Mesh<T>,
    layout: &DofLayout,
    mut visit: impl FnMut(usize, T, T, &PointShapes<T>) -> Result<()>,
) -> Result<()> {
    for k in 1..=mesh.element_count() {
        let (lo, hi) = mesh.element(k);
        let h = hi - lo;
        let rule = QuadratureRule::on_interval(lo, hi);
        for q in 0..4 {
            let t = rule.unit_points[q];
            let shapes = match layout.kind() {
                BasisKind::LinearHat => {
                    let [left, right] = hat_shapes(t, h);
                    PointShapes {
                        entries: [
                            (layout.local_index(k - 1, HermitePart::Value), left),
                            (layout.local_index(k, HermitePart::Value), right),
                            (None, left),
                            (None, right),
                        ],
                        len: 2,
                    }
                }
                BasisKind::CubicHermite => {
                    let [v0, s0, v1, s1] = hermite_shapes(t, h);
                    PointShapes {
                        entries: [
                            (layout.local_index(k - 1, HermitePart::Value), v0),
                            (layout.local_index(k - 1, HermitePart::Slope), s0),
                            (layout.local_index(k, HermitePart::Value), v1),
                            (layout.local_index(k, HermitePart::Slope), s1),
                        ],
                        len: 4,
                    }
                }
            };
            visit(k, rule.points[q], rule.weights[q], &shapes)?;
        }
    }
    Ok(())
}

/// Assembles one component block `MM^q_rst` over the whole mesh.
///
/// With `tau`, each element contribution is scaled by that element's `tau_k`.
pub fn assemble_block<T: Real>(
    spec: BlockMatrixSpec,
    mesh: &Mesh<T>,
    layout: &DofLayout,
    potential: &PotentialModel<T>,
    tau: Option<&StabilizationProfile<T>>,
) -> Result<DMatrix<T>> {
    layout.check_mesh(mesh)?;
    if let Some(profile) = tau {
        profile.check_mesh(mesh)?;
    }
    let size = layout.component_size();
    let mut block = DMatrix::zeros(size, size);
    for_each_point(mesh, layout, |k, x, w, shapes| {
        let mut scale = w * weight_at(spec, potential, x)?;
        if let Some(profile) = tau {
            scale *= profile.element(k);
        }
        for (row, psi) in shapes.active() {
            let test = BlockMatrixSpec::pick(spec.r, psi);
            for (col, phi) in shapes.active() {
                block[(row, col)] += scale * test * BlockMatrixSpec::pick(spec.s, phi);
            }
        }
        Ok(())
    })?;
    Ok(block)
}

/// Exact row `j` (value) and row `j + n` (slope) of the polynomial Hermite
/// blocks.
///
/// Column order in each array: `j-1, j, j+1, j-1+n, j+n, j+1+n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRows<T> {
    pub m000: [[T; 6]; 2],
    pub m100: [[T; 6]; 2],
    pub m010: [[T; 6]; 2],
    pub m110: [[T; 6]; 2],
}

/// Analytic element integrals around interior node `j` (`1..=n`).
///
/// Entries in the `j-1` columns only involve element `I_j` and therefore
/// depend on `h_j`; the remaining ones follow the same pattern on `I_{j+1}`.
pub fn closed_form_element_entries<T: Real>(mesh: &Mesh<T>, j: usize) -> Result<ClosedFormRows<T>> {
    let n = mesh.interior_count();
    if !(1..=n).contains(&j) {
        return Err(DiracError::IndexOutOfRange {
            what: "node",
            index: j,
            lo: 1,
            hi: n,
        });
    }
    let l = |v: f64| T::lit(v);
    let (hl, hr) = (mesh.h(j), mesh.h(j + 1));
    let sum = hl + hr;
    let m000 = [
        [
            l(9.0 / 70.0) * hl,
            l(13.0 / 35.0) * sum,
            l(9.0 / 70.0) * hr,
            l(13.0 / 420.0) * hl * hl,
            l(11.0 / 210.0) * (hr * hr - hl * hl),
            -l(13.0 / 420.0) * hr * hr,
        ],
        [
            -l(13.0 / 420.0) * hl * hl,
            l(11.0 / 210.0) * (hr * hr - hl * hl),
            l(13.0 / 420.0) * hr * hr,
            -l(1.0 / 140.0) * hl * hl * hl,
            l(1.0 / 105.0) * (hr * hr * hr + hl * hl * hl),
            -l(1.0 / 140.0) * hr * hr * hr,
        ],
    ];
    let m100 = [
        [
            l(0.5),
            T::zero(),
            -l(0.5),
            l(0.1) * hl,
            -l(0.1) * sum,
            l(0.1) * hr,
        ],
        [
            -l(0.1) * hl,
            l(0.1) * sum,
            -l(0.1) * hr,
            -hl * hl / l(60.0),
            T::zero(),
            hr * hr / l(60.0),
        ],
    ];
    let m010 = [m100[0].map(|v| -v), m100[1].map(|v| -v)];
    let m110 = [
        [
            -l(1.2) / hl,
            l(1.2) * sum / (hr * hl),
            -l(1.2) / hr,
            -l(0.1),
            T::zero(),
            l(0.1),
        ],
        [
            l(0.1),
            T::zero(),
            -l(0.1),
            -hl / l(30.0),
            l(2.0 / 15.0) * sum,
            -hr / l(30.0),
        ],
    ];
    Ok(ClosedFormRows {
        m000,
        m100,
        m010,
        m110,
    })
}
