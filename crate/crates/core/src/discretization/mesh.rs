use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// How the interior nodes of a [`Mesh`] were placed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Grading<T> {
    /// `x_i = a + (b - a) (exp(gamma i / (n + 1)) - 1) / (exp(gamma) - 1)`.
    Exponential { gamma: T },
    /// Nodes supplied by the caller.
    Explicit,
}

/// Partition `a = x_0 < x_1 < ... < x_{n+1} = b` of the radial domain.
///
/// Nodes are indexed `0..=n+1`; element `k` (for `k` in `1..=n+1`) is
/// `I_k = [x_{k-1}, x_k]` with size `h_k = x_k - x_{k-1}`. Interior nodes
/// `1..=n` carry the unknowns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh<T> {
    nodes: Vec<T>,
    grading: Grading<T>,
}

impl<T: Real> Mesh<T> {
    /// Exponentially graded mesh with `interior` nodes clustered towards `a`.
    pub fn exponential(a: T, b: T, interior: usize, gamma: T) -> Result<Self> {
        if !(a > T::zero() && b > a && b.is_finite()) {
            return Err(DiracError::InvalidDomain {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        if interior < 1 {
            return Err(DiracError::InvalidCount(format!(
                "a mesh needs at least one interior node, got {interior}"
            )));
        }
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(DiracError::InvalidGrading(gamma.to_f64_lossy()));
        }

        let intervals = T::from_count(interior + 1);
        let denominator = gamma.exp_m1();
        let mut nodes = Vec::with_capacity(interior + 2);
        nodes.push(a);
        for i in 1..=interior {
            let ratio = (gamma * T::from_count(i) / intervals).exp_m1() / denominator;
            nodes.push(a + (b - a) * ratio);
        }
        nodes.push(b);

        let mesh = Self {
            nodes,
            grading: Grading::Exponential { gamma },
        };
        // Tiny gamma with huge n could in principle collapse two nodes.
        mesh.check_monotone()?;
        Ok(mesh)
    }

    /// Mesh from explicit nodes (at least three, strictly increasing).
    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(DiracError::InvalidCount(format!(
                "a mesh needs at least one interior node, got {} nodes in total",
                nodes.len()
            )));
        }
        let mesh = Self {
            nodes,
            grading: Grading::Explicit,
        };
        mesh.check_monotone()?;
        Ok(mesh)
    }

    /// Uniform mesh with `interior` nodes on `[a, b]`.
    pub fn uniform(a: T, b: T, interior: usize) -> Result<Self> {
        if !(b > a) {
            return Err(DiracError::InvalidDomain {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        let intervals = T::from_count(interior + 1);
        let mut nodes: Vec<T> = (0..=interior + 1)
            .map(|i| a + (b - a) * T::from_count(i) / intervals)
            .collect();
        nodes[interior + 1] = b;
        Self::from_nodes(nodes)
    }

    fn check_monotone(&self) -> Result<()> {
        for (i, pair) in self.nodes.windows(2).enumerate() {
            if !(pair[1] > pair[0]) || !pair[1].is_finite() {
                return Err(DiracError::NonMonotoneNodes { index: i + 1 });
            }
        }
        Ok(())
    }

    pub fn a(&self) -> T {
        self.nodes[0]
    }

    pub fn b(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of interior nodes `n`.
    pub fn interior_count(&self) -> usize {
        self.nodes.len() - 2
    }

    /// Number of elements `n + 1`.
    pub fn element_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn grading(&self) -> Grading<T> {
        self.grading
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Node `x_i`, `i` in `0..=n+1`. Panics when out of range.
    pub fn node(&self, i: usize) -> T {
        self.nodes[i]
    }

    /// Element size `h_k = x_k - x_{k-1}`, `k` in `1..=n+1`. Panics when out of range.
    pub fn h(&self, k: usize) -> T {
        assert!(
            (1..=self.element_count()).contains(&k),
            "element index {k} out of range"
        );
        self.nodes[k] - self.nodes[k - 1]
    }

    /// Endpoints of element `k`.
    pub fn element(&self, k: usize) -> (T, T) {
        assert!(
            (1..=self.element_count()).contains(&k),
            "element index {k} out of range"
        );
        (self.nodes[k - 1], self.nodes[k])
    }

    /// Checked element index validation.
    pub fn check_element(&self, k: usize) -> Result<()> {
        if (1..=self.element_count()).contains(&k) {
            Ok(())
        } else {
            Err(DiracError::IndexOutOfRange {
                what: "element",
                index: k,
                lo: 1,
                hi: self.element_count(),
            })
        }
    }

    /// Element sizes `h_1, ..., h_{n+1}`.
    pub fn sizes(&self) -> Vec<T> {
        self.nodes.windows(2).map(|p| p[1] - p[0]).collect()
    }

    /// Element containing `x`; a node belongs to the element on its left
    /// (`x_0` belongs to element 1).
    pub fn locate(&self, x: T) -> Result<usize> {
        if !(x >= self.a() && x <= self.b()) {
            return Err(DiracError::OutsideDomain {
                x: x.to_f64_lossy(),
                a: self.a().to_f64_lossy(),
                b: self.b().to_f64_lossy(),
            });
        }
        let first_not_below = self.nodes.partition_point(|&node| node < x);
        Ok(first_not_below.max(1))
    }
}

/// Domain and grading of an exponential mesh, without the node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec<T> {
    pub a: T,
    pub b: T,
    pub gamma: T,
}

impl<T: Real> MeshSpec<T> {
    pub fn new(a: T, b: T, gamma: T) -> Self {
        Self { a, b, gamma }
    }

    pub fn build(&self, interior: usize) -> Result<Mesh<T>> {
        Mesh::exponential(self.a, self.b, interior, self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let mesh = Mesh::<f64>::exponential(1e-5, 50.0, 100, 6.0).unwrap();
        assert_eq!(mesh.a(), 1e-5);
        assert_eq!(mesh.b(), 50.0);
        assert_eq!(mesh.interior_count(), 100);
        assert_eq!(mesh.element_count(), 101);
    }

    #[test]
    fn small_gamma_tends_to_uniform_midpoint() {
        let (a, b) = (1.0, std::f64::consts::E);
        let mesh = Mesh::<f64>::exponential(a, b, 1, 1e-9).unwrap();
        assert!((mesh.node(1) - 0.5 * (a + b)).abs() < 1e-8);
    }

    #[test]
    fn three_interior_nodes_give_increasing_sizes() {
        let mesh = Mesh::<f64>::exponential(1e-5, 50.0, 3, 6.0).unwrap();
        let h = mesh.sizes();
        assert_eq!(h.len(), 4);
        assert!(h.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn node_fifty_matches_direct_evaluation() {
        // Closed-form node computed independently:
        // 1e-5 + (50 - 1e-5) * (exp(6 * 50 / 101) - 1) / (exp(6) - 1)
        let mesh = Mesh::<f64>::exponential(1e-5, 50.0, 100, 6.0).unwrap();
        let expected = 2.298_268_317_325_077_5;
        assert!((mesh.node(50) - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            Mesh::<f64>::exponential(0.0, 1.0, 3, 6.0),
            Err(DiracError::InvalidDomain { .. })
        ));
        assert!(matches!(
            Mesh::<f64>::exponential(2.0, 1.0, 3, 6.0),
            Err(DiracError::InvalidDomain { .. })
        ));
        assert!(matches!(
            Mesh::<f64>::exponential(1e-5, 1.0, 0, 6.0),
            Err(DiracError::InvalidCount(_))
        ));
        assert!(matches!(
            Mesh::<f64>::exponential(1e-5, 1.0, 4, 0.0),
            Err(DiracError::InvalidGrading(_))
        ));
        assert!(matches!(
            Mesh::<f64>::from_nodes(vec![0.0, 1.0, 1.0, 2.0]),
            Err(DiracError::NonMonotoneNodes { index: 2 })
        ));
    }

    #[test]
    fn locate_uses_left_element_at_nodes() {
        let mesh = Mesh::<f64>::from_nodes(vec![0.0, 1.0, 3.0, 4.0]).unwrap();
        assert_eq!(mesh.locate(0.0).unwrap(), 1);
        assert_eq!(mesh.locate(1.0).unwrap(), 1);
        assert_eq!(mesh.locate(1.5).unwrap(), 2);
        assert_eq!(mesh.locate(3.0).unwrap(), 2);
        assert_eq!(mesh.locate(4.0).unwrap(), 3);
        assert!(mesh.locate(4.5).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let mesh = Mesh::<f32>::exponential(1e-3, 10.0, 20, 4.0).unwrap();
        assert!(mesh.sizes().windows(2).all(|p| p[1] > p[0]));
        assert_eq!(mesh.b(), 10.0);
    }
}
