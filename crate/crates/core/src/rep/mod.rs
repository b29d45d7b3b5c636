//! Unitary representations of finite groups, irrep catalogs, isotypic
//! decomposition, and regular/induced representations.

mod catalog;
mod decompose;
mod induce;

pub use catalog::{builtin_catalog, cyclic_catalog, dihedral_catalog, quaternion_catalog, symmetric_catalog, Irrep, IrrepCatalog};
pub use decompose::{decompose, multiplicity, IsotypicBlock, IsotypicDecomposition};
pub use induce::{induce, regular_representation};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{structure, Error, Result};
use crate::group::{FiniteGroup, GroupAction};
use crate::linalg::{block_diag, distance, identity, isometry_defect, kron, CMatrix, ONE, ZERO};
use crate::report::{AxiomCheck, Report};
use crate::tolerance::{Tolerances, CHARACTER_EQUALITY};

const IDENTITY_EXACT: f64 = 1e-12;

/// A unitary representation `g ↦ M(g)`, one `dim × dim` matrix per element.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<CMatrix>,
}

/// Unitarity, homomorphism and identity checks for a candidate representation.
pub fn verify_rep(group: &FiniteGroup, matrices: &[CMatrix], tol: &Tolerances) -> Result<Report> {
    if matrices.len() != group.order() {
        return Err(structure(format!("{} matrices for a group of order {}", matrices.len(), group.order())));
    }
    let dim = matrices.first().map_or(0, |m| m.nrows());
    if dim == 0 {
        return Err(structure("representation dimension must be positive"));
    }
    if let Some((g, m)) = matrices.iter().enumerate().find(|(_, m)| m.shape() != (dim, dim)) {
        return Err(structure(format!("matrix for element {g} has shape {:?}, expected {dim}x{dim}", m.shape())));
    }
    let unitarity = matrices.iter().map(isometry_defect).fold(0.0, f64::max);
    let mut hom = 0.0f64;
    for a in group.elements() {
        for b in group.elements() {
            hom = hom.max(distance(&(&matrices[a] * &matrices[b]), &matrices[group.mul(a, b)]));
        }
    }
    let ident = distance(&matrices[group.identity()], &identity(dim));
    Ok(Report {
        checks: vec![
            AxiomCheck::threshold("unitarity", unitarity, tol.verify),
            AxiomCheck::threshold("homomorphism", hom, tol.verify),
            AxiomCheck::threshold("identity", ident, IDENTITY_EXACT),
        ],
    })
}

impl UnitaryRep {
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerances(group, matrices, &Tolerances::default())
    }

    pub fn with_tolerances(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let report = verify_rep(&group, &matrices, tol)?;
        if let Some(bad) = report.failures().next() {
            return Err(Error::InvalidRep(format!("{} violated by {:.3e}", bad.axiom, bad.worst_violation)));
        }
        let dim = matrices[0].nrows();
        Ok(Self { group, dim, matrices })
    }

    /// For matrices that are representations by construction.
    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>) -> Self {
        let dim = matrices[0].nrows();
        debug_assert_eq!(matrices.len(), group.order());
        Self { group, dim, matrices }
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![identity(dim); group.order()];
        Self::new_unchecked(group, matrices)
    }

    /// Permutation representation of an action: `M(g) e_x = e_{Λ(g)x}`.
    pub fn permutation(action: &GroupAction) -> Self {
        let n = action.space_size();
        let matrices = action
            .group()
            .elements()
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for x in 0..n {
                    m[(action.apply(g, x), x)] = ONE;
                }
                m
            })
            .collect();
        Self::new_unchecked(action.group().clone(), matrices)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        verify_rep(&self.group, &self.matrices, tol).expect("shapes fixed at construction")
    }

    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::Precondition("representations of different groups".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| block_diag([a, b])).collect();
        Ok(Self::new_unchecked(self.group.clone(), matrices))
    }

    pub fn direct_sum_all<'a, I>(reps: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a UnitaryRep>,
    {
        let mut iter = reps.into_iter();
        let first = iter.next().ok_or_else(|| structure("direct sum of nothing"))?.clone();
        iter.try_fold(first, |acc, r| acc.direct_sum(r))
    }

    /// `M(g) ⊗ N(g)`, with `self` as the left tensor factor.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| kron(a, b)).collect();
        Ok(Self::new_unchecked(self.group.clone(), matrices))
    }

    /// `M(g) ⊗ 1_m`: `m` copies, laid out so index `i·m + α` is component `i` of copy `α`.
    pub fn copies(&self, m: usize) -> Self {
        let one = identity(m);
        let matrices = self.matrices.iter().map(|a| kron(a, &one)).collect();
        Self::new_unchecked(self.group.clone(), matrices)
    }

    /// `W M(g) W†` for a unitary `W`.
    pub fn conjugate(&self, w: &CMatrix) -> Result<Self> {
        if w.shape() != (self.dim, self.dim) {
            return Err(structure(format!("conjugating matrix has shape {:?}", w.shape())));
        }
        if isometry_defect(w) > 1e-9 {
            return Err(Error::Precondition("conjugating matrix is not unitary".into()));
        }
        let matrices = self.matrices.iter().map(|m| w * m * w.adjoint()).collect();
        Ok(Self::new_unchecked(self.group.clone(), matrices))
    }

    /// Equivalence via character equality.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.group == other.group && characters_equal(&self.character(), &other.character())
    }
}

pub fn characters_equal(a: &[Complex64], b: &[Complex64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= CHARACTER_EQUALITY)
}

/// `⟨χ_a, χ_b⟩ = (1/|G|) Σ_g χ_a(g)* χ_b(g)`.
pub fn character_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let n = a.len() as f64;
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y) / n
}
