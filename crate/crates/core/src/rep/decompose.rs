//! Isotypic (central) decomposition `U ≅ ⊕_λ D^λ ⊗ 1_{m_λ}`.

use num_complex::Complex64;

use super::{character_inner, Irrep, IrrepCatalog, UnitaryRep};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, distance, identity, isometry_defect, kron, orthonormalize, CMatrix, CVector};
use crate::report::{AxiomCheck, Report};
use crate::tolerance::{Tolerances, MULTIPLICITY_ROUNDING};

/// Rank threshold when extracting the multiplicity space from a projector.
const PROJECTOR_RANK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct IsotypicBlock {
    irrep: Irrep,
    multiplicity: usize,
    offset: usize,
}

impl IsotypicBlock {
    pub fn label(&self) -> &str {
        self.irrep.label()
    }

    pub fn irrep(&self) -> &Irrep {
        &self.irrep
    }

    /// `d_λ`.
    pub fn dim(&self) -> usize {
        self.irrep.dim()
    }

    /// `m_λ`, the dimension of the multiplicity space.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// First column of this block in the decomposition basis.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn size(&self) -> usize {
        self.dim() * self.multiplicity
    }
}

/// A unitary `W` with `W† U(g) W = ⊕_λ D^λ(g) ⊗ 1_{m_λ}`.
///
/// Within block `λ`, column `offset + i·m_λ + α` carries irrep component `i`
/// of multiplicity copy `α`.
#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    source: UnitaryRep,
    catalog_labels: Vec<String>,
    blocks: Vec<IsotypicBlock>,
    basis: CMatrix,
}

fn integer_multiplicity(value: Complex64, label: &str) -> Result<usize> {
    let rounded = value.re.round();
    if (value - c(rounded, 0.0)).norm() > MULTIPLICITY_ROUNDING || rounded < 0.0 {
        return Err(Error::InconsistentCatalog(format!(
            "multiplicity of `{label}` is {value}, not a non-negative integer"
        )));
    }
    Ok(rounded as usize)
}

fn check_group(rep: &UnitaryRep, catalog: &IrrepCatalog) -> Result<()> {
    if rep.group() != catalog.group() {
        return Err(Error::Precondition(format!(
            "representation of {} decomposed with a catalog for {}",
            rep.group().name(),
            catalog.group().name()
        )));
    }
    Ok(())
}

/// `m_λ = ⟨χ_λ, χ_U⟩`.
pub fn multiplicity(rep: &UnitaryRep, irrep: &Irrep) -> Result<usize> {
    if rep.group() != irrep.rep().group() {
        return Err(Error::Precondition("irrep and representation belong to different groups".into()));
    }
    integer_multiplicity(character_inner(irrep.character(), &rep.character()), irrep.label())
}

/// Splits `rep` into isotypic blocks using the matrix-element projectors
/// `P^λ_{ij} = (d_λ/|G|) Σ_g D^λ_{ij}(g)* U(g)`.
pub fn decompose(rep: &UnitaryRep, catalog: &IrrepCatalog) -> Result<IsotypicDecomposition> {
    check_group(rep, catalog)?;
    let worst_unitarity = rep.matrices().iter().map(isometry_defect).fold(0.0, f64::max);
    if worst_unitarity > Tolerances::default().verify {
        return Err(Error::Precondition(format!("representation is not unitary ({worst_unitarity:.3e})")));
    }

    let order = rep.group().order() as f64;
    let dim = rep.dim();
    let character = rep.character();
    let mut blocks = Vec::new();
    let mut columns: Vec<CVector> = Vec::with_capacity(dim);

    for irrep in catalog.irreps() {
        let m = integer_multiplicity(character_inner(irrep.character(), &character), irrep.label())?;
        if m == 0 {
            continue;
        }
        let d = irrep.dim();
        if columns.len() + d * m > dim {
            return Err(Error::InconsistentCatalog("multiplicities exceed the dimension".into()));
        }
        // P_{i0} for each row index i of the irrep.
        let scale = c(d as f64 / order, 0.0);
        let projectors: Vec<CMatrix> = (0..d)
            .map(|i| {
                let mut p = CMatrix::zeros(dim, dim);
                for g in rep.group().elements() {
                    p += rep.matrix(g) * irrep.matrix(g)[(i, 0)].conj();
                }
                p * scale
            })
            .collect();
        let seeds = orthonormalize((0..dim).map(|k| projectors[0].column(k).into_owned()), PROJECTOR_RANK);
        if seeds.len() != m {
            return Err(Error::InconsistentCatalog(format!(
                "projector for `{}` has rank {} but the character gives multiplicity {m}",
                irrep.label(),
                seeds.len()
            )));
        }
        let offset = columns.len();
        columns.resize(offset + d * m, CVector::zeros(dim));
        for (i, p) in projectors.iter().enumerate() {
            for (alpha, v) in seeds.iter().enumerate() {
                columns[offset + i * m + alpha] = p * v;
            }
        }
        blocks.push(IsotypicBlock { irrep: irrep.clone(), multiplicity: m, offset });
    }

    if columns.len() != dim {
        return Err(Error::InconsistentCatalog(format!(
            "catalog accounts for dimension {} of {dim}",
            columns.len()
        )));
    }
    let mut basis = CMatrix::zeros(dim, dim);
    for (k, col) in columns.iter().enumerate() {
        basis.set_column(k, col);
    }

    let decomposition = IsotypicDecomposition {
        source: rep.clone(),
        catalog_labels: catalog.labels().into_iter().map(String::from).collect(),
        blocks,
        basis,
    };
    let report = decomposition.verify(&Tolerances::default());
    if let Some(bad) = report.failures().next() {
        return Err(Error::InconsistentCatalog(format!(
            "decomposition check `{}` failed by {:.3e}",
            bad.axiom, bad.worst_violation
        )));
    }
    Ok(decomposition)
}

impl IsotypicDecomposition {
    pub fn source(&self) -> &UnitaryRep {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn blocks(&self) -> &[IsotypicBlock] {
        &self.blocks
    }

    pub fn block(&self, label: &str) -> Option<&IsotypicBlock> {
        self.blocks.iter().find(|b| b.label() == label)
    }

    /// `m_λ`, zero for irreps absent from the decomposition.
    pub fn multiplicity(&self, label: &str) -> usize {
        self.block(label).map_or(0, IsotypicBlock::multiplicity)
    }

    /// The unitary `W`.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn catalog_labels(&self) -> &[String] {
        &self.catalog_labels
    }

    /// `⊕_λ D^λ(g) ⊗ 1_{m_λ}`.
    pub fn block_matrix(&self, g: usize) -> CMatrix {
        let parts: Vec<CMatrix> =
            self.blocks.iter().map(|b| kron(b.irrep.matrix(g), &identity(b.multiplicity))).collect();
        block_diag(&parts)
    }

    /// `W (⊕_λ D^λ(g) ⊗ 1) W†`, which should equal `U(g)`.
    pub fn reconstruct(&self, g: usize) -> CMatrix {
        &self.basis * self.block_matrix(g) * self.basis.adjoint()
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        let unitary = isometry_defect(&self.basis);
        let block = self
            .source
            .group()
            .elements()
            .map(|g| distance(&(self.basis.adjoint() * self.source.matrix(g) * &self.basis), &self.block_matrix(g)))
            .fold(0.0, f64::max);
        let counted: usize = self.blocks.iter().map(IsotypicBlock::size).sum();
        Report {
            checks: vec![
                AxiomCheck::threshold("basis_unitary", unitary, tol.verify),
                AxiomCheck::threshold("block_diagonal", block, tol.verify),
                AxiomCheck::count("dimension", counted.abs_diff(self.dim())),
            ],
        }
    }
}
