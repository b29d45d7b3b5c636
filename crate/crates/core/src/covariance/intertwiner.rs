//! Existence and explicit form of isometric intertwiners between two
//! decomposed representations, plus a brute-force solver used as an oracle.
//!
//! With counting measures the density factor in the block form is identically
//! one, so an isometric intertwiner is exactly
//! `A = W_V (⊕_λ 1_{d_λ} ⊗ A_λ) W_U†` with each `A_λ: C^{m_λ} → C^{m'_λ}` an
//! isometry. It exists iff every irrep of `U` occurs in `V` with
//! `m'_λ ≥ m_λ`.

use std::collections::BTreeMap;

use rand::Rng;

use super::Intertwiner;
use crate::error::{structure, Deficit, Error, Result};
use crate::linalg::{c, identity, isometry_defect, kron, psd_kernel, random_isometry, CMatrix};
use crate::rep::{IsotypicDecomposition, UnitaryRep};
use crate::tolerance::Tolerances;

/// One `m'_λ × m_λ` isometry per irrep label of the source.
pub type IsometryChoice = BTreeMap<String, CMatrix>;

pub const DEFAULT_ORACLE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Existence {
    pub exists: bool,
    /// Irreps of the source that are missing from, or too rare in, the target.
    pub deficits: Vec<Deficit>,
}

fn check_compatible(source: &IsotypicDecomposition, target: &IsotypicDecomposition) -> Result<()> {
    if source.source().group() != target.source().group() {
        return Err(Error::Precondition("decompositions of representations of different groups".into()));
    }
    if source.catalog_labels() != target.catalog_labels() {
        return Err(Error::Precondition("decompositions use different irrep catalogs".into()));
    }
    Ok(())
}

pub fn intertwiner_exists(source: &IsotypicDecomposition, target: &IsotypicDecomposition) -> Result<Existence> {
    check_compatible(source, target)?;
    let deficits: Vec<Deficit> = source
        .blocks()
        .iter()
        .filter_map(|b| {
            let available = target.multiplicity(b.label());
            (available < b.multiplicity()).then(|| Deficit {
                label: b.label().to_string(),
                required: b.multiplicity(),
                available,
            })
        })
        .collect();
    Ok(Existence { exists: deficits.is_empty(), deficits })
}

fn require_existence(source: &IsotypicDecomposition, target: &IsotypicDecomposition) -> Result<()> {
    let existence = intertwiner_exists(source, target)?;
    if !existence.exists {
        return Err(Error::NoIntertwiner { deficits: existence.deficits });
    }
    Ok(())
}

/// `A_λ = [1; 0]` for every block.
pub fn canonical_choice(source: &IsotypicDecomposition, target: &IsotypicDecomposition) -> Result<IsometryChoice> {
    require_existence(source, target)?;
    Ok(source
        .blocks()
        .iter()
        .map(|b| {
            let rows = target.multiplicity(b.label());
            (b.label().to_string(), CMatrix::identity(rows, b.multiplicity()))
        })
        .collect())
}

/// Haar-random isometries for every block.
pub fn random_choice<R: Rng + ?Sized>(
    source: &IsotypicDecomposition,
    target: &IsotypicDecomposition,
    rng: &mut R,
) -> Result<IsometryChoice> {
    require_existence(source, target)?;
    Ok(source
        .blocks()
        .iter()
        .map(|b| {
            let rows = target.multiplicity(b.label());
            (b.label().to_string(), random_isometry(rows, b.multiplicity(), rng))
        })
        .collect())
}

/// `W_V (⊕_λ 1_{d_λ} ⊗ A_λ) W_U†` without isometry checks.
pub(crate) fn block_form(
    source: &IsotypicDecomposition,
    target: &IsotypicDecomposition,
    choice: &IsometryChoice,
) -> Result<CMatrix> {
    let mut middle = CMatrix::zeros(target.dim(), source.dim());
    for block in source.blocks() {
        let label = block.label();
        let a = choice.get(label).ok_or_else(|| Error::MissingBlock(label.to_string()))?;
        let to = target.block(label).ok_or_else(|| Error::NoIntertwiner {
            deficits: vec![Deficit { label: label.to_string(), required: block.multiplicity(), available: 0 }],
        })?;
        if a.shape() != (to.multiplicity(), block.multiplicity()) {
            return Err(structure(format!(
                "isometry for `{label}` has shape {:?}, expected {}x{}",
                a.shape(),
                to.multiplicity(),
                block.multiplicity()
            )));
        }
        let piece = kron(&identity(block.dim()), a);
        middle.view_mut((to.offset(), block.offset()), piece.shape()).copy_from(&piece);
    }
    Ok(target.basis() * middle * source.basis().adjoint())
}

pub fn build_intertwiner(
    source: &IsotypicDecomposition,
    target: &IsotypicDecomposition,
    choice: &IsometryChoice,
    tol: &Tolerances,
) -> Result<Intertwiner> {
    require_existence(source, target)?;
    for label in choice.keys() {
        if !source.catalog_labels().iter().any(|l| l == label) {
            return Err(structure(format!("isometry given for unknown irrep `{label}`")));
        }
    }
    for block in source.blocks() {
        let a = choice.get(block.label()).ok_or_else(|| Error::MissingBlock(block.label().to_string()))?;
        if a.ncols() == block.multiplicity() {
            let defect = isometry_defect(a);
            if defect > tol.construct {
                return Err(Error::NotIsometric { label: block.label().to_string(), defect });
            }
        }
    }
    let matrix = block_form(source, target, choice)?;
    let used: IsometryChoice = source
        .blocks()
        .iter()
        .map(|b| (b.label().to_string(), choice[b.label()].clone()))
        .collect();
    Ok(Intertwiner::with_blocks(matrix, source.clone(), target.clone(), used))
}

/// Basis of `{A : A U(g) = V(g) A ∀g}` from the kernel of the stacked
/// constraints `(U(g)ᵀ ⊗ 1 − 1 ⊗ V(g)) vec(A) = 0`.
///
/// Orthonormal in the Frobenius inner product.
pub fn solve_intertwiners(source: &UnitaryRep, target: &UnitaryRep, bound: usize) -> Result<Vec<CMatrix>> {
    if source.group() != target.group() {
        return Err(Error::Precondition("representations of different groups".into()));
    }
    let (du, dv) = (source.dim(), target.dim());
    if du > bound || dv > bound {
        return Err(Error::OracleBound { dim_source: du, dim_target: dv, bound });
    }
    let unknowns = du * dv;
    let mut gram = CMatrix::zeros(unknowns, unknowns);
    for g in source.group().elements() {
        let m = kron(&source.matrix(g).transpose(), &identity(dv)) - kron(&identity(du), target.matrix(g));
        gram += m.adjoint() * m;
    }
    // The Gram operator is 2|G|(1 − P) with P the averaging projector, so its
    // spectrum is {0, 2|G|}.
    let order = source.group().order() as f64;
    let kernel = psd_kernel(&gram, 1e-8 * order);
    Ok(kernel.iter().map(|v| CMatrix::from_column_slice(dv, du, v.as_slice()) * c(1.0, 0.0)).collect())
}
