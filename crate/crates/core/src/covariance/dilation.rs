//! Covariant dilation of a covariance system to an imprimitivity system, and
//! the compression `τ(x) = A† E(x) A` going the other way.

use super::intertwiner::{block_form, IsometryChoice};
use super::{verify_covariance, CovarianceSystem, ImprimitivitySystem, Povm, SpectralMeasure};
use crate::error::{structure, Error, Result};
use crate::linalg::{c, distance, isometry_defect, psd_sqrt, rank, CMatrix, CVector, ONE};
use crate::report::{AxiomCheck, Report};
use crate::rep::{IsotypicDecomposition, UnitaryRep};
use crate::tolerance::Tolerances;

/// An operator `A: H → H'` meant to satisfy `A U(g) = V(g) A` and `A†A = 1`.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    matrix: CMatrix,
    source: UnitaryRep,
    target: UnitaryRep,
    blocks: Option<Blocks>,
}

/// Per-irrep parametrization `A = W_V (⊕_λ 1_{d_λ} ⊗ A_λ) W_U†`.
#[derive(Debug, Clone)]
struct Blocks {
    source: IsotypicDecomposition,
    target: IsotypicDecomposition,
    isometries: IsometryChoice,
}

impl Intertwiner {
    /// Shape-checked only; see [`Self::verify`].
    pub fn new(matrix: CMatrix, source: UnitaryRep, target: UnitaryRep) -> Result<Self> {
        if source.group() != target.group() {
            return Err(structure("intertwiner between representations of different groups"));
        }
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(structure(format!(
                "intertwiner has shape {:?}, expected {}x{}",
                matrix.shape(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(Self { matrix, source, target, blocks: None })
    }

    pub(crate) fn with_blocks(
        matrix: CMatrix,
        source: IsotypicDecomposition,
        target: IsotypicDecomposition,
        isometries: IsometryChoice,
    ) -> Self {
        Self {
            matrix,
            source: source.source().clone(),
            target: target.source().clone(),
            blocks: Some(Blocks { source, target, isometries }),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &UnitaryRep {
        &self.source
    }

    pub fn target(&self) -> &UnitaryRep {
        &self.target
    }

    pub fn source_decomposition(&self) -> Option<&IsotypicDecomposition> {
        self.blocks.as_ref().map(|b| &b.source)
    }

    pub fn target_decomposition(&self) -> Option<&IsotypicDecomposition> {
        self.blocks.as_ref().map(|b| &b.target)
    }

    /// The per-irrep isometries `A_λ`, when built from a block choice.
    pub fn isometries(&self) -> Option<&IsometryChoice> {
        self.blocks.as_ref().map(|b| &b.isometries)
    }

    /// `max_g ‖A U(g) − V(g) A‖_F`.
    pub fn intertwining_defect(&self) -> f64 {
        self.source
            .group()
            .elements()
            .map(|g| distance(&(&self.matrix * self.source.matrix(g)), &(self.target.matrix(g) * &self.matrix)))
            .fold(0.0, f64::max)
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        let mut report = Report {
            checks: vec![
                AxiomCheck::threshold("intertwining", self.intertwining_defect(), tol.verify),
                AxiomCheck::threshold("isometry", isometry_defect(&self.matrix), tol.verify),
            ],
        };
        if let Some(b) = &self.blocks {
            let rebuilt = block_form(&b.source, &b.target, &b.isometries);
            let defect = rebuilt.map_or(f64::INFINITY, |m| distance(&m, &self.matrix));
            report.push(AxiomCheck::threshold("block_form", defect, tol.verify));
        }
        report
    }
}

/// `τ(x) = A† E(x) A`.
pub fn compress(intertwiner: &Intertwiner, measure: &SpectralMeasure, tol: &Tolerances) -> Result<Povm> {
    let a = intertwiner.matrix();
    if measure.dim() != a.nrows() {
        return Err(structure(format!(
            "spectral measure on dimension {} but intertwiner maps into dimension {}",
            measure.dim(),
            a.nrows()
        )));
    }
    let defect = isometry_defect(a);
    if defect > tol.verify {
        return Err(Error::Precondition(format!("intertwiner is not isometric (defect {defect:.3e})")));
    }
    let a_dag = a.adjoint();
    Povm::new((0..measure.space_size()).map(|x| &a_dag * measure.projector(x) * a).collect())
}

/// Block dilation of a covariance system.
///
/// `H' = ⊕_{x∈S} H`, `E(x)` the projector onto block `x`,
/// `(Aφ)_x = τ(x)^{1/2} φ` (roots transported along orbits) and
/// `[V(g)ψ]_x = U(g) ψ_{Λ(g⁻¹)x}`. The result
/// satisfies `AU = VA`, `A†A = 1` and `A†E(x)A = τ(x)`; it is not minimal in
/// general (see [`dilation_span_dim`]).
pub fn dilate(system: &CovarianceSystem, tol: &Tolerances) -> Result<(ImprimitivitySystem, Intertwiner)> {
    let report = verify_covariance(system, tol);
    if let Some(bad) = report.failures().next() {
        return Err(Error::Precondition(format!(
            "not a covariance system: {} violated by {:.3e}",
            bad.axiom, bad.worst_violation
        )));
    }
    let (action, rep, povm) = (system.action(), system.rep(), system.povm());
    let d = povm.dim();
    let points = povm.space_size();
    let big = d * points;

    let mut a = CMatrix::zeros(big, d);
    for (x, root) in covariant_roots(system, tol)?.iter().enumerate() {
        a.view_mut((x * d, 0), (d, d)).copy_from(root);
    }

    let matrices = action
        .group()
        .elements()
        .map(|g| {
            let mut v = CMatrix::zeros(big, big);
            for x_src in 0..points {
                let x = action.apply(g, x_src);
                v.view_mut((x * d, x_src * d), (d, d)).copy_from(rep.matrix(g));
            }
            v
        })
        .collect();
    let dilated_rep = UnitaryRep::new_unchecked(rep.group().clone(), matrices);

    let projectors = (0..points)
        .map(|x| {
            let mut p = CMatrix::zeros(big, big);
            for k in 0..d {
                p[(x * d + k, x * d + k)] = ONE;
            }
            p
        })
        .collect();
    let measure = SpectralMeasure::from_trusted(projectors);
    let imprimitivity = ImprimitivitySystem::new(action.clone(), dilated_rep.clone(), measure)?;
    let intertwiner = Intertwiner::new(a, rep.clone(), dilated_rep)?;

    let recovered = compress(&intertwiner, imprimitivity.measure(), tol)?;
    let roundtrip = (0..points).map(|x| distance(recovered.atom(x), povm.atom(x))).fold(0.0, f64::max);
    let intertwining = intertwiner.intertwining_defect();
    if roundtrip > tol.verify || intertwining > tol.verify {
        return Err(Error::Precondition(format!(
            "dilation postconditions failed: round-trip {roundtrip:.3e}, intertwining {intertwining:.3e}"
        )));
    }
    Ok((imprimitivity, intertwiner))
}

/// `τ(x)^{1/2}` for every outcome, taken at the least point `x₀` of each orbit,
/// averaged over its stabilizer and moved along the orbit by `U(g)`.
///
/// Square roots are not Lipschitz at zero, so independent roots of
/// rank-deficient atoms would break `AU = VA` at the level of the square
/// root of rounding noise. Transport keeps it at rounding level.
fn covariant_roots(system: &CovarianceSystem, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let (action, rep, povm) = (system.action(), system.rep(), system.povm());
    let group = action.group();
    let mut roots: Vec<Option<CMatrix>> = vec![None; povm.space_size()];
    for x0 in 0..povm.space_size() {
        if roots[x0].is_some() {
            continue;
        }
        let root = psd_sqrt(povm.atom(x0), tol.verify).map_err(|lowest| {
            Error::Precondition(format!("atom {x0} has eigenvalue {lowest:.3e}; no square root"))
        })?;
        let stabilizer: Vec<usize> = group.elements().filter(|&h| action.apply(h, x0) == x0).collect();
        let mut averaged = CMatrix::zeros(root.nrows(), root.ncols());
        for &h in &stabilizer {
            averaged += rep.matrix(h) * &root * rep.matrix(h).adjoint();
        }
        averaged /= c(stabilizer.len() as f64, 0.0);
        for g in group.elements() {
            let x = action.apply(g, x0);
            if roots[x].is_none() {
                roots[x] = Some(rep.matrix(g) * &averaged * rep.matrix(g).adjoint());
            }
        }
    }
    Ok(roots.into_iter().map(|r| r.expect("every point lies in some orbit")).collect())
}

/// Dimension of `span{E(x) A φ}`, the carrier of the minimal dilation.
pub fn dilation_span_dim(intertwiner: &Intertwiner, measure: &SpectralMeasure) -> usize {
    let a = intertwiner.matrix();
    let (big, d) = a.shape();
    let mut stacked = CMatrix::zeros(big, d * measure.space_size());
    for x in 0..measure.space_size() {
        stacked.view_mut((0, x * d), (big, d)).copy_from(&(measure.projector(x) * a));
    }
    rank(&stacked, 1e-9)
}

/// `ρ(x) = ‖E(x) A φ‖²`.
pub fn probability_density(
    state: &CVector,
    intertwiner: &Intertwiner,
    measure: &SpectralMeasure,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let a = intertwiner.matrix();
    if state.len() != a.ncols() {
        return Err(structure(format!("state of length {} for source dimension {}", state.len(), a.ncols())));
    }
    if measure.dim() != a.nrows() {
        return Err(structure("spectral measure does not act on the intertwiner's target"));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > tol.construct {
        return Err(Error::Unnormalized(norm));
    }
    let psi = a * state;
    Ok((0..measure.space_size()).map(|x| (measure.projector(x) * &psi).norm_squared()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::group::{cyclic, GroupAction};
    use crate::linalg::identity;
    use crate::rep::regular_representation;

    fn z2() -> Arc<crate::group::FiniteGroup> {
        Arc::new(cyclic(2).unwrap())
    }

    #[test]
    fn z2_symmetric_embedding_compresses_to_halves() {
        let g = z2();
        let reg = regular_representation(&g);
        let triv = UnitaryRep::trivial(g.clone(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = CMatrix::from_column_slice(2, 1, &[c(s, 0.0), c(s, 0.0)]);
        let inter = Intertwiner::new(a, triv, reg).unwrap();
        assert!(inter.verify(&Tolerances::default()).passed());
        let e = SpectralMeasure::from_trusted(vec![
            CMatrix::from_row_slice(2, 2, &[ONE, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), ONE]),
        ]);
        let tau = compress(&inter, &e, &Tolerances::default()).unwrap();
        assert!((tau.atom(0)[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((tau.atom(1)[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_intertwiner_returns_measure() {
        let g = z2();
        let reg = regular_representation(&g);
        let act = GroupAction::left_translation(g.clone());
        let cs = crate::group::CosetSpace::from_action(&act, 0).unwrap();
        let sys = crate::rep::induce(&cs, &UnitaryRep::trivial(Arc::new(cs.subgroup().to_group()), 1)).unwrap();
        let inter = Intertwiner::new(identity(2), reg.clone(), reg).unwrap();
        let tau = compress(&inter, sys.measure(), &Tolerances::default()).unwrap();
        assert_eq!(&tau, sys.measure().as_povm());
    }

    #[test]
    fn uniform_povm_with_trivial_rep_dilates() {
        let g = z2();
        let act = GroupAction::left_translation(g.clone());
        let triv = UnitaryRep::trivial(g, 1);
        let half = CMatrix::from_element(1, 1, c(0.5, 0.0));
        let sys = CovarianceSystem::new(act, triv, Povm::new(vec![half.clone(), half]).unwrap()).unwrap();
        let tol = Tolerances::default();
        let (imp, a) = dilate(&sys, &tol).unwrap();
        assert_eq!(imp.rep().dim(), 2);
        // A maps into the symmetric subspace (1,1)/√2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a.matrix()[(0, 0)] - c(s, 0.0)).norm() < 1e-12);
        assert!((a.matrix()[(1, 0)] - c(s, 0.0)).norm() < 1e-12);
        let back = compress(&a, imp.measure(), &tol).unwrap();
        assert!(distance(back.atom(0), sys.povm().atom(0)) < 1e-12);
        assert!(imp.verify(&tol).passed());
        assert_eq!(dilation_span_dim(&a, imp.measure()), 2);
    }

    #[test]
    fn dilate_rejects_non_covariant() {
        let g = z2();
        let act = GroupAction::left_translation(g.clone());
        let triv = UnitaryRep::trivial(g, 1);
        let povm = Povm::new(vec![
            CMatrix::from_element(1, 1, c(0.3, 0.0)),
            CMatrix::from_element(1, 1, c(0.7, 0.0)),
        ])
        .unwrap();
        let sys = CovarianceSystem::new(act, triv, povm).unwrap();
        assert!(matches!(dilate(&sys, &Tolerances::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn density_rejects_unnormalized_state() {
        let g = z2();
        let reg = regular_representation(&g);
        let inter = Intertwiner::new(identity(2), reg.clone(), reg).unwrap();
        let e = SpectralMeasure::from_trusted(vec![identity(2)]);
        let phi = CVector::from_vec(vec![ONE, ONE]);
        assert!(matches!(
            probability_density(&phi, &inter, &e, &Tolerances::default()),
            Err(Error::Unnormalized(_))
        ));
    }
}
