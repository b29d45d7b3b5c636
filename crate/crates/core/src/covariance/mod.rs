//! POVMs on finite outcome spaces, spectral measures, and the covariance /
//! imprimitivity systems built from them.

mod dilation;
mod intertwiner;

pub use dilation::{compress, dilate, dilation_span_dim, probability_density, Intertwiner};
pub use intertwiner::{
    build_intertwiner, canonical_choice, intertwiner_exists, random_choice, solve_intertwiners, Existence,
    IsometryChoice, DEFAULT_ORACLE_BOUND,
};

use crate::error::{structure, Error, Result};
use crate::group::GroupAction;
use crate::linalg::{distance, frobenius, hermiticity_defect, identity, min_eigenvalue, CMatrix, CVector};
use crate::report::{AxiomCheck, Report};
use crate::rep::UnitaryRep;
use crate::tolerance::Tolerances;

/// A POVM on `{0, …, |S|−1}`: one positive operator per outcome, summing to 1.
///
/// Construction only checks shapes; use [`verify_povm`] for the axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    atoms: Vec<CMatrix>,
}

impl Povm {
    pub fn new(atoms: Vec<CMatrix>) -> Result<Self> {
        let first = atoms.first().ok_or_else(|| structure("POVM has no outcomes"))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(structure("POVM acts on a zero-dimensional space"));
        }
        if let Some((x, a)) = atoms.iter().enumerate().find(|(_, a)| a.shape() != (dim, dim)) {
            return Err(structure(format!("atom {x} has shape {:?}, expected {dim}x{dim}", a.shape())));
        }
        Ok(Self { dim, atoms })
    }

    pub fn space_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[CMatrix] {
        &self.atoms
    }

    pub fn atom(&self, x: usize) -> &CMatrix {
        &self.atoms[x]
    }

    pub fn total(&self) -> CMatrix {
        self.atoms.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, a| acc + a)
    }

    /// `x ↦ ⟨φ, τ(x) φ⟩`.
    pub fn expectation(&self, state: &CVector) -> Result<Vec<f64>> {
        if state.len() != self.dim {
            return Err(structure(format!("state of length {} for a POVM on dimension {}", state.len(), self.dim)));
        }
        Ok(self.atoms.iter().map(|a| state.dotc(&(a * state)).re).collect())
    }

    /// `x ↦ tr[ρ τ(x)]` for a density operator `ρ`.
    pub fn expectation_mixed(&self, density: &CMatrix) -> Result<Vec<f64>> {
        if density.shape() != (self.dim, self.dim) {
            return Err(structure(format!("density operator of shape {:?}", density.shape())));
        }
        Ok(self.atoms.iter().map(|a| (density * a).trace().re).collect())
    }

    /// Image measure under `map: S → T`: `τ'(y) = Σ_{map(x) = y} τ(x)`.
    pub fn pushforward(&self, map: &[usize], target_size: usize) -> Result<Povm> {
        if map.len() != self.space_size() {
            return Err(structure("pushforward map length differs from the outcome count"));
        }
        let mut atoms = vec![CMatrix::zeros(self.dim, self.dim); target_size];
        for (x, &y) in map.iter().enumerate() {
            let slot = atoms.get_mut(y).ok_or_else(|| structure(format!("map sends {x} outside the target")))?;
            *slot += &self.atoms[x];
        }
        Povm::new(atoms)
    }
}

/// Hermiticity, positivity and normalization.
pub fn verify_povm(povm: &Povm, tol: &Tolerances) -> Report {
    let herm = povm.atoms.iter().map(hermiticity_defect).fold(0.0, f64::max);
    let lowest = povm.atoms.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
    let norm = distance(&povm.total(), &identity(povm.dim));
    Report {
        checks: vec![
            AxiomCheck::threshold("hermitian", herm, tol.construct),
            AxiomCheck::threshold("positivity", (-lowest).max(0.0), tol.verify),
            AxiomCheck::threshold("normalization", norm, tol.verify),
        ],
    }
}

/// POVM axioms plus idempotency and mutual orthogonality of atoms.
pub fn verify_spectral(povm: &Povm, tol: &Tolerances) -> Report {
    let mut report = verify_povm(povm, tol);
    let idem = povm.atoms.iter().map(|p| distance(&(p * p), p)).fold(0.0, f64::max);
    let mut ortho = 0.0f64;
    for (x, p) in povm.atoms.iter().enumerate() {
        for q in &povm.atoms[x + 1..] {
            ortho = ortho.max(frobenius(&(p * q)));
        }
    }
    report.push(AxiomCheck::threshold("idempotent", idem, tol.verify));
    report.push(AxiomCheck::threshold("orthogonality", ortho, tol.verify));
    report
}

/// `τ(x)τ(y) = δ_{xy} τ(x)` for all pairs of atoms.
pub fn is_projective(povm: &Povm, tol: &Tolerances) -> bool {
    povm.atoms.iter().enumerate().all(|(x, p)| {
        povm.atoms.iter().enumerate().all(|(y, q)| {
            let prod = p * q;
            let dev = if x == y { distance(&prod, p) } else { frobenius(&prod) };
            dev <= tol.projective
        })
    })
}

/// A POVM whose atoms are mutually orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure(Povm);

impl SpectralMeasure {
    pub fn new(povm: Povm, tol: &Tolerances) -> Result<Self> {
        let report = verify_spectral(&povm, tol);
        if let Some(bad) = report.failures().next() {
            return Err(Error::Precondition(format!(
                "not a spectral measure: {} violated by {:.3e}",
                bad.axiom, bad.worst_violation
            )));
        }
        Ok(Self(povm))
    }

    /// Coordinate projectors that are spectral by construction.
    pub(crate) fn from_trusted(atoms: Vec<CMatrix>) -> Self {
        Self(Povm::new(atoms).expect("well-shaped projectors"))
    }

    pub fn as_povm(&self) -> &Povm {
        &self.0
    }

    pub fn into_povm(self) -> Povm {
        self.0
    }

    pub fn projector(&self, x: usize) -> &CMatrix {
        self.0.atom(x)
    }

    pub fn space_size(&self) -> usize {
        self.0.space_size()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// `max_{g,x} ‖U(g) τ(x) U(g)† − τ(Λ(g)x)‖_F`.
pub fn covariance_defect(action: &GroupAction, rep: &UnitaryRep, povm: &Povm) -> f64 {
    let mut worst = 0.0f64;
    for g in action.group().elements() {
        let u = rep.matrix(g);
        let u_dag = u.adjoint();
        for x in 0..povm.space_size() {
            let moved = u * povm.atom(x) * &u_dag;
            worst = worst.max(distance(&moved, povm.atom(action.apply(g, x))));
        }
    }
    worst
}

fn check_system_shapes(action: &GroupAction, rep: &UnitaryRep, povm: &Povm) -> Result<()> {
    if action.group() != rep.group() {
        return Err(structure("action and representation are for different groups"));
    }
    if action.space_size() != povm.space_size() {
        return Err(structure(format!(
            "action on {} points but POVM has {} outcomes",
            action.space_size(),
            povm.space_size()
        )));
    }
    if rep.dim() != povm.dim() {
        return Err(structure(format!("representation dimension {} but POVM dimension {}", rep.dim(), povm.dim())));
    }
    Ok(())
}

/// `(H, S, G, Λ, U, τ)` with `U(g) τ(x) U(g)† = τ(Λ(g)x)`.
#[derive(Debug, Clone)]
pub struct CovarianceSystem {
    action: GroupAction,
    rep: UnitaryRep,
    povm: Povm,
}

impl CovarianceSystem {
    /// Shape-checked only; see [`Self::verify`].
    pub fn new(action: GroupAction, rep: UnitaryRep, povm: Povm) -> Result<Self> {
        check_system_shapes(&action, &rep, &povm)?;
        Ok(Self { action, rep, povm })
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        verify_covariance(self, tol)
    }
}

/// POVM axioms plus the covariance identity.
pub fn verify_covariance(system: &CovarianceSystem, tol: &Tolerances) -> Report {
    let mut report = verify_povm(&system.povm, tol);
    report.push(AxiomCheck::threshold(
        "covariance",
        covariance_defect(&system.action, &system.rep, &system.povm),
        tol.verify,
    ));
    report
}

/// A covariance system whose POVM is a spectral measure.
#[derive(Debug, Clone)]
pub struct ImprimitivitySystem {
    action: GroupAction,
    rep: UnitaryRep,
    measure: SpectralMeasure,
}

impl ImprimitivitySystem {
    pub fn new(action: GroupAction, rep: UnitaryRep, measure: SpectralMeasure) -> Result<Self> {
        check_system_shapes(&action, &rep, measure.as_povm())?;
        Ok(Self { action, rep, measure })
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.measure
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        let mut report = verify_spectral(self.measure.as_povm(), tol);
        report.push(AxiomCheck::threshold(
            "covariance",
            covariance_defect(&self.action, &self.rep, self.measure.as_povm()),
            tol.verify,
        ));
        report
    }

    pub fn to_covariance(&self) -> CovarianceSystem {
        CovarianceSystem { action: self.action.clone(), rep: self.rep.clone(), povm: self.measure.as_povm().clone() }
    }
}
