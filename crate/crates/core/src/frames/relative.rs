//! Tensor-product extension of non-interacting systems, convolution of
//! POVMs into relative observables, and the commutation witness for three
//! frames.
//!
//! A bundle with legs `0, 1, …, n−1` lives on `H_{n−1} ⊗ … ⊗ H_1 ⊗ H_0`,
//! so the two-leg case `[i, j]` is `H_j ⊗ H_i`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FrameState;
use crate::covariance::{covariance_defect, verify_povm, CovarianceSystem, Povm};
use crate::error::{structure, Error, Result};
use crate::group::{FiniteGroup, GroupAction};
use crate::linalg::{commutator, distance, frobenius, hermitian_part, identity, kron, CMatrix};
use crate::report::{AxiomCheck, Report};
use crate::rep::UnitaryRep;
use crate::tolerance::Tolerances;

/// Disjoint tensor legs commute up to rounding only.
const COMMUTATION_EXACT: f64 = 1e-12;

/// Non-interacting systems, each a covariance system for the same group.
#[derive(Debug, Clone)]
pub struct FrameBundle {
    labels: Vec<String>,
    legs: Vec<CovarianceSystem>,
    joint_rep: UnitaryRep,
}

impl FrameBundle {
    pub fn new(legs: Vec<(String, CovarianceSystem)>) -> Result<Self> {
        let first = legs.first().ok_or_else(|| structure("a bundle needs at least one system"))?;
        let group = first.1.rep().group().clone();
        if let Some((label, _)) = legs.iter().find(|(_, s)| s.rep().group() != &group) {
            return Err(structure(format!("system `{label}` is for a different group")));
        }
        let (labels, legs): (Vec<String>, Vec<CovarianceSystem>) = legs.into_iter().unzip();
        let mut joint_rep = legs[legs.len() - 1].rep().clone();
        for leg in legs.iter().rev().skip(1) {
            joint_rep = joint_rep.tensor(leg.rep())?;
        }
        Ok(Self { labels, legs, joint_rep })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.joint_rep.group()
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leg(&self, index: usize) -> &CovarianceSystem {
        &self.legs[index]
    }

    pub fn dim(&self) -> usize {
        self.joint_rep.dim()
    }

    /// `U(g) = U_{n−1}(g) ⊗ … ⊗ U_0(g)`.
    pub fn joint_rep(&self) -> &UnitaryRep {
        &self.joint_rep
    }

    fn check_leg(&self, index: usize) -> Result<()> {
        if index >= self.legs.len() {
            return Err(structure(format!("bundle has {} systems, no index {index}", self.legs.len())));
        }
        Ok(())
    }

    /// `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` in slot `index`.
    pub fn embed(&self, index: usize, op: &CMatrix) -> Result<CMatrix> {
        self.check_leg(index)?;
        let d = self.legs[index].rep().dim();
        if op.shape() != (d, d) {
            return Err(structure(format!("operator of shape {:?} for a system of dimension {d}", op.shape())));
        }
        let left: usize = self.legs[index + 1..].iter().map(|l| l.rep().dim()).product();
        let right: usize = self.legs[..index].iter().map(|l| l.rep().dim()).product();
        Ok(kron(&identity(left), &kron(op, &identity(right))))
    }

    /// The POVM of system `index` extended to the joint space.
    pub fn lift(&self, index: usize) -> Result<Povm> {
        self.check_leg(index)?;
        let atoms = self.legs[index].povm().atoms().iter().map(|a| self.embed(index, a)).collect::<Result<_>>()?;
        Povm::new(atoms)
    }

    /// `φ_{n−1} ⊗ … ⊗ φ_0`.
    pub fn product_state(&self, states: &[FrameState]) -> Result<FrameState> {
        if states.len() != self.legs.len() {
            return Err(structure(format!("{} states for {} systems", states.len(), self.legs.len())));
        }
        for (k, (state, leg)) in states.iter().zip(&self.legs).enumerate() {
            if state.dim() != leg.rep().dim() {
                return Err(structure(format!("state {k} has dimension {}, expected {}", state.dim(), leg.rep().dim())));
            }
        }
        let mut joint = states[states.len() - 1].clone();
        for state in states.iter().rev().skip(1) {
            joint = joint.tensor(state);
        }
        Ok(joint)
    }

    /// Observable of system `target` relative to the frame `reference`.
    pub fn relative(&self, reference: usize, target: usize, tol: &Tolerances) -> Result<RelativeObservable> {
        self.check_leg(reference)?;
        self.check_leg(target)?;
        if reference == target {
            return Err(Error::Precondition("a system cannot be referred to itself".into()));
        }
        let frame = &self.legs[reference];
        if !is_left_translation(frame.action()) {
            return Err(Error::Precondition(format!(
                "reference `{}` does not have outcomes in the group",
                self.labels[reference]
            )));
        }
        let mut relative = convolve(
            &self.lift(reference)?,
            &self.lift(target)?,
            self.legs[target].action(),
            &self.joint_rep,
            tol,
        )?;
        relative.factors = Some(Factors {
            legs: self.legs.iter().map(|l| l.povm().clone()).collect(),
            reference,
            target,
        });
        Ok(relative)
    }
}

fn is_left_translation(action: &GroupAction) -> bool {
    let g = action.group();
    action.space_size() == g.order() && g.elements().all(|a| g.elements().all(|b| action.apply(a, b) == g.mul(a, b)))
}

/// Two systems `i` (outcomes in `G`) and `j` (outcomes in `S`) extended to
/// `H_j ⊗ H_i`.
#[derive(Debug, Clone)]
pub struct ProductExtension {
    bundle: FrameBundle,
}

pub fn extend_to_product(reference: &CovarianceSystem, target: &CovarianceSystem) -> Result<ProductExtension> {
    let bundle = FrameBundle::new(vec![("i".into(), reference.clone()), ("j".into(), target.clone())])?;
    Ok(ProductExtension { bundle })
}

impl ProductExtension {
    pub fn bundle(&self) -> &FrameBundle {
        &self.bundle
    }

    pub fn joint_rep(&self) -> &UnitaryRep {
        self.bundle.joint_rep()
    }

    /// `τ̂_i(g) = 1_j ⊗ τ_i(g)`.
    pub fn reference(&self) -> Povm {
        self.bundle.lift(0).expect("leg 0 exists")
    }

    /// `τ̂_j(x) = τ_j(x) ⊗ 1_i`.
    pub fn target(&self) -> Povm {
        self.bundle.lift(1).expect("leg 1 exists")
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        let (hat_i, hat_j) = (self.reference(), self.target());
        let rep = self.joint_rep();
        Report {
            checks: vec![
                AxiomCheck::threshold(
                    "covariance_reference",
                    covariance_defect(self.bundle.leg(0).action(), rep, &hat_i),
                    tol.verify,
                ),
                AxiomCheck::threshold(
                    "covariance_target",
                    covariance_defect(self.bundle.leg(1).action(), rep, &hat_j),
                    tol.verify,
                ),
                AxiomCheck::threshold("commutation", max_commutator(&hat_i, &hat_j).0, COMMUTATION_EXACT),
            ],
        }
    }

    pub fn convolve(&self, tol: &Tolerances) -> Result<RelativeObservable> {
        self.bundle.relative(0, 1, tol)
    }
}

/// Largest `‖[a(x), b(y)]‖_F` and the pair attaining it.
fn max_commutator(a: &Povm, b: &Povm) -> (f64, (usize, usize)) {
    let mut best = (0.0, (0, 0));
    for (x, p) in a.atoms().iter().enumerate() {
        for (y, q) in b.atoms().iter().enumerate() {
            let norm = frobenius(&commutator(p, q));
            if norm > best.0 {
                best = (norm, (x, y));
            }
        }
    }
    best
}

/// `τ_ij(y) = Σ_g τ̂_i(g) τ̂_j(Λ(g) y)`.
///
/// Positivity needs the two ranges to commute, so non-commuting inputs are
/// refused.
pub fn convolve(
    reference: &Povm,
    target: &Povm,
    action: &GroupAction,
    joint_rep: &UnitaryRep,
    tol: &Tolerances,
) -> Result<RelativeObservable> {
    let group = action.group();
    if joint_rep.group() != group {
        return Err(structure("action and joint representation are for different groups"));
    }
    if reference.space_size() != group.order() {
        return Err(structure(format!(
            "reference POVM has {} outcomes, the group has {} elements",
            reference.space_size(),
            group.order()
        )));
    }
    if target.space_size() != action.space_size() {
        return Err(structure("target POVM and action have different outcome spaces"));
    }
    if reference.dim() != target.dim() || reference.dim() != joint_rep.dim() {
        return Err(structure("reference, target and joint representation act on different spaces"));
    }
    let (worst, _) = max_commutator(reference, target);
    if worst > tol.construct {
        return Err(Error::NonCommuting(worst));
    }
    let atoms = (0..action.space_size())
        .map(|y| {
            let sum = group
                .elements()
                .fold(CMatrix::zeros(reference.dim(), reference.dim()), |acc, g| {
                    acc + reference.atom(g) * target.atom(action.apply(g, y))
                });
            hermitian_part(&sum)
        })
        .collect();
    Ok(RelativeObservable {
        povm: Povm::new(atoms)?,
        joint_rep: joint_rep.clone(),
        action: action.clone(),
        factors: None,
    })
}

#[derive(Debug, Clone)]
struct Factors {
    legs: Vec<Povm>,
    reference: usize,
    target: usize,
}

/// A POVM on the joint space, invariant under the diagonal representation.
#[derive(Debug, Clone)]
pub struct RelativeObservable {
    povm: Povm,
    joint_rep: UnitaryRep,
    action: GroupAction,
    factors: Option<Factors>,
}

impl RelativeObservable {
    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn joint_rep(&self) -> &UnitaryRep {
        &self.joint_rep
    }

    /// Action on the outcome space of the target system.
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// `(reference, target)` leg indices when built from a bundle.
    pub fn legs(&self) -> Option<(usize, usize)> {
        self.factors.as_ref().map(|f| (f.reference, f.target))
    }

    /// `max_{g,y} ‖U(g) τ_ij(y) U(g)† − τ_ij(y)‖_F`.
    pub fn invariance_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for g in self.joint_rep.group().elements() {
            let u = self.joint_rep.matrix(g);
            let u_dag = u.adjoint();
            for atom in self.povm.atoms() {
                worst = worst.max(distance(&(u * atom * &u_dag), atom));
            }
        }
        worst
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        let mut report = verify_povm(&self.povm, tol);
        report.push(AxiomCheck::threshold("global_invariance", self.invariance_defect(), tol.verify));
        report
    }
}

/// State of all systems of a bundle.
#[derive(Debug, Clone, PartialEq)]
pub enum JointState {
    /// One state per leg, in leg order.
    Product(Vec<FrameState>),
    /// Any state of the joint space, possibly entangled.
    General(FrameState),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeDensity {
    /// `⟨ψ, τ_ij(y) ψ⟩`.
    pub operator: Vec<f64>,
    /// `Σ_g ρ_i(g) ρ_j(Λ(g) y)`, for product states of a bundle.
    pub scalar: Option<Vec<f64>>,
    /// `max_y |operator − scalar|`.
    pub discrepancy: Option<f64>,
}

/// `ρ_ij(y) = Σ_g ρ_i(g) ρ_j(Λ(g) y)`.
pub fn scalar_convolution(reference: &[f64], target: &[f64], action: &GroupAction) -> Result<Vec<f64>> {
    let group = action.group();
    if reference.len() != group.order() || target.len() != action.space_size() {
        return Err(structure("density lengths do not match the group and outcome space"));
    }
    Ok((0..action.space_size())
        .map(|y| group.elements().map(|g| reference[g] * target[action.apply(g, y)]).sum())
        .collect())
}

pub fn relative_density(
    relative: &RelativeObservable,
    state: &JointState,
    tol: &Tolerances,
) -> Result<RelativeDensity> {
    let dims: Option<Vec<usize>> = relative.factors.as_ref().map(|f| f.legs.iter().map(Povm::dim).collect());
    let joint = match state {
        JointState::General(s) => s.clone(),
        JointState::Product(states) => {
            let dims = dims
                .as_ref()
                .ok_or_else(|| Error::Precondition("product states need an observable built from a bundle".into()))?;
            if states.len() != dims.len() || states.iter().zip(dims).any(|(s, &d)| s.dim() != d) {
                return Err(structure("product state does not match the bundle's systems"));
            }
            let mut joint = states[states.len() - 1].clone();
            for s in states.iter().rev().skip(1) {
                joint = joint.tensor(s);
            }
            joint
        }
    };
    if joint.dim() != relative.povm.dim() {
        return Err(structure(format!(
            "joint state of dimension {} for an observable on dimension {}",
            joint.dim(),
            relative.povm.dim()
        )));
    }
    joint.validate(tol)?;
    let operator = joint.probabilities(&relative.povm)?;

    let scalar = match (state, &relative.factors) {
        (JointState::Product(states), Some(f)) => {
            let rho_i = states[f.reference].probabilities(&f.legs[f.reference])?;
            let rho_j = states[f.target].probabilities(&f.legs[f.target])?;
            Some(scalar_convolution(&rho_i, &rho_j, &relative.action)?)
        }
        _ => {
            log::warn!("joint state is not a product over a bundle; scalar convolution cross-check skipped");
            None
        }
    };
    let discrepancy =
        scalar.as_ref().map(|s| s.iter().zip(&operator).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    Ok(RelativeDensity { operator, scalar, discrepancy })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationWitness {
    /// `max ‖[τ_ik(x), τ_ij(y)]‖_F` over all atom pairs.
    pub norm: f64,
    /// The maximizing `(x, y)`.
    pub pair: (usize, usize),
    /// `max ‖[τ_i(g), τ_i(g')]‖_F` for the shared reference frame, if any.
    pub reference_commutator: Option<f64>,
    /// Whether the reference POVM is commutative, which forces `norm = 0`.
    pub sufficient_condition: Option<bool>,
}

/// Compares two relative observables on the same joint space, typically
/// two systems referred to one common frame.
pub fn commutation_witness(
    first: &RelativeObservable,
    second: &RelativeObservable,
    tol: &Tolerances,
) -> Result<CommutationWitness> {
    if first.povm.dim() != second.povm.dim() {
        return Err(structure("relative observables act on different joint spaces"));
    }
    let (norm, pair) = max_commutator(&first.povm, &second.povm);
    let shared = match (&first.factors, &second.factors) {
        (Some(a), Some(b)) if a.reference == b.reference && a.legs[a.reference] == b.legs[b.reference] => {
            Some(&a.legs[a.reference])
        }
        _ => None,
    };
    let reference_commutator = shared.map(|p| max_commutator(p, p).0);
    Ok(CommutationWitness {
        norm,
        pair,
        reference_commutator,
        sufficient_condition: reference_commutator.map(|r| r <= tol.construct),
    })
}
