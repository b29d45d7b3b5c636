//! Quantum reference frames: covariant POVMs on `S = G` obtained by
//! compressing the position measure of `m` copies of the regular
//! representation, their densities and quotient marginals.

mod relative;

pub use relative::{
    commutation_witness, convolve, extend_to_product, relative_density, scalar_convolution, CommutationWitness,
    FrameBundle, JointState, ProductExtension, RelativeDensity, RelativeObservable,
};

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covariance::{
    build_intertwiner, canonical_choice, compress, intertwiner_exists, is_projective, random_choice,
    verify_covariance, CovarianceSystem, ImprimitivitySystem, Intertwiner, IsometryChoice, Povm,
};
use crate::error::{structure, Error, Result};
use crate::group::{CosetSpace, FiniteGroup, GroupAction, Subgroup};
use crate::linalg::{distance, hermiticity_defect, kron, kron_vec, min_eigenvalue, CMatrix, CVector};
use crate::rep::{decompose, induce, IrrepCatalog, IsotypicDecomposition, UnitaryRep};
use crate::report::Report;
use crate::tolerance::Tolerances;

/// A pure or mixed state of a frame.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameState {
    Pure(CVector),
    Mixed(CMatrix),
}

impl FrameState {
    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Mixed(m) => m.nrows(),
        }
    }

    /// Unit norm (pure) or unit trace, hermitian and positive (mixed).
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        match self {
            Self::Pure(v) => {
                let norm = v.norm();
                if (norm - 1.0).abs() > tol.construct {
                    return Err(Error::Unnormalized(norm));
                }
            }
            Self::Mixed(m) => {
                if !m.is_square() {
                    return Err(structure("density operator is not square"));
                }
                let trace = m.trace();
                if (trace.re - 1.0).abs() > tol.construct || trace.im.abs() > tol.construct {
                    return Err(Error::Unnormalized(trace.norm()));
                }
                if hermiticity_defect(m) > tol.construct {
                    return Err(Error::Precondition("density operator is not hermitian".into()));
                }
                let lowest = min_eigenvalue(m);
                if lowest < -tol.verify {
                    return Err(Error::Precondition(format!("density operator has eigenvalue {lowest:.3e}")));
                }
            }
        }
        Ok(())
    }

    pub fn density_matrix(&self) -> CMatrix {
        match self {
            Self::Pure(v) => v * v.adjoint(),
            Self::Mixed(m) => m.clone(),
        }
    }

    /// `x ↦ ⟨τ(x)⟩` in this state.
    pub fn probabilities(&self, povm: &Povm) -> Result<Vec<f64>> {
        match self {
            Self::Pure(v) => povm.expectation(v),
            Self::Mixed(m) => povm.expectation_mixed(m),
        }
    }

    /// `W φ` or `W ρ W†`.
    pub fn transformed(&self, w: &CMatrix) -> Self {
        match self {
            Self::Pure(v) => Self::Pure(w * v),
            Self::Mixed(m) => Self::Mixed(w * m * w.adjoint()),
        }
    }

    /// `self ⊗ other`, pure when both factors are.
    pub fn tensor(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Pure(a), Self::Pure(b)) => Self::Pure(kron_vec(a, b)),
            _ => Self::Mixed(kron(&self.density_matrix(), &other.density_matrix())),
        }
    }
}

/// How the per-irrep isometries `A_λ` of a frame are chosen. Every choice
/// yields a covariant observable.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameChoice {
    /// `A_λ = [1; 0]`.
    Canonical,
    /// Haar-random isometries from a seeded generator.
    Random(u64),
    Explicit(IsometryChoice),
}

/// `⌈m_λ / d_λ⌉` maximized over the irreps present, at least 1.
pub fn minimal_copies(source: &IsotypicDecomposition) -> usize {
    source.blocks().iter().map(|b| b.multiplicity().div_ceil(b.dim())).max().unwrap_or(0).max(1)
}

/// `m` copies of the regular representation with the canonical position
/// measure on `G`, already decomposed.
#[derive(Debug, Clone)]
pub struct PositionSpace {
    copies: usize,
    system: ImprimitivitySystem,
    decomposition: IsotypicDecomposition,
}

impl PositionSpace {
    pub fn new(catalog: &IrrepCatalog, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::Precondition("a frame needs at least one copy of the regular representation".into()));
        }
        let group = catalog.group().clone();
        let translation = GroupAction::left_translation(group.clone());
        let cs = CosetSpace::from_action(&translation, group.identity())?;
        let little = Arc::new(cs.subgroup().to_group());
        let system = induce(&cs, &UnitaryRep::trivial(little, copies))?;
        let decomposition = decompose(system.rep(), catalog)?;
        Ok(Self { copies, system, decomposition })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.system.rep().group()
    }

    pub fn system(&self) -> &ImprimitivitySystem {
        &self.system
    }

    pub fn decomposition(&self) -> &IsotypicDecomposition {
        &self.decomposition
    }

    /// Compresses the position measure along an isometric intertwiner from
    /// `source` into this space.
    pub fn build(
        &self,
        source: &IsotypicDecomposition,
        choice: &FrameChoice,
        tol: &Tolerances,
    ) -> Result<FrameObservable> {
        let existence = intertwiner_exists(source, &self.decomposition)?;
        if !existence.exists {
            return Err(Error::DeficientFrame {
                copies: self.copies,
                minimal_copies: minimal_copies(source),
                deficits: existence.deficits,
            });
        }
        let isometries = match choice {
            FrameChoice::Canonical => canonical_choice(source, &self.decomposition)?,
            FrameChoice::Random(seed) => {
                random_choice(source, &self.decomposition, &mut ChaCha8Rng::seed_from_u64(*seed))?
            }
            FrameChoice::Explicit(given) => given.clone(),
        };
        let intertwiner = build_intertwiner(source, &self.decomposition, &isometries, tol)?;
        let povm = compress(&intertwiner, self.system.measure(), tol)?;
        let system = CovarianceSystem::new(self.system.action().clone(), source.source().clone(), povm)?;
        let observable = FrameObservable { copies: self.copies, intertwiner, system, position: self.system.clone() };
        if let Some(bad) = observable.verify(tol).failures().next() {
            return Err(Error::Precondition(format!(
                "frame observable fails `{}` by {:.3e}",
                bad.axiom, bad.worst_violation
            )));
        }
        Ok(observable)
    }
}

/// Covariant POVM `τ(g) = A† E(g) A` on `S = G` for a frame carrying `U`.
#[derive(Debug, Clone)]
pub struct FrameObservable {
    copies: usize,
    intertwiner: Intertwiner,
    system: CovarianceSystem,
    position: ImprimitivitySystem,
}

/// Decomposes `rep`, checks that it embeds into `copies` regular copies and
/// compresses the position measure.
pub fn build_frame_observable(
    rep: &UnitaryRep,
    catalog: &IrrepCatalog,
    copies: usize,
    choice: &FrameChoice,
    tol: &Tolerances,
) -> Result<FrameObservable> {
    let source = decompose(rep, catalog)?;
    PositionSpace::new(catalog, copies)?.build(&source, choice, tol)
}

impl FrameObservable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.system.rep().group()
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn intertwiner(&self) -> &Intertwiner {
        &self.intertwiner
    }

    pub fn isometries(&self) -> &IsometryChoice {
        self.intertwiner.isometries().expect("frame intertwiners are built from blocks")
    }

    pub fn rep(&self) -> &UnitaryRep {
        self.system.rep()
    }

    pub fn povm(&self) -> &Povm {
        self.system.povm()
    }

    /// The observable as a covariance system under left translation.
    pub fn system(&self) -> &CovarianceSystem {
        &self.system
    }

    /// The imprimitivity system it was compressed from.
    pub fn position(&self) -> &ImprimitivitySystem {
        &self.position
    }

    pub fn verify(&self, tol: &Tolerances) -> Report {
        verify_covariance(&self.system, tol)
    }

    pub fn is_projective(&self, tol: &Tolerances) -> bool {
        is_projective(self.povm(), tol)
    }
}

/// A physical frame: its representation (decomposed) and its state.
#[derive(Debug, Clone)]
pub struct QuantumFrame {
    label: String,
    decomposition: IsotypicDecomposition,
    state: FrameState,
}

impl QuantumFrame {
    pub fn new(
        label: impl Into<String>,
        decomposition: IsotypicDecomposition,
        state: FrameState,
        tol: &Tolerances,
    ) -> Result<Self> {
        if state.dim() != decomposition.dim() {
            return Err(structure(format!(
                "state of dimension {} for a frame of dimension {}",
                state.dim(),
                decomposition.dim()
            )));
        }
        state.validate(tol)?;
        Ok(Self { label: label.into(), decomposition, state })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rep(&self) -> &UnitaryRep {
        self.decomposition.source()
    }

    pub fn decomposition(&self) -> &IsotypicDecomposition {
        &self.decomposition
    }

    pub fn state(&self) -> &FrameState {
        &self.state
    }

    /// The same frame moved by `U(g)`.
    pub fn translated(&self, g: usize) -> Self {
        Self { state: self.state.transformed(self.rep().matrix(g)), ..self.clone() }
    }
}

fn same_rep(a: &UnitaryRep, b: &UnitaryRep, tol: f64) -> bool {
    a.group() == b.group()
        && a.dim() == b.dim()
        && a.matrices().iter().zip(b.matrices()).all(|(x, y)| distance(x, y) <= tol)
}

/// `ρ(g) = ⟨φ, τ(g) φ⟩`.
pub fn frame_density(frame: &QuantumFrame, observable: &FrameObservable, tol: &Tolerances) -> Result<Vec<f64>> {
    if !same_rep(frame.rep(), observable.rep(), tol.verify) {
        return Err(structure(format!(
            "frame `{}` carries a different representation from the observable",
            frame.label()
        )));
    }
    frame.state().probabilities(observable.povm())
}

/// Pushes the frame POVM forward to `G/H`: `τ'(gH) = Σ_{h∈H} τ(gh)`.
///
/// The result is covariant under the action of `G` on left cosets.
pub fn marginalize_to_quotient(observable: &FrameObservable, subgroup: &Subgroup) -> Result<CovarianceSystem> {
    if subgroup.group() != observable.group() {
        return Err(Error::Precondition("subgroup of a different group".into()));
    }
    let (action, coset_of) = GroupAction::on_left_cosets(subgroup);
    let povm = observable.povm().pushforward(&coset_of, action.space_size())?;
    CovarianceSystem::new(action, observable.rep().clone(), povm)
}
