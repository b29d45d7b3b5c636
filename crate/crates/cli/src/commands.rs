use std::path::Path;

use covobs::covariance::{
    dilate, dilation_span_dim, solve_intertwiners, verify_covariance, verify_povm, Existence,
};
use covobs::covariance::intertwiner_exists;
use covobs::error::{Error, Result};
use covobs::frames::{
    commutation_witness, frame_density as density_of, marginalize_to_quotient, relative_density as relative_density_of,
    FrameBundle, FrameObservable, FrameState, JointState, PositionSpace, QuantumFrame, RelativeObservable,
};
use covobs::group::{verify_group, CosetSpace, GroupAction, Subgroup};
use covobs::io::{
    matrix_to_data, read_json, resolve_catalog, ActionFile, BundleFile, DecompositionFile, FrameFile, GroupFile,
    MatrixData, PovmFile, RepFile, SystemFile,
};
use covobs::rep::{decompose, induce, IrrepCatalog, UnitaryRep};
use covobs::Tolerances;
use serde::{Deserialize, Serialize};

use crate::output::{emit_density, emit_json};
use crate::RunConfig;

/// Operator and scalar relative densities must agree this closely.
const SCALAR_AGREEMENT: f64 = 1e-10;

fn tolerances(cfg: &RunConfig) -> Tolerances {
    Tolerances { verify: cfg.tolerance, ..Tolerances::default() }
}

fn structural(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}

fn catalog_for(cfg: &RunConfig, rep: &UnitaryRep) -> Result<IrrepCatalog> {
    resolve_catalog(rep.group(), cfg.catalog_dir.as_deref())
}

pub fn group_verify(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let group: GroupFile = read_json(file)?;
    group.check_order()?;
    let report = verify_group(&group.cayley, group.identity)?;
    emit_json(cfg, &report)?;
    Ok(report.passed())
}

pub fn rep_decompose(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let rep = read_json::<RepFile>(file)?.resolve()?;
    let catalog = catalog_for(cfg, &rep)?;
    let dec = decompose(&rep, &catalog)?;
    emit_json(cfg, &DecompositionFile::from_decomposition(&dec))?;
    Ok(dec.verify(&tolerances(cfg)).passed())
}

pub fn rep_induce(cfg: &RunConfig, action: &Path, inducing: &Path, point: usize) -> Result<bool> {
    let action_file: ActionFile = read_json(action)?;
    let group = action_file.group.resolve()?;
    let action = action_file.to_action(group)?;
    if point >= action.space_size() {
        return Err(structural(format!("point {point} outside a space of {} points", action.space_size())));
    }
    let cs = CosetSpace::from_action(&action, point)?;
    let little = std::sync::Arc::new(cs.subgroup().to_group());
    let inducing = read_json::<RepFile>(inducing)?.to_rep(little)?;
    let system = induce(&cs, &inducing)?;
    emit_json(cfg, &SystemFile::from_system(&system.to_covariance()))?;
    Ok(system.verify(&tolerances(cfg)).passed())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PovmInput {
    System(SystemFile),
    Bare(PovmFile),
}

pub fn povm_verify(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let tol = tolerances(cfg);
    let report = match read_json::<PovmInput>(file)? {
        PovmInput::System(s) => verify_covariance(&s.to_system()?, &tol),
        PovmInput::Bare(p) => verify_povm(&p.to_povm()?, &tol),
    };
    emit_json(cfg, &report)?;
    Ok(report.passed())
}

pub fn povm_dilate(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let tol = tolerances(cfg);
    let system = read_json::<SystemFile>(file)?.to_system()?;
    let (imprimitivity, intertwiner) = dilate(&system, &tol)?;
    log::info!(
        "dilation on dimension {}, minimal carrier dimension {}",
        imprimitivity.rep().dim(),
        dilation_span_dim(&intertwiner, imprimitivity.measure())
    );
    let mut out = SystemFile::from_system(&imprimitivity.to_covariance());
    out.intertwiner = Some(matrix_to_data(intertwiner.matrix()));
    emit_json(cfg, &out)?;
    Ok(imprimitivity.verify(&tol).passed() && intertwiner.verify(&tol).passed())
}

#[derive(Serialize)]
struct IntertwinerSpace {
    dimension: usize,
    /// `Σ_λ m_λ m'_λ` from the two decompositions.
    expected: usize,
    existence: Existence,
    basis: Vec<MatrixData>,
}

pub fn intertwiner_solve(cfg: &RunConfig, source: &Path, target: &Path) -> Result<bool> {
    let u = read_json::<RepFile>(source)?.resolve()?;
    let v = read_json::<RepFile>(target)?.resolve()?;
    if u.group() != v.group() {
        return Err(structural("source and target are representations of different groups"));
    }
    let basis = solve_intertwiners(&u, &v, cfg.oracle_bound)?;
    let catalog = catalog_for(cfg, &u)?;
    let (du, dv) = (decompose(&u, &catalog)?, decompose(&v, &catalog)?);
    let expected = du.blocks().iter().map(|b| b.multiplicity() * dv.multiplicity(b.label())).sum();
    let existence = intertwiner_exists(&du, &dv)?;
    let space = IntertwinerSpace {
        dimension: basis.len(),
        expected,
        existence,
        basis: basis.iter().map(matrix_to_data).collect(),
    };
    emit_json(cfg, &space)?;
    Ok(space.dimension == space.expected)
}

struct LoadedFrame {
    observable: FrameObservable,
    frame: QuantumFrame,
}

fn load_frame(cfg: &RunConfig, file: &FrameFile, seed: u64, label: String) -> Result<LoadedFrame> {
    let tol = tolerances(cfg);
    let group = file.group.resolve()?;
    let catalog = resolve_catalog(&group, cfg.catalog_dir.as_deref())?;
    let rep = file.rep(&catalog)?;
    let dec = decompose(&rep, &catalog)?;
    let space = PositionSpace::new(&catalog, file.copies)?;
    let observable = space.build(&dec, &file.phases_or_isometries.to_choice(seed)?, &tol)?;
    let frame = QuantumFrame::new(file.label.clone().unwrap_or(label), dec, file.state.to_state()?, &tol)?;
    Ok(LoadedFrame { observable, frame })
}

fn frame_system_file(observable: &FrameObservable) -> SystemFile {
    let mut out = SystemFile::from_system(observable.system());
    out.intertwiner = Some(matrix_to_data(observable.intertwiner().matrix()));
    out
}

pub fn frame_build(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_frame(cfg, &read_json(file)?, cfg.seed, "frame".into())?;
    log::info!("frame observable is projective: {}", loaded.observable.is_projective(&tol));
    emit_json(cfg, &frame_system_file(&loaded.observable))?;
    Ok(loaded.observable.verify(&tol).passed())
}

fn element_names(observable: &FrameObservable) -> Vec<String> {
    let group = observable.group();
    group.elements().map(|g| group.element_name(g)).collect()
}

pub fn frame_density(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_frame(cfg, &read_json(file)?, cfg.seed, "frame".into())?;
    let density = density_of(&loaded.frame, &loaded.observable, &tol)?;
    emit_density(cfg, &density, &element_names(&loaded.observable))?;
    Ok((density.iter().sum::<f64>() - 1.0).abs() <= tol.construct)
}

pub fn frame_marginalize(cfg: &RunConfig, file: &Path, generators: &[usize]) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_frame(cfg, &read_json(file)?, cfg.seed, "frame".into())?;
    let group = loaded.observable.group().clone();
    if let Some(g) = generators.iter().find(|&&g| g >= group.order()) {
        return Err(structural(format!("generator {g} is not an element of a group of order {}", group.order())));
    }
    let subgroup = Subgroup::generated_by(group, generators)?;
    let marginal = marginalize_to_quotient(&loaded.observable, &subgroup)?;
    emit_json(cfg, &SystemFile::from_system(&marginal))?;
    Ok(verify_covariance(&marginal, &tol).passed())
}

struct LoadedBundle {
    bundle: FrameBundle,
    states: Vec<FrameState>,
    reference: usize,
    targets: Vec<usize>,
}

fn load_bundle(cfg: &RunConfig, file: &Path) -> Result<LoadedBundle> {
    let bundle_file: BundleFile = read_json(file)?;
    let n = bundle_file.frames.len();
    if bundle_file.reference >= n || bundle_file.targets.iter().any(|&t| t >= n) {
        return Err(structural(format!("bundle references a frame outside 0..{n}")));
    }
    let mut legs = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for (k, frame_file) in bundle_file.frames.iter().enumerate() {
        let loaded = load_frame(cfg, frame_file, cfg.seed.wrapping_add(k as u64), format!("F{k}"))?;
        states.push(loaded.frame.state().clone());
        legs.push((loaded.frame.label().to_string(), loaded.observable.system().clone()));
    }
    Ok(LoadedBundle { bundle: FrameBundle::new(legs)?, states, reference: bundle_file.reference, targets: bundle_file.targets })
}

impl LoadedBundle {
    fn target(&self, position: usize) -> Result<usize> {
        self.targets
            .get(position)
            .copied()
            .ok_or_else(|| structural(format!("bundle lists {} targets, no position {position}", self.targets.len())))
    }

    fn relative(&self, position: usize, tol: &Tolerances) -> Result<RelativeObservable> {
        self.bundle.relative(self.reference, self.target(position)?, tol)
    }
}

pub fn relative_build(cfg: &RunConfig, file: &Path, target: usize) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_bundle(cfg, file)?;
    let relative = loaded.relative(target, &tol)?;
    // Invariance is covariance under the trivial action on the outcomes.
    let outcomes = relative.action().space_size();
    let trivial = GroupAction::trivial(loaded.bundle.group().clone(), outcomes)?;
    let system = covobs::covariance::CovarianceSystem::new(
        trivial,
        relative.joint_rep().clone(),
        relative.povm().clone(),
    )?;
    emit_json(cfg, &SystemFile::from_system(&system))?;
    Ok(relative.verify(&tol).passed())
}

pub fn relative_density(cfg: &RunConfig, file: &Path, target: usize) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_bundle(cfg, file)?;
    let relative = loaded.relative(target, &tol)?;
    let density = relative_density_of(&relative, &JointState::Product(loaded.states.clone()), &tol)?;
    let names: Vec<String> = (0..relative.action().space_size()).map(|y| relative.action().point_name(y)).collect();
    emit_density(cfg, &density.operator, &names)?;
    let discrepancy = density.discrepancy.unwrap_or(0.0);
    if discrepancy > SCALAR_AGREEMENT {
        log::error!("operator and scalar densities differ by {discrepancy:.3e}");
        return Ok(false);
    }
    Ok(true)
}

#[derive(Serialize)]
struct WitnessOutput {
    reference: usize,
    targets: [usize; 2],
    norm: f64,
    pair: (usize, usize),
    reference_commutator: Option<f64>,
    sufficient_condition: Option<bool>,
}

pub fn paradox_witness(cfg: &RunConfig, file: &Path) -> Result<bool> {
    let tol = tolerances(cfg);
    let loaded = load_bundle(cfg, file)?;
    let first = loaded.relative(0, &tol)?;
    let second = loaded.relative(1, &tol)?;
    let w = commutation_witness(&first, &second, &tol)?;
    emit_json(
        cfg,
        &WitnessOutput {
            reference: loaded.reference,
            targets: [loaded.target(0)?, loaded.target(1)?],
            norm: w.norm,
            pair: w.pair,
            reference_commutator: w.reference_commutator,
            sufficient_condition: w.sufficient_condition,
        },
    )?;
    Ok(true)
}
