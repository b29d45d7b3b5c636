//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so that the verdicts are always printed.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use covobs::covariance::{
    build_intertwiner, compress, dilate, intertwiner_exists, random_choice, solve_intertwiners, CovarianceSystem,
    ImprimitivitySystem, IsometryChoice, Povm,
};
use covobs::frames::{
    build_frame_observable, commutation_witness, frame_density, marginalize_to_quotient, relative_density,
    FrameBundle, FrameChoice, FrameObservable, FrameState, JointState, PositionSpace, QuantumFrame,
};
use covobs::group::{CosetSpace, FiniteGroup, GroupAction, Subgroup};
use covobs::io::{density_csv, to_json, SystemFile};
use covobs::linalg::{c, distance, identity, kron, min_eigenvalue, phase, random_state, random_unitary, CMatrix, CVector};
use covobs::rep::{builtin_catalog, decompose, induce, IrrepCatalog, UnitaryRep};
use covobs::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn catalog(name: &str) -> IrrepCatalog {
    builtin_catalog(name).unwrap_or_else(|| panic!("no catalog for {name}"))
}

fn covariance_by_hand(action: &GroupAction, rep: &UnitaryRep, povm: &Povm) -> f64 {
    let mut worst = 0.0f64;
    for g in action.group().elements() {
        let u = rep.matrix(g);
        for x in 0..povm.space_size() {
            worst = worst.max(distance(&(u * povm.atom(x) * u.adjoint()), povm.atom(action.apply(g, x))));
        }
    }
    worst
}

/// `Λ(r^k s^j) v = k + (−1)^j v mod n`, the dihedral group on polygon vertices.
fn vertex_action(group: Arc<FiniteGroup>, n: usize) -> GroupAction {
    GroupAction::from_fn(group, n, move |x, v| {
        let (k, j) = (x % n, x / n);
        if j == 0 { (k + v) % n } else { (k + n - v) % n }
    })
    .expect("dihedral vertex action")
}

/// A covariant POVM on polygon vertices: compress the system induced from
/// `r` copies of the trivial rep of a vertex stabilizer.
fn vertex_povm(n: usize, r: usize, seed: u64) -> CovarianceSystem {
    let cat = catalog(&format!("D{n}"));
    let action = vertex_action(cat.group().clone(), n);
    let cs = CosetSpace::from_action(&action, 0).unwrap();
    let little = Arc::new(cs.subgroup().to_group());
    let imprimitivity = induce(&cs, &UnitaryRep::trivial(little, r)).unwrap();
    let target = decompose(imprimitivity.rep(), &cat).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support: Vec<(&str, usize)> = target
        .blocks()
        .iter()
        .map(|b| (b.label(), rng.random_range(0..=b.multiplicity())))
        .filter(|(_, m)| *m > 0)
        .collect();
    let support = if support.is_empty() { vec![(target.blocks()[0].label(), 1)] } else { support };
    let u = cat.assemble(&support).unwrap().conjugate(&random_unitary(
        support.iter().map(|(l, m)| cat.get(l).unwrap().dim() * m).sum(),
        &mut rng,
    ))
    .unwrap();
    let source = decompose(&u, &cat).unwrap();
    let choice = random_choice(&source, &target, &mut rng).unwrap();
    let a = build_intertwiner(&source, &target, &choice, &tol()).unwrap();
    let povm = compress(&a, imprimitivity.measure(), &tol()).unwrap();
    CovarianceSystem::new(action, u, povm).unwrap()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (mut worst_norm, mut worst_pos, mut worst_cov) = (0.0f64, 0.0f64, 0.0f64);
    let mut built = 0;
    for name in CATALOG_GROUPS {
        let cat = catalog(name);
        let spaces: BTreeMap<usize, PositionSpace> =
            [1, 2].into_iter().map(|m| (m, PositionSpace::new(&cat, m).unwrap())).collect();
        let action = GroupAction::left_translation(cat.group().clone());
        for seed in 0..20u64 {
            let copies = if seed < 10 { 1 } else { 2 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let frame = random_frame(&cat, copies, seed, &mut rng);
            let source = decompose(&frame.rep, &cat).unwrap();
            let obs = spaces[&copies].build(&source, &frame.choice, &tol()).unwrap();
            let povm = obs.povm();
            worst_norm = worst_norm.max(distance(&povm.total(), &identity(povm.dim())));
            worst_pos = worst_pos.max(povm.atoms().iter().map(|a| -min_eigenvalue(a)).fold(0.0, f64::max));
            worst_cov = worst_cov.max(covariance_by_hand(&action, &frame.rep, povm));
            built += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        worst_norm <= 1e-9 && worst_pos <= 1e-9 && worst_cov <= 1e-9 && elapsed < 30.0,
        format!(
            "{built} frames; normalization {worst_norm:.1e}, negativity {worst_pos:.1e}, covariance {worst_cov:.1e}, {elapsed:.1}s"
        ),
    )
}

fn criterion_2() -> Verdict {
    let mut systems: Vec<CovarianceSystem> = Vec::new();
    for name in ["Z2", "Z3", "Z4", "Z5", "Z6", "D3", "D4", "Q8", "S3"] {
        let cat = catalog(name);
        let space = PositionSpace::new(&cat, 1).unwrap();
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let frame = random_frame(&cat, 1, seed, &mut rng);
            let source = decompose(&frame.rep, &cat).unwrap();
            systems.push(space.build(&source, &frame.choice, &tol()).unwrap().system().clone());
        }
    }
    for seed in 0..5u64 {
        systems.push(vertex_povm(3, 2, seed));
        systems.push(vertex_povm(4, 1, seed));
        systems.push(vertex_povm(5, 2, seed));
    }
    let (mut roundtrip, mut intertwining, mut isometry) = (0.0f64, 0.0f64, 0.0f64);
    for system in &systems {
        let (imp, a) = dilate(system, &tol()).unwrap();
        let a = a.matrix();
        for x in 0..system.povm().space_size() {
            let back = a.adjoint() * imp.measure().projector(x) * a;
            roundtrip = roundtrip.max(distance(&back, system.povm().atom(x)));
        }
        for g in system.action().group().elements() {
            intertwining = intertwining.max(distance(&(a * system.rep().matrix(g)), &(imp.rep().matrix(g) * a)));
        }
        isometry = isometry.max(distance(&(a.adjoint() * a), &identity(a.ncols())));
    }
    verdict(
        roundtrip <= 1e-10 && intertwining <= 1e-10 && isometry <= 1e-10,
        format!(
            "{} systems; round-trip {roundtrip:.1e}, AU-VA {intertwining:.1e}, A†A-1 {isometry:.1e}",
            systems.len()
        ),
    )
}

/// Every multiset of irreps with total dimension in `1..=max_dim`.
fn irrep_multisets(cat: &IrrepCatalog, max_dim: usize) -> Vec<Vec<usize>> {
    fn go(cat: &IrrepCatalog, start: usize, room: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        for k in start..cat.len() {
            let d = cat.irreps()[k].dim();
            if d <= room {
                current.push(k);
                go(cat, k, room - d, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(cat, 0, max_dim, &mut Vec::new(), &mut out);
    out
}

fn criterion_3() -> Verdict {
    let (mut pairs, mut dim_mismatch, mut gate_mismatch, mut sampled) = (0, 0, 0, 0);
    let mut worst_span = 0.0f64;
    for name in ["trivial", "Z2", "Z3", "Z4", "Z5", "Z6", "D3", "S3"] {
        let cat = catalog(name);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let reps: Vec<(BTreeMap<usize, usize>, UnitaryRep)> = irrep_multisets(&cat, 4)
            .into_iter()
            .map(|ms| {
                let mut counts = BTreeMap::new();
                for k in ms {
                    *counts.entry(k).or_insert(0) += 1;
                }
                let support: Vec<(&str, usize)> = counts.iter().map(|(&k, &m)| (cat.irreps()[k].label(), m)).collect();
                let block = cat.assemble(&support).unwrap();
                let w = random_unitary(block.dim(), &mut rng);
                (counts, block.conjugate(&w).unwrap())
            })
            .collect();
        let decs: Vec<_> = reps.iter().map(|(_, r)| decompose(r, &cat).unwrap()).collect();
        let mut buildable = Vec::new();
        for (iu, (cu, u)) in reps.iter().enumerate() {
            for (iv, (cv, v)) in reps.iter().enumerate() {
                pairs += 1;
                let basis = solve_intertwiners(u, v, 16).unwrap();
                let expected: usize = cu.iter().map(|(k, m)| m * cv.get(k).copied().unwrap_or(0)).sum();
                if basis.len() != expected {
                    dim_mismatch += 1;
                }
                let gate = intertwiner_exists(&decs[iu], &decs[iv]).unwrap().exists;
                if gate != isometry_search(&basis, v.dim(), u.dim(), &mut rng) {
                    gate_mismatch += 1;
                }
                if gate {
                    buildable.push((iu, iv, basis));
                }
            }
        }
        let stride = (buildable.len() / 50).max(1);
        for (iu, iv, basis) in buildable.iter().step_by(stride).take(50) {
            let choice = random_choice(&decs[*iu], &decs[*iv], &mut rng).unwrap();
            let a = build_intertwiner(&decs[*iu], &decs[*iv], &choice, &tol()).unwrap();
            worst_span = worst_span.max(distance_from_span(a.matrix(), basis));
            sampled += 1;
        }
    }
    verdict(
        dim_mismatch == 0 && gate_mismatch == 0 && worst_span <= 1e-8,
        format!(
            "{pairs} pairs; dimension mismatches {dim_mismatch}, gate disagreements {gate_mismatch}; {sampled} random intertwiners, span distance {worst_span:.1e}"
        ),
    )
}

fn z3_frame() -> (IrrepCatalog, FrameObservable) {
    let cat = catalog("Z3");
    let u = cat.assemble(&[("0", 1), ("1", 1)]).unwrap();
    let phases: IsometryChoice = [
        ("0".to_string(), CMatrix::from_element(1, 1, phase(0.0))),
        ("1".to_string(), CMatrix::from_element(1, 1, phase(0.0))),
    ]
    .into();
    let obs = build_frame_observable(&u, &cat, 1, &FrameChoice::Explicit(phases), &tol()).unwrap();
    (cat, obs)
}

fn plus_state() -> CVector {
    normalized(&[(1.0, 0.0), (1.0, 0.0)])
}

fn criterion_4() -> Verdict {
    let (_, obs) = z3_frame();
    let hand = z3_atoms_by_hand();
    let atoms = (0..3).map(|g| distance(obs.povm().atom(g), &hand[g])).fold(0.0, f64::max);
    let phi = plus_state();
    let oracle: Vec<f64> = hand.iter().map(|t| phi.dotc(&(t * &phi)).re).collect();
    let frame = QuantumFrame::new(
        "F",
        obs.intertwiner().source_decomposition().unwrap().clone(),
        FrameState::Pure(phi),
        &tol(),
    )
    .unwrap();
    let rho = frame_density(&frame, &obs, &tol()).unwrap();
    let err = rho.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let literal = oracle.iter().zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    verdict(
        err <= 1e-12 && literal <= 1e-12 && atoms <= 1e-12,
        format!("density {rho:.6?}; vs hand-computed atoms {err:.1e}, oracle vs (2/3,1/6,1/6) {literal:.1e}"),
    )
}

fn criterion_5() -> Verdict {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for name in ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8"] {
        let cat = catalog(name);
        let n = cat.group().order() as f64;
        for copies in [1, 2] {
            let space = PositionSpace::new(&cat, copies).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(copies as u64);
            let support: Vec<(&str, usize)> = cat.irreps().iter().map(|i| (i.label(), copies)).collect();
            let block = cat.assemble(&support).unwrap();
            let u = block.conjugate(&random_unitary(block.dim(), &mut rng)).unwrap();
            let source = decompose(&u, &cat).unwrap();
            let obs = space.build(&source, &FrameChoice::Random(7 + copies as u64), &tol()).unwrap();
            for b in source.blocks() {
                // A random unit vector inside this irrep's isotypic block.
                let coeffs = random_state(b.size(), &mut rng);
                let cols = source.basis().columns(b.offset(), b.size());
                let phi = cols * coeffs;
                let frame = QuantumFrame::new("F", source.clone(), FrameState::Pure(phi), &tol()).unwrap();
                let rho = frame_density(&frame, &obs, &tol()).unwrap();
                worst = worst.max(rho.iter().map(|p| (p - 1.0 / n).abs()).fold(0.0, f64::max));
                cases += 1;
            }
        }
    }
    verdict(worst <= 1e-12, format!("{cases} single-irrep states; max deviation from 1/|G| {worst:.1e}"))
}

fn product_density(state: &CVector, povm: &Povm) -> Vec<f64> {
    povm.atoms().iter().map(|a| state.dotc(&(a * state)).re).collect()
}

fn criterion_6() -> Verdict {
    let (mut invariance, mut consistency, mut oracle_atoms) = (0.0f64, 0.0f64, 0.0f64);
    let mut tested = 0;
    for name in ["Z2", "Z3", "Z4", "Z5", "D3", "Q8", "S3"] {
        let cat = catalog(name);
        let group = cat.group().clone();
        let space = PositionSpace::new(&cat, 1).unwrap();
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
            let fi = random_frame(&cat, 1, seed, &mut rng);
            let fj = random_frame(&cat, 1, seed + 50, &mut rng);
            let oi = space.build(&decompose(&fi.rep, &cat).unwrap(), &fi.choice, &tol()).unwrap();
            let oj = space.build(&decompose(&fj.rep, &cat).unwrap(), &fj.choice, &tol()).unwrap();
            let bundle =
                FrameBundle::new(vec![("i".into(), oi.system().clone()), ("j".into(), oj.system().clone())]).unwrap();
            let rel = bundle.relative(0, 1, &tol()).unwrap();
            let joint: Vec<CMatrix> =
                group.elements().map(|g| kron(fj.rep.matrix(g), fi.rep.matrix(g))).collect();
            for u in &joint {
                for atom in rel.povm().atoms() {
                    invariance = invariance.max(distance(&(u * atom * u.adjoint()), atom));
                }
            }
            let by_hand = two_leg_convolution(&group, oi.povm(), oj.povm());
            for (a, b) in rel.povm().atoms().iter().zip(&by_hand) {
                oracle_atoms = oracle_atoms.max(distance(a, b));
            }
            let (phi_i, phi_j) = (random_state(fi.rep.dim(), &mut rng), random_state(fj.rep.dim(), &mut rng));
            let state = JointState::Product(vec![FrameState::Pure(phi_i.clone()), FrameState::Pure(phi_j.clone())]);
            let rho = relative_density(&rel, &state, &tol()).unwrap();
            let scalar = group_convolution(&group, &product_density(&phi_i, oi.povm()), &product_density(&phi_j, oj.povm()));
            consistency = consistency.max(rho.operator.iter().zip(&scalar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            tested += 1;
        }
    }
    // A target on polygon vertices rather than on the group.
    for seed in 0..3u64 {
        let cat = catalog("D3");
        let group = cat.group().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(700 + seed);
        let fi = random_frame(&cat, 1, seed, &mut rng);
        let oi = build_frame_observable(&fi.rep, &cat, 1, &fi.choice, &tol()).unwrap();
        let target = vertex_povm(3, 1, seed);
        let bundle = FrameBundle::new(vec![("i".into(), oi.system().clone()), ("j".into(), target.clone())]).unwrap();
        let rel = bundle.relative(0, 1, &tol()).unwrap();
        for g in group.elements() {
            let u = kron(target.rep().matrix(g), fi.rep.matrix(g));
            for atom in rel.povm().atoms() {
                invariance = invariance.max(distance(&(&u * atom * u.adjoint()), atom));
            }
        }
        let (phi_i, phi_j) = (random_state(fi.rep.dim(), &mut rng), random_state(target.rep().dim(), &mut rng));
        let rho_i = product_density(&phi_i, oi.povm());
        let rho_j = product_density(&phi_j, target.povm());
        let scalar: Vec<f64> = (0..3)
            .map(|y| group.elements().map(|g| rho_i[g] * rho_j[target.action().apply(g, y)]).sum())
            .collect();
        let state = JointState::Product(vec![FrameState::Pure(phi_i), FrameState::Pure(phi_j)]);
        let rho = relative_density(&rel, &state, &tol()).unwrap();
        consistency = consistency.max(rho.operator.iter().zip(&scalar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        tested += 1;
    }
    let (_, obs) = z3_frame();
    let bundle =
        FrameBundle::new(vec![("i".into(), obs.system().clone()), ("j".into(), obs.system().clone())]).unwrap();
    let rel = bundle.relative(0, 1, &tol()).unwrap();
    let states = vec![FrameState::Pure(plus_state()), FrameState::Pure(plus_state())];
    let rho = relative_density(&rel, &JointState::Product(states), &tol()).unwrap();
    let single = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
    let expected = group_convolution(obs.group(), &single, &single);
    let example = rho.operator.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let literal = expected.iter().zip([0.5, 0.25, 0.25]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    verdict(
        invariance <= 1e-9 && consistency <= 1e-10 && oracle_atoms <= 1e-10 && example <= 1e-10 && literal <= 1e-12,
        format!(
            "{tested} pairs; invariance {invariance:.1e}, operator vs scalar {consistency:.1e}, atoms vs Kronecker oracle {oracle_atoms:.1e}; two Z3 frames {:.6?} (error {example:.1e})",
            rho.operator
        ),
    )
}

fn criterion_7() -> Verdict {
    let (cat, fuzzy) = z3_frame();
    let group = cat.group().clone();
    let triple = |reference: &FrameObservable| {
        let bundle = FrameBundle::new(vec![
            ("i".into(), reference.system().clone()),
            ("j".into(), fuzzy.system().clone()),
            ("k".into(), fuzzy.system().clone()),
        ])
        .unwrap();
        let ij = bundle.relative(0, 1, &tol()).unwrap();
        let ik = bundle.relative(0, 2, &tol()).unwrap();
        let w = commutation_witness(&ik, &ij, &tol()).unwrap();
        let (oracle_ij, oracle_ik) = three_leg_relatives(&group, reference.povm(), fuzzy.povm(), fuzzy.povm());
        (w, brute_force_commutator(&oracle_ik, &oracle_ij))
    };
    let (paradox, paradox_oracle) = triple(&fuzzy);

    let vacuum =
        build_frame_observable(&cat.assemble(&[("0", 1)]).unwrap(), &cat, 1, &FrameChoice::Canonical, &tol()).unwrap();
    let (commuting, commuting_oracle) = triple(&vacuum);
    let sharp = build_frame_observable(
        &covobs::rep::regular_representation(&group),
        &cat,
        1,
        &FrameChoice::Random(4),
        &tol(),
    )
    .unwrap();
    let (projective, projective_oracle) = triple(&sharp);

    let pass = paradox.norm > 0.01
        && (paradox.norm - paradox_oracle).abs() <= 1e-12
        && paradox.sufficient_condition == Some(false)
        && commuting.norm <= 1e-10
        && commuting_oracle <= 1e-10
        && commuting.sufficient_condition == Some(true)
        && projective.norm <= 1e-10
        && projective_oracle <= 1e-10;
    verdict(
        pass,
        format!(
            "three Z3 frames: norm {:.4} at pair {:?} (oracle {:.4}); commutative reference {:.1e}; projective reference {:.1e}",
            paradox.norm, paradox.pair, paradox_oracle, commuting.norm.max(commuting_oracle), projective.norm.max(projective_oracle)
        ),
    )
}

fn criterion_8() -> Verdict {
    let (mut full, mut full_ok, mut deficient, mut deficient_ok) = (0, 0, 0, 0);
    let mut worst_full = 0.0f64;
    let mut least_deficient = f64::INFINITY;
    for name in CATALOG_GROUPS {
        let cat = catalog(name);
        let max_copies = if cat.group().order() <= 8 { 2 } else { 1 };
        for copies in 1..=max_copies {
            let space = PositionSpace::new(&cat, copies).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(800 + copies as u64);
            let full_support: Vec<(&str, usize)> = cat.irreps().iter().map(|i| (i.label(), copies * i.dim())).collect();
            let block = cat.assemble(&full_support).unwrap();
            let u = block.conjugate(&random_unitary(block.dim(), &mut rng)).unwrap();
            let obs = space.build(&decompose(&u, &cat).unwrap(), &FrameChoice::Random(1), &tol()).unwrap();
            let defect = projectivity_defect(obs.povm().atoms());
            worst_full = worst_full.max(defect);
            full += 1;
            if obs.is_projective(&tol()) && defect <= 1e-8 {
                full_ok += 1;
            }

            let mut candidates: Vec<Vec<(String, usize)>> = Vec::new();
            for seed in 0..6u64 {
                let frame = random_frame(&cat, copies, seed, &mut rng);
                if frame.support.iter().zip(cat.irreps()).any(|((_, m), i)| *m < copies * i.dim()) {
                    candidates.push(frame.support);
                }
            }
            if copies > 1 {
                // Fewer regular copies than the position space holds.
                candidates.push(cat.irreps().iter().map(|i| (i.label().to_string(), i.dim())).collect());
            }
            for (k, support) in candidates.iter().enumerate() {
                let pairs: Vec<(&str, usize)> = support.iter().map(|(l, m)| (l.as_str(), *m)).collect();
                let block = cat.assemble(&pairs).unwrap();
                let u = block.conjugate(&random_unitary(block.dim(), &mut rng)).unwrap();
                let obs = space.build(&decompose(&u, &cat).unwrap(), &FrameChoice::Random(k as u64), &tol()).unwrap();
                let defect = projectivity_defect(obs.povm().atoms());
                least_deficient = least_deficient.min(defect);
                deficient += 1;
                if !obs.is_projective(&tol()) && defect > 1e-8 {
                    deficient_ok += 1;
                }
            }
        }
    }
    verdict(
        full_ok == full && deficient_ok == deficient,
        format!(
            "full support {full_ok}/{full} projective (worst defect {worst_full:.1e}); deficient {deficient_ok}/{deficient} non-projective (smallest defect {least_deficient:.2e})"
        ),
    )
}

fn subgroups(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in group.elements() {
        for b in group.elements() {
            let h = Subgroup::generated_by(group.clone(), &[a, b]).unwrap();
            if seen.insert(h.elements().to_vec()) {
                out.push(h);
            }
        }
    }
    out
}

fn criterion_9() -> Verdict {
    let mut worst = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut cases = 0;
    let mut failures = 0;
    for name in ["D3", "D4"] {
        let cat = catalog(name);
        let group = cat.group().clone();
        let all = subgroups(&group);
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let frame = random_frame(&cat, 1, seed, &mut rng);
            let obs = build_frame_observable(&frame.rep, &cat, 1, &frame.choice, &tol()).unwrap();
            for h in &all {
                let marginal = marginalize_to_quotient(&obs, h).unwrap();
                if !marginal.verify(&tol()).passed() {
                    failures += 1;
                }
                let cosets = h.left_cosets();
                for (c_idx, members) in cosets.iter().enumerate() {
                    let sum = members.iter().fold(CMatrix::zeros(obs.povm().dim(), obs.povm().dim()), |acc, &g| {
                        acc + obs.povm().atom(g)
                    });
                    worst_sum = worst_sum.max(distance(&sum, marginal.povm().atom(c_idx)));
                    for g in group.elements() {
                        let moved = group.mul(g, members[0]);
                        let image = cosets.iter().position(|m| m.contains(&moved)).unwrap();
                        let u = frame.rep.matrix(g);
                        worst = worst.max(distance(
                            &(u * marginal.povm().atom(c_idx) * u.adjoint()),
                            marginal.povm().atom(image),
                        ));
                    }
                }
                cases += 1;
            }
        }
    }
    verdict(
        failures == 0 && worst <= 1e-9 && worst_sum <= 1e-12,
        format!("{cases} marginals over all subgroups of D3 and D4; report failures {failures}, coset covariance {worst:.1e}, atom sums {worst_sum:.1e}"),
    )
}

fn pipeline_artifacts(seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    for name in ["Z5", "D4", "Q8", "S3"] {
        let cat = catalog(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&cat, 1, seed, &mut rng);
        let obs = build_frame_observable(&frame.rep, &cat, 1, &frame.choice, &tol()).unwrap();
        out.push(to_json(&SystemFile::from_system(obs.system())).unwrap());
        let phi = random_state(frame.rep.dim(), &mut rng);
        let qf = QuantumFrame::new("F", decompose(&frame.rep, &cat).unwrap(), FrameState::Pure(phi.clone()), &tol())
            .unwrap();
        let names: Vec<String> = cat.group().elements().map(|g| cat.group().element_name(g)).collect();
        out.push(density_csv(&frame_density(&qf, &obs, &tol()).unwrap(), &names));
        let bundle =
            FrameBundle::new(vec![("i".into(), obs.system().clone()), ("j".into(), obs.system().clone())]).unwrap();
        let rel = bundle.relative(0, 1, &tol()).unwrap();
        let state = JointState::Product(vec![FrameState::Pure(phi.clone()), FrameState::Pure(phi)]);
        let rho = relative_density(&rel, &state, &tol()).unwrap();
        out.push(density_csv(&rho.operator, &names));
        out.push(to_json(&rho).unwrap());
    }
    out
}

fn criterion_10() -> Verdict {
    let mut identical = 0;
    let mut total = 0;
    for seed in [0u64, 1, 42] {
        let first = pipeline_artifacts(seed);
        let second = std::thread::spawn(move || pipeline_artifacts(seed)).join().unwrap();
        for (a, b) in first.iter().zip(&second) {
            total += 1;
            if a.as_bytes() == b.as_bytes() {
                identical += 1;
            }
        }
    }
    verdict(identical == total, format!("{identical}/{total} CSV/JSON artifacts bitwise identical across runs"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("POVM axioms and covariance of random frame observables", criterion_1),
        ("dilation round-trip", criterion_2),
        ("intertwiner completeness and existence gate", criterion_3),
        ("Z3 frame density", criterion_4),
        ("uniformity for single one-dimensional irreps", criterion_5),
        ("relative observables", criterion_6),
        ("commutation witness for three frames", criterion_7),
        ("projectivity dichotomy", criterion_8),
        ("quotient marginals", criterion_9),
        ("determinism", criterion_10),
    ];
    let _ = c(0.0, 0.0);
    let _: Option<ImprimitivitySystem> = None;
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}) [{:.2}s]",
            k + 1,
            if v.pass { "PASS" } else { "FAIL" },
            name,
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
