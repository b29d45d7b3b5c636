//! Independent oracles and generators shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use covobs::covariance::Povm;
use covobs::frames::FrameChoice;
use covobs::group::FiniteGroup;
use covobs::linalg::{c, commutator, frobenius, identity, kron, phase, random_unitary, singular_values, CMatrix, CVector};
use covobs::rep::{IrrepCatalog, UnitaryRep};
use rand::Rng;

/// Built-in catalogs exercised by the randomized suites.
pub const CATALOG_GROUPS: [&str; 13] = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "D3", "D4", "D5", "Q8", "S3", "S4"];

/// Z_3 frame atoms by hand: the isometry `A` from `C²` (irreps 0 and 1,
/// with `χ_j(a^k) = e^{−2πijk/3}`) into `ℓ²(Z_3)` has columns
/// `(e^{2πijg/3})_g / √3`, and `τ(g) = A† E(g) A`.
pub fn z3_atoms_by_hand() -> Vec<CMatrix> {
    let mut a = CMatrix::zeros(3, 2);
    for g in 0..3 {
        for j in 0..2 {
            a[(g, j)] = phase(2.0 * PI * (j * g) as f64 / 3.0) / 3f64.sqrt();
        }
    }
    (0..3)
        .map(|g| {
            let mut e = CMatrix::zeros(3, 3);
            e[(g, g)] = c(1.0, 0.0);
            a.adjoint() * e * &a
        })
        .collect()
}

/// `ρ_ij(y) = Σ_{g'} ρ_i(g') ρ_j(g' y)` written with the group product.
pub fn group_convolution(group: &FiniteGroup, rho_i: &[f64], rho_j: &[f64]) -> Vec<f64> {
    group.elements().map(|y| group.elements().map(|g| rho_i[g] * rho_j[group.mul(g, y)]).sum()).collect()
}

/// `τ_ij(y) = Σ_g τ̂_i(g) τ̂_j(g y)` on `H_j ⊗ H_i` with explicit Kronecker
/// factors, for frames on `S = G`.
pub fn two_leg_convolution(group: &FiniteGroup, tau_i: &Povm, tau_j: &Povm) -> Vec<CMatrix> {
    let (di, dj) = (tau_i.dim(), tau_j.dim());
    group
        .elements()
        .map(|y| {
            group.elements().fold(CMatrix::zeros(di * dj, di * dj), |acc, g| {
                acc + kron(tau_j.atom(group.mul(g, y)), tau_i.atom(g))
            })
        })
        .collect()
}

/// On `H_k ⊗ H_j ⊗ H_i`: `τ_ij` and `τ_ik` with explicit Kronecker factors.
pub fn three_leg_relatives(group: &FiniteGroup, i: &Povm, j: &Povm, k: &Povm) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let (ij, ik) = (identity(j.dim()), identity(k.dim()));
    let dim = i.dim() * j.dim() * k.dim();
    let tau_ij = group
        .elements()
        .map(|y| {
            group.elements().fold(CMatrix::zeros(dim, dim), |acc, g| {
                acc + kron(&ik, &kron(j.atom(group.mul(g, y)), i.atom(g)))
            })
        })
        .collect();
    let tau_ik = group
        .elements()
        .map(|y| {
            group.elements().fold(CMatrix::zeros(dim, dim), |acc, g| {
                acc + kron(k.atom(group.mul(g, y)), &kron(&ij, i.atom(g)))
            })
        })
        .collect();
    (tau_ij, tau_ik)
}

/// Largest commutator norm over every pair of atoms.
pub fn brute_force_commutator(first: &[CMatrix], second: &[CMatrix]) -> f64 {
    first
        .iter()
        .flat_map(|a| second.iter().map(move |b| frobenius(&commutator(a, b))))
        .fold(0.0, f64::max)
}

/// `max_{x,y} ‖τ(x)τ(y) − δ_{xy} τ(x)‖_F`.
pub fn projectivity_defect(atoms: &[CMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (x, a) in atoms.iter().enumerate() {
        for (y, b) in atoms.iter().enumerate() {
            let prod = a * b;
            let dev = if x == y { frobenius(&(prod - a)) } else { frobenius(&prod) };
            worst = worst.max(dev);
        }
    }
    worst
}

/// Isometry search: an isometric intertwiner exists iff a generic element
/// of the intertwiner space has full column rank.
pub fn isometry_search<R: Rng>(basis: &[CMatrix], rows: usize, cols: usize, rng: &mut R) -> bool {
    if cols == 0 {
        return true;
    }
    if basis.is_empty() || rows < cols {
        return false;
    }
    let mut combo = CMatrix::zeros(rows, cols);
    for b in basis {
        combo += b * c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    singular_values(&combo).last().copied().unwrap_or(0.0) > 1e-6
}

/// Frobenius distance of `m` from the span of a Frobenius-orthonormal basis.
pub fn distance_from_span(m: &CMatrix, basis: &[CMatrix]) -> f64 {
    let mut residual = m.clone();
    for b in basis {
        let coeff = b.dotc(m);
        residual -= b * coeff;
    }
    residual.norm()
}

/// A random frame for `copies` regular copies: random irrep support
/// (each multiplicity at most `copies·d_λ`, not all zero), scrambled by a
/// random unitary, with a seeded random intertwiner choice.
pub struct RandomFrame {
    pub rep: UnitaryRep,
    pub support: Vec<(String, usize)>,
    pub choice: FrameChoice,
}

pub fn random_frame<R: Rng>(catalog: &IrrepCatalog, copies: usize, seed: u64, rng: &mut R) -> RandomFrame {
    let mut support: Vec<(String, usize)>;
    loop {
        support = catalog
            .irreps()
            .iter()
            .map(|irrep| (irrep.label().to_string(), rng.random_range(0..=copies * irrep.dim())))
            .collect();
        if support.iter().any(|(_, m)| *m > 0) {
            break;
        }
    }
    let pairs: Vec<(&str, usize)> = support.iter().map(|(l, m)| (l.as_str(), *m)).collect();
    let block = catalog.assemble(&pairs).expect("support uses catalog labels");
    let w = random_unitary(block.dim(), rng);
    RandomFrame { rep: block.conjugate(&w).expect("unitary conjugation"), support, choice: FrameChoice::Random(seed) }
}

pub fn normalized(entries: &[(f64, f64)]) -> CVector {
    let v = CVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)));
    let n = v.norm();
    v / c(n, 0.0)
}
