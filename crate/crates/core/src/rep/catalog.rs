//! Complete lists of irreducible unitary representations.
//!
//! Built-in catalogs use closed forms. The cyclic characters follow the
//! convention `χ_j(a^k) = exp(−2πi·jk/n)`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{character_inner, characters_equal, UnitaryRep};
use crate::error::{Error, Result};
use crate::group::{self, permutations, FiniteGroup};
use crate::linalg::{c, phase, CMatrix, ONE, ZERO};

const ORTHOGONALITY: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Irrep {
    label: String,
    rep: UnitaryRep,
    character: Vec<Complex64>,
}

impl Irrep {
    /// Checks irreducibility via `Σ_g |χ(g)|² = |G|`.
    pub fn new(label: impl Into<String>, rep: UnitaryRep) -> Result<Self> {
        let label = label.into();
        let character = rep.character();
        let norm = character_inner(&character, &character);
        if (norm - ONE).norm() > ORTHOGONALITY {
            return Err(Error::InconsistentCatalog(format!(
                "`{label}` is not irreducible: <chi, chi> = {norm}"
            )));
        }
        Ok(Self { label, rep, character })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        self.rep.matrix(g)
    }

    pub fn character(&self) -> &[Complex64] {
        &self.character
    }

    /// Two irreps are equivalent iff their characters agree.
    pub fn equivalent(&self, other: &Irrep) -> bool {
        self.rep.group() == other.rep.group() && characters_equal(&self.character, &other.character)
    }
}

/// Label order: numeric labels numerically, otherwise lexicographic.
fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// A complete set of pairwise inequivalent irreps, sorted by `(dim, label)`.
#[derive(Debug, Clone)]
pub struct IrrepCatalog {
    group: Arc<FiniteGroup>,
    irreps: Vec<Irrep>,
}

impl IrrepCatalog {
    /// Validates completeness (`Σ d² = |G|`) and character orthogonality.
    pub fn new(group: Arc<FiniteGroup>, mut irreps: Vec<Irrep>) -> Result<Self> {
        for irrep in &irreps {
            if irrep.rep.group().as_ref() != group.as_ref() {
                return Err(Error::InconsistentCatalog(format!("`{}` is defined on another group", irrep.label)));
            }
        }
        irreps.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| label_cmp(&a.label, &b.label)));
        for pair in irreps.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(Error::InconsistentCatalog(format!("duplicate label `{}`", pair[0].label)));
            }
        }
        let total: usize = irreps.iter().map(|i| i.dim() * i.dim()).sum();
        if total != group.order() {
            return Err(Error::InconsistentCatalog(format!(
                "sum of squared dimensions is {total}, group order is {}",
                group.order()
            )));
        }
        for (i, a) in irreps.iter().enumerate() {
            for b in &irreps[i + 1..] {
                let ip = character_inner(&a.character, &b.character);
                if ip.norm() > ORTHOGONALITY {
                    return Err(Error::InconsistentCatalog(format!(
                        "`{}` and `{}` are not orthogonal: {ip}",
                        a.label, b.label
                    )));
                }
            }
        }
        Ok(Self { group, irreps })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Irrep> {
        self.irreps.iter().find(|i| i.label == label)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.irreps.iter().map(|i| i.label.as_str()).collect()
    }

    /// `⊕_λ D^λ ⊗ 1_{m_λ}` in catalog order; labels absent from `multiplicities` get 0.
    pub fn assemble(&self, multiplicities: &[(&str, usize)]) -> Result<UnitaryRep> {
        for (label, _) in multiplicities {
            if self.get(label).is_none() {
                return Err(Error::Structure(format!("unknown irrep label `{label}`")));
            }
        }
        let parts: Vec<UnitaryRep> = self
            .irreps
            .iter()
            .filter_map(|irrep| {
                let m: usize = multiplicities.iter().filter(|(l, _)| *l == irrep.label).map(|(_, m)| m).sum();
                (m > 0).then(|| irrep.rep.copies(m))
            })
            .collect();
        UnitaryRep::direct_sum_all(&parts)
    }
}

fn one_dim(group: &Arc<FiniteGroup>, label: &str, values: Vec<Complex64>) -> Irrep {
    let matrices = values.into_iter().map(|v| CMatrix::from_element(1, 1, v)).collect();
    Irrep::new(label, UnitaryRep::new_unchecked(group.clone(), matrices)).expect("closed-form irrep")
}

fn from_matrices(group: &Arc<FiniteGroup>, label: &str, matrices: Vec<CMatrix>) -> Irrep {
    let rep = UnitaryRep::new(group.clone(), matrices).expect("closed-form irrep is a representation");
    Irrep::new(label, rep).expect("closed-form irrep")
}

pub fn cyclic_catalog(n: usize) -> Result<IrrepCatalog> {
    let group = Arc::new(group::cyclic(n)?);
    let irreps = (0..n)
        .map(|j| {
            let values = (0..n).map(|k| phase(-2.0 * PI * ((j * k) % n) as f64 / n as f64)).collect();
            one_dim(&group, &j.to_string(), values)
        })
        .collect();
    IrrepCatalog::new(group, irreps)
}

/// `A1` trivial, `A2` (s ↦ −1), for even `n` also `B1`/`B2` (r ↦ −1), and the
/// two-dimensional `E<h>`: `r ↦ diag(ω^h, ω^{−h})`, `s ↦ swap`.
pub fn dihedral_catalog(n: usize) -> Result<IrrepCatalog> {
    let group = Arc::new(group::dihedral(n)?);
    let order = 2 * n;
    let rs = |x: usize| (x % n, x / n);
    let sign = |b: bool| if b { c(-1.0, 0.0) } else { ONE };
    let mut irreps = vec![
        one_dim(&group, "A1", vec![ONE; order]),
        one_dim(&group, "A2", (0..order).map(|x| sign(rs(x).1 == 1)).collect()),
    ];
    if n % 2 == 0 {
        irreps.push(one_dim(&group, "B1", (0..order).map(|x| sign(rs(x).0 % 2 == 1)).collect()));
        irreps.push(one_dim(&group, "B2", (0..order).map(|x| sign((rs(x).0 + rs(x).1) % 2 == 1)).collect()));
    }
    for h in 1..=(n - 1) / 2 {
        let matrices = (0..order)
            .map(|x| {
                let (k, j) = rs(x);
                let w = phase(2.0 * PI * (h * k) as f64 / n as f64);
                let rot = CMatrix::from_row_slice(2, 2, &[w, ZERO, ZERO, w.conj()]);
                if j == 0 {
                    rot
                } else {
                    rot * CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
                }
            })
            .collect();
        irreps.push(from_matrices(&group, &format!("E{h}"), matrices));
    }
    IrrepCatalog::new(group, irreps)
}

/// Four one-dimensional characters (`A1`, `Ai`, `Aj`, `Ak`, named by the
/// generator they keep at +1) and the two-dimensional `E`.
pub fn quaternion_catalog() -> Result<IrrepCatalog> {
    let group = Arc::new(group::quaternion());
    // Element order: 1, -1, i, -i, j, -j, k, -k. Axis of x is x / 2.
    let axis = |x: usize| x / 2;
    let sgn = |x: usize| if x % 2 == 0 { 1.0 } else { -1.0 };
    let character = |keep: usize| -> Vec<Complex64> {
        (0..8).map(|x| if axis(x) == 0 || axis(x) == keep { ONE } else { c(-1.0, 0.0) }).collect()
    };
    let i = c(0.0, 1.0);
    let units = [
        CMatrix::identity(2, 2),
        CMatrix::from_row_slice(2, 2, &[i, ZERO, ZERO, -i]),
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, i, i, ZERO]),
    ];
    let matrices = (0..8).map(|x| &units[axis(x)] * c(sgn(x), 0.0)).collect();
    let irreps = vec![
        one_dim(&group, "A1", vec![ONE; 8]),
        one_dim(&group, "Ai", character(1)),
        one_dim(&group, "Aj", character(2)),
        one_dim(&group, "Ak", character(3)),
        from_matrices(&group, "E", matrices),
    ];
    IrrepCatalog::new(group, irreps)
}

fn parity(p: &[usize]) -> f64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}

/// Orthonormal basis of the complement of `(1, …, 1)` in `C^n` (Helmert vectors).
fn helmert(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n - 1, |i, k| {
        let k1 = (k + 1) as f64;
        let norm = (k1 * (k1 + 1.0)).sqrt();
        match i.cmp(&(k + 1)) {
            Ordering::Less => c(1.0 / norm, 0.0),
            Ordering::Equal => c(-k1 / norm, 0.0),
            Ordering::Greater => ZERO,
        }
    })
}

fn standard_matrix(p: &[usize], basis: &CMatrix) -> CMatrix {
    let n = p.len();
    let mut perm = CMatrix::zeros(n, n);
    for (i, &pi) in p.iter().enumerate() {
        perm[(pi, i)] = ONE;
    }
    basis.adjoint() * perm * basis
}

/// `S_3` and `S_4`: `trivial`, `sign`, `standard`, and for `S_4` also
/// `standard_sign` and the two-dimensional `two` (pulled back through `S_4 → S_3`).
pub fn symmetric_catalog(n: usize) -> Result<IrrepCatalog> {
    if !(2..=4).contains(&n) {
        return Err(Error::Structure(format!("no built-in catalog for S{n}")));
    }
    let group = Arc::new(group::symmetric(n)?);
    let perms = permutations(n);
    let signs: Vec<Complex64> = perms.iter().map(|p| c(parity(p), 0.0)).collect();
    let mut irreps = vec![one_dim(&group, "trivial", vec![ONE; perms.len()]), one_dim(&group, "sign", signs.clone())];
    if n >= 3 {
        let basis = helmert(n);
        let standard: Vec<CMatrix> = perms.iter().map(|p| standard_matrix(p, &basis)).collect();
        if n == 4 {
            let twisted = standard.iter().zip(&signs).map(|(m, s)| m * *s).collect();
            irreps.push(from_matrices(&group, "standard_sign", twisted));
            // S_4 permutes the three pairings {01|23}, {02|13}, {03|12}.
            let pairing = |a: usize, b: usize| -> usize {
                let zero_partner = if a == 0 {
                    b
                } else if b == 0 {
                    a
                } else {
                    (1..4).find(|&x| x != a && x != b).expect("four points")
                };
                zero_partner - 1
            };
            let pairs = [(0, 1), (0, 2), (0, 3)];
            let basis3 = helmert(3);
            let two = perms
                .iter()
                .map(|p| {
                    let induced: Vec<usize> = pairs.iter().map(|&(a, b)| pairing(p[a], p[b])).collect();
                    standard_matrix(&induced, &basis3)
                })
                .collect();
            irreps.push(from_matrices(&group, "two", two));
        }
        irreps.push(from_matrices(&group, "standard", standard));
    }
    IrrepCatalog::new(group, irreps)
}

/// Catalog for a built-in group name (`Z<n>`, `D<n>`, `Q8`, `S3`, `S4`, `trivial`).
pub fn builtin_catalog(name: &str) -> Option<IrrepCatalog> {
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let catalog = if name == "trivial" {
        let group = Arc::new(group::trivial());
        let irrep = one_dim(&group, "0", vec![ONE]);
        IrrepCatalog::new(group, vec![irrep])
    } else if name == "Q8" {
        quaternion_catalog()
    } else if let Some(n) = parse("Z").or_else(|| parse("C")) {
        cyclic_catalog(n)
    } else if let Some(n) = parse("D") {
        dihedral_catalog(n)
    } else if let Some(n) = parse("S") {
        symmetric_catalog(n)
    } else {
        return None;
    };
    catalog.ok()
}
