//! Finite groups given by Cayley tables.
//!
//! Elements are identified by their index `0..order`; names are display
//! metadata only. Every constructor verifies the group axioms exhaustively, so
//! a `FiniteGroup` value is always a group.

mod action;

pub use action::{coset_space, stabilizer, CosetSpace, GroupAction, Subgroup};

use std::fmt;

use crate::error::{structure, Error, Result};
use crate::report::{AxiomCheck, Report};

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    cayley: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    element_names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

/// Groups compare by structure (table and identity); names are ignored.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.cayley == other.cayley
    }
}

impl Eq for FiniteGroup {}

/// Checks closure, identity, inverse and associativity of a Cayley table.
///
/// Only malformed shapes are errors; axiom failures are reported, with the
/// number of violating elements (or triples) as `worst_violation`.
pub fn verify_group(cayley: &[Vec<usize>], identity: usize) -> Result<Report> {
    let n = cayley.len();
    if n == 0 {
        return Err(structure("Cayley table is empty"));
    }
    if let Some((row, r)) = cayley.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(structure(format!("Cayley row {row} has length {} but order is {n}", r.len())));
    }
    if identity >= n {
        return Err(structure(format!("identity index {identity} out of range for order {n}")));
    }

    let at = |a: usize, b: usize| -> Option<usize> {
        cayley.get(a).and_then(|r| r.get(b)).copied().filter(|&v| v < n)
    };

    let closure = cayley.iter().flatten().filter(|&&v| v >= n).count();

    let identity_bad = (0..n)
        .filter(|&g| at(identity, g) != Some(g) || at(g, identity) != Some(g))
        .count();

    let inverse_bad = (0..n)
        .filter(|&g| !(0..n).any(|h| at(g, h) == Some(identity) && at(h, g) == Some(identity)))
        .count();

    let mut assoc_bad = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = at(a, b).and_then(|ab| at(ab, c));
                let right = at(b, c).and_then(|bc| at(a, bc));
                if left.is_none() || left != right {
                    assoc_bad += 1;
                }
            }
        }
    }

    Ok(Report {
        checks: vec![
            AxiomCheck::count("closure", closure),
            AxiomCheck::count("identity", identity_bad),
            AxiomCheck::count("inverse", inverse_bad),
            AxiomCheck::count("associativity", assoc_bad),
        ],
    })
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, rejecting anything that fails an axiom.
    pub fn from_table(
        name: impl Into<String>,
        cayley: Vec<Vec<usize>>,
        identity: usize,
        element_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let report = verify_group(&cayley, identity)?;
        if let Some(failed) = report.failures().next() {
            let axiom = match failed.axiom.as_str() {
                "closure" => "closure",
                "identity" => "identity",
                "inverse" => "inverse",
                _ => "associativity",
            };
            return Err(Error::GroupAxiom {
                axiom,
                detail: format!("{} violation(s)", failed.worst_violation),
            });
        }
        let n = cayley.len();
        if let Some(names) = &element_names {
            if names.len() != n {
                return Err(structure(format!("{} element names for order {n}", names.len())));
            }
        }
        let flat: Vec<usize> = cayley.into_iter().flatten().collect();
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| flat[g * n + h] == identity).expect("inverse axiom verified"))
            .collect();
        Ok(Self { name: name.into(), order: n, cayley: flat, identity, inverse, element_names })
    }

    /// Closes a list of elements under a product and tabulates it. The list must
    /// already be closed; `elements[0]` need not be the identity.
    pub(crate) fn from_elements<T, M, E>(name: &str, elements: &[T], mul: M, eq: E, names: Vec<String>) -> Result<Self>
    where
        M: Fn(&T, &T) -> T,
        E: Fn(&T, &T) -> bool,
    {
        let n = elements.len();
        let find = |t: &T| elements.iter().position(|e| eq(e, t));
        let mut cayley = vec![vec![0; n]; n];
        for (a, ea) in elements.iter().enumerate() {
            for (b, eb) in elements.iter().enumerate() {
                cayley[a][b] = find(&mul(ea, eb)).ok_or_else(|| structure(format!("{name}: element list not closed")))?;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g))
            .ok_or_else(|| structure(format!("{name}: no identity among elements")))?;
        Self::from_table(name, cayley, identity, Some(names))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_name(&self, g: usize) -> String {
        match &self.element_names {
            Some(names) => names[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.element_names.as_deref()
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.cayley.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// `Z_n`, element `k` is `a^k`.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(structure("cyclic group needs n >= 1"));
    }
    let cayley = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{k}"),
        })
        .collect();
    FiniteGroup::from_table(format!("Z{n}"), cayley, 0, Some(names))
}

pub fn trivial() -> FiniteGroup {
    cyclic(1).expect("Z1").with_name("trivial")
}

/// Index of `r^k s^j` in [`dihedral`].
#[inline]
pub fn dihedral_index(n: usize, rotation: usize, reflection: usize) -> usize {
    rotation % n + n * (reflection % 2)
}

/// `D_n` of order `2n`: symmetries of the regular n-gon. Element `k + n·j` is
/// `r^k s^j` with `s r s = r⁻¹`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(structure("dihedral group needs n >= 1"));
    }
    let order = 2 * n;
    let mut cayley = vec![vec![0; order]; order];
    for (x, row) in cayley.iter_mut().enumerate() {
        let (a, b) = (x % n, x / n);
        for (y, cell) in row.iter_mut().enumerate() {
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { a + c } else { a + n - c };
            *cell = dihedral_index(n, rot, b + d);
        }
    }
    let names = (0..order)
        .map(|x| match (x % n, x / n) {
            (0, 0) => "e".to_string(),
            (k, 0) => format!("r^{k}"),
            (0, _) => "s".to_string(),
            (k, _) => format!("r^{k}s"),
        })
        .collect();
    FiniteGroup::from_table(format!("D{n}"), cayley, 0, Some(names))
}

/// Permutations of `0..n` in lexicographic order; index 0 is the identity.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `S_n` acting on `0..n`; the product `(p·q)(i) = p(q(i))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(structure("symmetric group supported for 1 <= n <= 5"));
    }
    let perms = permutations(n);
    let names = perms
        .iter()
        .map(|p| format!("[{}]", p.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
        .collect();
    FiniteGroup::from_elements(
        &format!("S{n}"),
        &perms,
        |p, q| q.iter().map(|&i| p[i]).collect::<Vec<_>>(),
        |a, b| a == b,
        names,
    )
}

/// Quaternion group in the order `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion() -> FiniteGroup {
    // Unit quaternion (sign, axis): axis 0 = 1, 1 = i, 2 = j, 3 = k.
    type Q = (i8, u8);
    fn mul(&(sa, a): &Q, &(sb, b): &Q) -> Q {
        // Products of basis units: i j = k, j k = i, k i = j, squares = -1.
        let (s, axis) = match (a, b) {
            (0, x) | (x, 0) => (1, if a == 0 { x } else { a }),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 1) => (-1, 3),
            (2, 3) => (1, 1),
            (3, 2) => (-1, 1),
            (3, 1) => (1, 2),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        };
        (sa * sb * s, axis)
    }
    let elements: Vec<Q> = (0..4u8).flat_map(|a| [(1i8, a), (-1i8, a)]).collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    FiniteGroup::from_elements("Q8", &elements, mul, |a, b| a == b, names).expect("Q8 is a group")
}

/// `N ⋊_φ K` with product `(n₁,k₁)(n₂,k₂) = (n₁·φ_{k₁}(n₂), k₁k₂)`.
///
/// `phi[k][n]` is the image of `n` under the automorphism attached to `k`.
/// Element `(n, k)` gets index `n + |N|·k`.
pub fn semidirect(normal: &FiniteGroup, acting: &FiniteGroup, phi: &[Vec<usize>]) -> Result<FiniteGroup> {
    let (nn, nk) = (normal.order(), acting.order());
    if phi.len() != nk || phi.iter().any(|row| row.len() != nn) {
        return Err(structure(format!("automorphism table must be {nk}x{nn}")));
    }
    for (k, map) in phi.iter().enumerate() {
        let mut seen = vec![false; nn];
        for &v in map {
            if v >= nn || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Precondition(format!("phi[{k}] is not a bijection of N")));
            }
        }
        for a in normal.elements() {
            for b in normal.elements() {
                if map[normal.mul(a, b)] != normal.mul(map[a], map[b]) {
                    return Err(Error::Precondition(format!("phi[{k}] is not a homomorphism of N")));
                }
            }
        }
    }
    for k1 in acting.elements() {
        for k2 in acting.elements() {
            let k12 = acting.mul(k1, k2);
            if normal.elements().any(|n| phi[k12][n] != phi[k1][phi[k2][n]]) {
                return Err(Error::Precondition(format!(
                    "phi is not a homomorphism K -> Aut(N) at ({k1}, {k2})"
                )));
            }
        }
    }
    let order = nn * nk;
    let mut cayley = vec![vec![0; order]; order];
    for (x, row) in cayley.iter_mut().enumerate() {
        let (n1, k1) = (x % nn, x / nn);
        for (y, cell) in row.iter_mut().enumerate() {
            let (n2, k2) = (y % nn, y / nn);
            *cell = normal.mul(n1, phi[k1][n2]) + nn * acting.mul(k1, k2);
        }
    }
    let names = (0..order)
        .map(|x| format!("({},{})", normal.element_name(x % nn), acting.element_name(x / nn)))
        .collect();
    let identity = normal.identity() + nn * acting.identity();
    FiniteGroup::from_table(format!("{}x|{}", normal.name(), acting.name()), cayley, identity, Some(names))
}

/// Looks up a built-in group: `trivial`, `Z<n>`, `D<n>`, `Q8`, `S<n>`.
pub fn builtin(name: &str) -> Option<FiniteGroup> {
    let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    if name == "trivial" {
        return Some(trivial());
    }
    if name == "Q8" {
        return Some(quaternion());
    }
    if let Some(n) = parse("Z").or_else(|| parse("C")) {
        return cyclic(n).ok();
    }
    if let Some(n) = parse("D") {
        return dihedral(n).ok();
    }
    if let Some(n) = parse("S") {
        return symmetric(n).ok();
    }
    None
}
