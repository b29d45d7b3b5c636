use std::sync::Arc;

use super::FiniteGroup;
use crate::error::{structure, Error, Result};
use crate::report::{AxiomCheck, Report};

/// Left action of a finite group on `0..space_size`; `table[g][x] = Λ(g)x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    space_size: usize,
    table: Vec<usize>,
    point_names: Option<Vec<String>>,
}

fn check_action_table(group: &FiniteGroup, space_size: usize, table: &[Vec<usize>]) -> Result<()> {
    if space_size == 0 {
        return Err(structure("action space is empty"));
    }
    if table.len() != group.order() {
        return Err(structure(format!(
            "action table has {} rows for a group of order {}",
            table.len(),
            group.order()
        )));
    }
    for (g, row) in table.iter().enumerate() {
        if row.len() != space_size {
            return Err(structure(format!("action row {g} has length {} not {space_size}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= space_size) {
            return Err(structure(format!("action row {g} maps to point {bad} outside the space")));
        }
    }
    Ok(())
}

/// Checks `Λ(e) = id` and `Λ(g)Λ(h) = Λ(gh)`.
pub(crate) fn verify_action_table(group: &FiniteGroup, space_size: usize, table: &[Vec<usize>]) -> Result<Report> {
    check_action_table(group, space_size, table)?;
    let e = group.identity();
    let identity_bad = (0..space_size).filter(|&x| table[e][x] != x).count();
    let mut compat_bad = 0;
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            compat_bad += (0..space_size).filter(|&x| table[g][table[h][x]] != table[gh][x]).count();
        }
    }
    Ok(Report {
        checks: vec![AxiomCheck::count("identity", identity_bad), AxiomCheck::count("compatibility", compat_bad)],
    })
}

impl GroupAction {
    pub fn new(group: Arc<FiniteGroup>, space_size: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let report = verify_action_table(&group, space_size, &table)?;
        if let Some(failed) = report.failures().next() {
            let axiom = if failed.axiom == "identity" { "action identity" } else { "action compatibility" };
            return Err(Error::GroupAxiom { axiom, detail: format!("{} violation(s)", failed.worst_violation) });
        }
        Ok(Self { group, space_size, table: table.into_iter().flatten().collect(), point_names: None })
    }

    pub fn from_fn<F>(group: Arc<FiniteGroup>, space_size: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> usize,
    {
        let table = group.elements().map(|g| (0..space_size).map(|x| f(g, x)).collect()).collect();
        Self::new(group, space_size, table)
    }

    /// `G` acting on itself by `Λ(g)x = gx`. Free and transitive.
    pub fn left_translation(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let names = group.elements().map(|g| group.element_name(g)).collect();
        let table = (0..n * n).map(|i| group.mul(i / n, i % n)).collect();
        Self { group, space_size: n, table, point_names: Some(names) }
    }

    pub fn trivial(group: Arc<FiniteGroup>, space_size: usize) -> Result<Self> {
        Self::from_fn(group, space_size, |_, x| x)
    }

    /// `G` acting on its left cosets `gH`. Cosets are numbered by their least
    /// element; the second value maps each element to its coset.
    pub fn on_left_cosets(subgroup: &Subgroup) -> (Self, Vec<usize>) {
        let group = subgroup.group().clone();
        let cosets = subgroup.left_cosets();
        let mut coset_of = vec![0; group.order()];
        for (c, members) in cosets.iter().enumerate() {
            for &g in members {
                coset_of[g] = c;
            }
        }
        let space = cosets.len();
        let table = group
            .elements()
            .flat_map(|g| cosets.iter().map(|members| coset_of[group.mul(g, members[0])]).collect::<Vec<_>>())
            .collect();
        let names = cosets.iter().map(|m| format!("{}H", group.element_name(m[0]))).collect();
        (Self { group, space_size: space, table, point_names: Some(names) }, coset_of)
    }

    pub fn with_point_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.space_size {
            return Err(structure(format!("{} point names for {} points", names.len(), self.space_size)));
        }
        self.point_names = Some(names);
        Ok(self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.table[g * self.space_size + x]
    }

    pub fn point_name(&self, x: usize) -> String {
        match &self.point_names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.space_size).map(<[usize]>::to_vec).collect()
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.space_size];
        for g in self.group.elements() {
            seen[self.apply(g, x)] = true;
        }
        (0..self.space_size).filter(|&y| seen[y]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.space_size
    }

    pub fn is_free(&self) -> bool {
        (0..self.space_size).all(|x| self.group.elements().filter(|&g| self.apply(g, x) == x).count() == 1)
    }
}

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&g| g >= group.order()) {
            return Err(structure(format!("element {bad} not in group of order {}", group.order())));
        }
        let mut member = vec![false; group.order()];
        for &g in &elements {
            member[g] = true;
        }
        if !member[group.identity()] {
            return Err(Error::GroupAxiom { axiom: "subgroup identity", detail: "identity missing".into() });
        }
        for &a in &elements {
            if !member[group.inv(a)] {
                return Err(Error::GroupAxiom { axiom: "subgroup inverse", detail: format!("inverse of {a} missing") });
            }
            for &b in &elements {
                if !member[group.mul(a, b)] {
                    return Err(Error::GroupAxiom {
                        axiom: "subgroup closure",
                        detail: format!("{a}*{b} leaves the subset"),
                    });
                }
            }
        }
        Ok(Self { group, elements })
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let e = group.identity();
        Self { group, elements: vec![e] }
    }

    pub fn whole(group: Arc<FiniteGroup>) -> Self {
        let elements = group.elements().collect();
        Self { group, elements }
    }

    pub fn generated_by(group: Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        let mut elements = vec![group.identity()];
        let mut frontier = elements.clone();
        while let Some(x) = frontier.pop() {
            for &s in generators {
                if s >= group.order() {
                    return Err(structure(format!("generator {s} not in group")));
                }
                let y = group.mul(x, s);
                if !elements.contains(&y) {
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        Self::new(group, elements)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of a member in [`Self::elements`]; this is its index in [`Self::to_group`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// The subgroup as a standalone group, elements re-indexed by position.
    pub fn to_group(&self) -> FiniteGroup {
        let cayley = self
            .elements
            .iter()
            .map(|&a| {
                self.elements
                    .iter()
                    .map(|&b| self.position(self.group.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        let identity = self.position(self.group.identity()).expect("contains identity");
        let names = self.elements.iter().map(|&g| self.group.element_name(g)).collect();
        FiniteGroup::from_table(format!("{}<{}>", self.group.name(), self.elements.len()), cayley, identity, Some(names))
            .expect("subgroup table is a group")
    }

    /// Left cosets `gH`, each sorted, ordered by least element.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.group.order()];
        let mut cosets = Vec::new();
        for g in self.group.elements() {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = self.elements.iter().map(|&h| self.group.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                assigned[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}

/// The little group `{g : Λ(g)q = q}`.
pub fn stabilizer(action: &GroupAction, q: usize) -> Result<Subgroup> {
    if q >= action.space_size() {
        return Err(structure(format!("point {q} outside space of size {}", action.space_size())));
    }
    let elements = action.group().elements().filter(|&g| action.apply(g, q) == q).collect();
    Subgroup::new(action.group().clone(), elements)
}

/// A transitive space realized as `G/H` with `H` the stabilizer of a base point,
/// together with a section `x ↦ g_x` satisfying `Λ(g_x)q = x`.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    action: GroupAction,
    subgroup: Subgroup,
    base_point: usize,
    representatives: Vec<usize>,
    quotient_map: Vec<usize>,
}

/// Builds the coset space of a transitive action. `subgroup` must be the
/// stabilizer of `q`; each representative `g_x` is the least element index
/// with `Λ(g_x)q = x`.
pub fn coset_space(action: &GroupAction, subgroup: &Subgroup, q: usize) -> Result<CosetSpace> {
    let little = stabilizer(action, q)?;
    if subgroup.group() != action.group() {
        return Err(Error::Precondition("subgroup belongs to a different group".into()));
    }
    if little.elements() != subgroup.elements() {
        return Err(Error::Precondition(format!(
            "subgroup {:?} is not the stabilizer {:?} of point {q}",
            subgroup.elements(),
            little.elements()
        )));
    }
    let orbit = action.orbit(q);
    if orbit.len() != action.space_size() {
        return Err(Error::NotTransitive { point: q, orbit: orbit.len(), space: action.space_size() });
    }
    let group = action.group();
    let quotient_map: Vec<usize> = group.elements().map(|g| action.apply(g, q)).collect();
    let mut representatives = vec![usize::MAX; action.space_size()];
    for g in group.elements() {
        let x = quotient_map[g];
        if representatives[x] == usize::MAX {
            representatives[x] = g;
        }
    }
    Ok(CosetSpace { action: action.clone(), subgroup: little, base_point: q, representatives, quotient_map })
}

impl CosetSpace {
    /// Shorthand that computes the stabilizer itself.
    pub fn from_action(action: &GroupAction, q: usize) -> Result<Self> {
        let h = stabilizer(action, q)?;
        coset_space(action, &h, q)
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, x: usize) -> usize {
        self.representatives[x]
    }

    /// Element index → the point (equivalently the coset) it maps the base point to.
    pub fn quotient_map(&self) -> &[usize] {
        &self.quotient_map
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// `g_x⁻¹ g g_{x'}` with `x' = Λ(g⁻¹)x`; always a member of the little group.
    pub fn cocycle(&self, g: usize, x: usize) -> usize {
        let group = self.group();
        let x_prime = self.action.apply(group.inv(g), x);
        group.mul(group.mul(group.inv(self.representatives[x]), g), self.representatives[x_prime])
    }

    /// Number of `(g, x)` pairs whose cocycle falls outside the little group.
    pub fn cocycle_violations(&self) -> usize {
        let group = self.group();
        group
            .elements()
            .map(|g| (0..self.len()).filter(|&x| !self.subgroup.contains(self.cocycle(g, x))).count())
            .sum()
    }
}
