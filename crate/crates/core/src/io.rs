//! JSON file schemas and CSV output.
//!
//! Complex numbers are written as `[re, im]`; on input a bare number is
//! accepted as a real entry. A `group` field is either a built-in name such
//! as `"D4"` or an inline group file.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::covariance::{CovarianceSystem, IsometryChoice, Povm};
use crate::error::{structure, Result};
use crate::frames::{FrameChoice, FrameState};
use crate::group::{self, FiniteGroup, GroupAction};
use crate::linalg::{phase, CMatrix, CVector};
use crate::rep::{builtin_catalog, Irrep, IrrepCatalog, IsotypicDecomposition, UnitaryRep};

/// A complex entry: `[re, im]` or a real number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        Entry::Complex([z.re, z.im])
    }
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixData = Vec<Vec<Entry>>;
pub type VectorData = Vec<Entry>;

pub fn matrix_to_data(m: &CMatrix) -> MatrixData {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect()
}

pub fn matrix_from_data(rows: &MatrixData) -> Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(structure("ragged matrix rows"));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| rows[i][j].into()))
}

pub fn vector_to_data(v: &CVector) -> VectorData {
    v.iter().map(|&z| z.into()).collect()
}

pub fn vector_from_data(v: &VectorData) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&e| e.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_names: Option<Vec<String>>,
}

impl GroupFile {
    pub fn from_group(group: &FiniteGroup) -> Self {
        Self {
            name: group.name().to_string(),
            order: group.order(),
            cayley: group.cayley_rows(),
            identity: group.identity(),
            element_names: group.element_names().map(<[String]>::to_vec),
        }
    }

    pub fn check_order(&self) -> Result<()> {
        if self.order != self.cayley.len() {
            return Err(structure(format!("order {} but Cayley table has {} rows", self.order, self.cayley.len())));
        }
        Ok(())
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        self.check_order()?;
        FiniteGroup::from_table(self.name.clone(), self.cayley.clone(), self.identity, self.element_names.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin(String),
    Table(GroupFile),
}

impl GroupSpec {
    pub fn resolve(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            GroupSpec::Builtin(name) => group::builtin(name)
                .map(Arc::new)
                .ok_or_else(|| structure(format!("unknown built-in group `{name}`"))),
            GroupSpec::Table(file) => file.to_group().map(Arc::new),
        }
    }
}

/// Built-in name when the group is one, inline table otherwise.
pub fn group_spec(group: &FiniteGroup) -> GroupSpec {
    match group::builtin(group.name()) {
        Some(b) if &b == group => GroupSpec::Builtin(group.name().to_string()),
        _ => GroupSpec::Table(GroupFile::from_group(group)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionFile {
    pub group: GroupSpec,
    pub space_size: usize,
    /// `table[g][x] = Λ(g)x`.
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_names: Option<Vec<String>>,
}

impl ActionFile {
    pub fn from_action(action: &GroupAction) -> Self {
        Self {
            group: group_spec(action.group()),
            space_size: action.space_size(),
            table: action.table_rows(),
            point_names: None,
        }
    }

    pub fn to_action(&self, group: Arc<FiniteGroup>) -> Result<GroupAction> {
        let action = GroupAction::new(group, self.space_size, self.table.clone())?;
        match &self.point_names {
            Some(names) => action.with_point_names(names.clone()),
            None => Ok(action),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    /// Optional when the group is implied by context.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub dim: usize,
    pub matrices: Vec<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RepFile {
    pub fn from_rep(rep: &UnitaryRep, label: Option<String>) -> Self {
        Self {
            group: Some(group_spec(rep.group())),
            dim: rep.dim(),
            matrices: rep.matrices().iter().map(matrix_to_data).collect(),
            label,
        }
    }

    pub fn matrices(&self) -> Result<Vec<CMatrix>> {
        let matrices = self.matrices.iter().map(matrix_from_data).collect::<Result<Vec<_>>>()?;
        if let Some(m) = matrices.iter().find(|m| m.shape() != (self.dim, self.dim)) {
            return Err(structure(format!("matrix of shape {:?} in a representation of dimension {}", m.shape(), self.dim)));
        }
        Ok(matrices)
    }

    /// Builds the representation on `group`, checking it against the file's
    /// own group when one is given.
    pub fn to_rep(&self, group: Arc<FiniteGroup>) -> Result<UnitaryRep> {
        if let Some(spec) = &self.group {
            if spec.resolve()?.as_ref() != group.as_ref() {
                return Err(structure("representation file names a different group"));
            }
        }
        UnitaryRep::new(group, self.matrices()?)
    }

    pub fn resolve(&self) -> Result<UnitaryRep> {
        let spec = self.group.as_ref().ok_or_else(|| structure("representation file has no group"))?;
        UnitaryRep::new(spec.resolve()?, self.matrices()?)
    }
}

/// Labeled irreps. Used from `COVOBS_CATALOG_DIR/<group name>.json`.
pub type CatalogFile = Vec<RepFile>;

pub fn catalog_to_file(catalog: &IrrepCatalog) -> CatalogFile {
    catalog.irreps().iter().map(|i| RepFile::from_rep(i.rep(), Some(i.label().to_string()))).collect()
}

pub fn catalog_from_file(file: &CatalogFile, group: Arc<FiniteGroup>) -> Result<IrrepCatalog> {
    let irreps = file
        .iter()
        .map(|r| {
            let label = r.label.clone().ok_or_else(|| structure("catalog entry without a label"))?;
            Irrep::new(label, r.to_rep(group.clone())?)
        })
        .collect::<Result<Vec<_>>>()?;
    IrrepCatalog::new(group, irreps)
}

/// Catalog from `dir/<name>.json` if present, else the built-in one.
pub fn resolve_catalog(group: &Arc<FiniteGroup>, dir: Option<&Path>) -> Result<IrrepCatalog> {
    if let Some(dir) = dir {
        let path = dir.join(format!("{}.json", group.name()));
        if path.exists() {
            let file: CatalogFile = read_json(&path)?;
            return catalog_from_file(&file, group.clone());
        }
    }
    let catalog =
        builtin_catalog(group.name()).ok_or_else(|| structure(format!("no irrep catalog for `{}`", group.name())))?;
    if catalog.group().as_ref() != group.as_ref() {
        return Err(structure(format!("group `{}` differs from the built-in group of that name", group.name())));
    }
    Ok(catalog)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub label: String,
    pub dim: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub blocks: Vec<BlockSummary>,
    pub basis: MatrixData,
}

impl DecompositionFile {
    pub fn from_decomposition(dec: &IsotypicDecomposition) -> Self {
        Self {
            blocks: dec
                .blocks()
                .iter()
                .map(|b| BlockSummary { label: b.label().to_string(), dim: b.dim(), multiplicity: b.multiplicity() })
                .collect(),
            basis: matrix_to_data(dec.basis()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmFile {
    pub space_size: usize,
    pub dim: usize,
    pub atoms: Vec<MatrixData>,
}

impl PovmFile {
    pub fn from_povm(povm: &Povm) -> Self {
        Self { space_size: povm.space_size(), dim: povm.dim(), atoms: povm.atoms().iter().map(matrix_to_data).collect() }
    }

    pub fn to_povm(&self) -> Result<Povm> {
        if self.atoms.len() != self.space_size {
            return Err(structure(format!("{} atoms for space size {}", self.atoms.len(), self.space_size)));
        }
        let povm = Povm::new(self.atoms.iter().map(matrix_from_data).collect::<Result<_>>()?)?;
        if povm.dim() != self.dim {
            return Err(structure(format!("atoms of dimension {} but dim is {}", povm.dim(), self.dim)));
        }
        Ok(povm)
    }
}

/// A covariance system: action, representation and POVM on a shared group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub action: ActionFile,
    pub rep: RepFile,
    pub povm: PovmFile,
    /// The intertwiner a dilation or frame was built from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intertwiner: Option<MatrixData>,
}

impl SystemFile {
    pub fn from_system(system: &CovarianceSystem) -> Self {
        Self {
            action: ActionFile::from_action(system.action()),
            rep: RepFile::from_rep(system.rep(), None),
            povm: PovmFile::from_povm(system.povm()),
            intertwiner: None,
        }
    }

    pub fn to_system(&self) -> Result<CovarianceSystem> {
        let group = self.action.group.resolve()?;
        let action = self.action.to_action(group.clone())?;
        let rep = self.rep.to_rep(group)?;
        CovarianceSystem::new(action, rep, self.povm.to_povm()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateData {
    Pure(VectorData),
    Mixed(MatrixData),
}

impl StateData {
    pub fn from_state(state: &FrameState) -> Self {
        match state {
            FrameState::Pure(v) => StateData::Pure(vector_to_data(v)),
            FrameState::Mixed(m) => StateData::Mixed(matrix_to_data(m)),
        }
    }

    pub fn to_state(&self) -> Result<FrameState> {
        Ok(match self {
            StateData::Pure(v) => FrameState::Pure(vector_from_data(v)),
            StateData::Mixed(m) => FrameState::Mixed(matrix_from_data(m)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockData {
    /// A `1×1` block `e^{iθ}`.
    Phase(f64),
    Matrix(MatrixData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChoiceData {
    /// `"canonical"` or `"random"`.
    Keyword(String),
    PerLabel(BTreeMap<String, BlockData>),
}

impl Default for ChoiceData {
    fn default() -> Self {
        ChoiceData::Keyword("canonical".into())
    }
}

impl ChoiceData {
    /// `seed` feeds the `"random"` keyword.
    pub fn to_choice(&self, seed: u64) -> Result<FrameChoice> {
        match self {
            ChoiceData::Keyword(k) if k == "canonical" => Ok(FrameChoice::Canonical),
            ChoiceData::Keyword(k) if k == "random" => Ok(FrameChoice::Random(seed)),
            ChoiceData::Keyword(k) => Err(structure(format!("unknown intertwiner choice `{k}`"))),
            ChoiceData::PerLabel(map) => {
                let mut choice = IsometryChoice::new();
                for (label, block) in map {
                    let m = match block {
                        BlockData::Phase(theta) => CMatrix::from_element(1, 1, phase(*theta)),
                        BlockData::Matrix(rows) => matrix_from_data(rows)?,
                    };
                    choice.insert(label.clone(), m);
                }
                Ok(FrameChoice::Explicit(choice))
            }
        }
    }
}

fn default_copies() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub group: GroupSpec,
    pub irrep_support: Vec<SupportEntry>,
    pub state: StateData,
    #[serde(default = "default_copies")]
    pub copies: usize,
    #[serde(default)]
    pub phases_or_isometries: ChoiceData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FrameFile {
    /// `⊕_λ D^λ ⊗ 1_{m_λ}` from the irrep support.
    pub fn rep(&self, catalog: &IrrepCatalog) -> Result<UnitaryRep> {
        let support: Vec<(&str, usize)> =
            self.irrep_support.iter().map(|e| (e.label.as_str(), e.multiplicity)).collect();
        if support.iter().all(|(_, m)| *m == 0) {
            return Err(structure("frame has empty irrep support"));
        }
        catalog.assemble(&support)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleFile {
    pub frames: Vec<FrameFile>,
    pub reference: usize,
    pub targets: Vec<usize>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// `%.12g`-style formatting.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    let sig = digits as i32;
    if exponent < -5 || exponent >= sig {
        let s = format!("{:.*e}", (sig - 1) as usize, x);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        return format!("{mantissa}e{exp}");
    }
    let decimals = (sig - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `outcome_index,outcome_name,probability` rows.
pub fn density_csv(density: &[f64], names: &[String]) -> String {
    let mut out = String::from("outcome_index,outcome_name,probability\n");
    for (x, p) in density.iter().enumerate() {
        let name = names.get(x).map_or_else(|| x.to_string(), Clone::clone);
        out.push_str(&format!("{x},{name},{}\n", format_significant(*p, 12)));
    }
    out
}
