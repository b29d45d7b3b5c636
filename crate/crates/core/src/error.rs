use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Deficient irrep found by the intertwiner existence test.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Deficit {
    pub label: String,
    pub required: usize,
    pub available: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed tables, mismatched dimensions, unknown references.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("group axiom violated: {axiom} ({detail})")]
    GroupAxiom { axiom: &'static str, detail: String },

    #[error("action is not transitive: orbit of point {point} has {orbit} of {space} points")]
    NotTransitive { point: usize, orbit: usize, space: usize },

    #[error("invalid representation: {0}")]
    InvalidRep(String),

    #[error("inconsistent irrep catalog: {0}")]
    InconsistentCatalog(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no block supplied for irrep `{0}`")]
    MissingBlock(String),

    #[error("block for irrep `{label}` is not an isometry (defect {defect:.3e})")]
    NotIsometric { label: String, defect: f64 },

    #[error("no isometric intertwiner: {}", format_deficits(.deficits))]
    NoIntertwiner { deficits: Vec<Deficit> },

    #[error(
        "frame representation does not embed into {copies} regular cop{}: {}; minimal sufficient copies = {minimal_copies}",
        if *.copies == 1 { "y" } else { "ies" },
        format_deficits(.deficits)
    )]
    DeficientFrame { copies: usize, minimal_copies: usize, deficits: Vec<Deficit> },

    #[error("intertwiner oracle refused: {dim_source}x{dim_target} exceeds bound {bound}")]
    OracleBound { dim_source: usize, dim_target: usize, bound: usize },

    #[error("state is not normalized: norm = {0}")]
    Unnormalized(f64),

    #[error("POVM ranges do not commute (max commutator norm {0:.3e})")]
    NonCommuting(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shape, schema and parse failures as opposed to failed mathematical checks.
    pub fn is_structural(&self) -> bool {
        matches!(self, Error::Structure(_) | Error::Io(_) | Error::Json(_))
    }
}

fn format_deficits(deficits: &[Deficit]) -> String {
    deficits
        .iter()
        .map(|d| format!("`{}` needs multiplicity {} but only {} available", d.label, d.required, d.available))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}
