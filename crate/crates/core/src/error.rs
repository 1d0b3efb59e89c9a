use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape {entries:?}: {reason}")]
    InvalidShape { entries: Vec<u32>, reason: String },

    #[error("values {values:?} do not form a monotone map into [{target}]")]
    NotMonotone { values: Vec<u32>, target: u32 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("the point shape has no faces")]
    PointHasNoFaces,

    #[error("shape {0} lies outside the configured support")]
    OutOfSupport(String),

    #[error("bound mismatch: {0}")]
    BoundMismatch(String),

    #[error("invalid attachment: {0}")]
    InvalidAttachment(String),

    #[error("invalid cell complex: {0}")]
    InvalidComplex(String),

    #[error("invalid presheaf: {0}")]
    InvalidPrecat(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("malformed lifting square: {0}")]
    MalformedSquare(String),

    #[error("not an n-category: {0}")]
    NotNCategory(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{stage}: pass limit {limit} exhausted without reaching a fixpoint")]
    PassLimit { stage: String, limit: usize },

    #[error("construction would exceed {0} elements")]
    ElementLimit(usize),

    #[error("enumeration limit of {0} maps exceeded")]
    MapLimit(usize),

    #[error("search bound too large: {0}")]
    BoundTooLarge(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidShape { .. }
                | Error::NotMonotone { .. }
                | Error::SizeMismatch(_)
                | Error::ShapeMismatch(_)
                | Error::OutOfSupport(_)
                | Error::BoundMismatch(_)
                | Error::InvalidAttachment(_)
                | Error::InvalidComplex(_)
                | Error::InvalidPrecat(_)
                | Error::InvalidMap(_)
                | Error::InvalidCategory(_)
                | Error::MalformedSquare(_)
                | Error::NotNCategory(_)
                | Error::Config(_)
                | Error::Json(_)
        )
    }
}
