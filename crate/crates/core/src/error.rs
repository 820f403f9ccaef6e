use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    Domain(&'static str, f64),
    /// A tabulated weight queried outside its sampled range of `s`.
    TableRange { s: f64, s_min: f64, s_max: f64 },
    /// Malformed tabulated weight.
    Table(&'static str),
    /// Malformed or too small evaluation grid.
    Grid(&'static str),
    /// The greedy tangent selection needed an exponent above the cap.
    SlopeOverflow { k_required: f64, k_max: u128, covered_to_r: f64 },
    /// A quadrature rule too coarse for the requested polynomial degree.
    QuadratureOrder { required: usize, available: usize },
    /// The weight violates the doubling condition with the constant in use.
    NotDoubling(&'static str),
    Config(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what, v) => write!(f, "DomainError: {what} (got {v})"),
            Error::TableRange { s, s_min, s_max } => write!(
                f,
                "TableRangeError: s = {s} outside tabulated range [{s_min}, {s_max}]"
            ),
            Error::Table(msg) => write!(f, "TableError: {msg}"),
            Error::Grid(msg) => write!(f, "GridError: {msg}"),
            Error::SlopeOverflow { k_required, k_max, covered_to_r } => write!(
                f,
                "SlopeOverflow: exponent {k_required:e} exceeds k_max = {k_max}; covered up to r = {covered_to_r}"
            ),
            Error::QuadratureOrder { required, available } => write!(
                f,
                "QuadratureOrderError: rule integrates degree {available}, need {required}"
            ),
            Error::NotDoubling(msg) => write!(f, "NotDoubling: {msg}"),
            Error::Config(msg) => write!(f, "ConfigError: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
