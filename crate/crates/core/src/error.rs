use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground-set size {0} is outside the supported range 1..=16")]
    GroundSetSize(usize),
    #[error("element {element} is outside the ground set [1..={n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("set {0} appears more than once")]
    DuplicateSet(String),
    #[error("ground set already has the maximum width of 16 elements")]
    WidthExhausted,
    #[error("cannot delete the only element of a one-element ground set")]
    LastElement,
    #[error("family already contains every subset of the ground set")]
    FullPowerSet,
    #[error("family has no sets")]
    EmptyFamily,
    #[error("ground-set mismatch: instance uses n={instance}, family uses n={family}")]
    GroundSetMismatch { instance: u8, family: u8 },
    #[error("model parameter must be at least 1")]
    ZeroParameter,
    #[error("exhaustive oracle supports n <= 4, got n={0}")]
    OracleTooLarge(u8),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
