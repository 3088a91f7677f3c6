use thiserror::Error;

/// Domain errors. The variant name is what the CLI prints on exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("core has an oriented cycle through {0:?}")]
    CoreCycle(Vec<String>),
    #[error("arrow endpoint `{0}` is not a declared core vertex")]
    DanglingArrow(String),
    #[error("tail {0} has an empty period")]
    EmptyPeriod(usize),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid string: {0}")]
    InvalidString(String),
    #[error("wrong quiver type: {0}")]
    WrongType(String),
    #[error("the quiver has no right infinite path")]
    NoInfinitePath,
    #[error("not the Kronecker quiver")]
    WrongQuiver,
    #[error("polynomial {0} is reducible")]
    ReduciblePolynomial(String),
    #[error("unbounded interaction: {0}")]
    UnboundedInteraction(String),
    #[error("isomorphism undecided within the search budget")]
    Undecided,
    #[error("not finitely presented: {0}")]
    NotFinitelyPresented(String),
    #[error("not built from projective summands")]
    NotProjective,
    #[error("representation is not indecomposable")]
    NotIndecomposable,
    #[error("not a member of the path system")]
    NotMember,
    #[error("bad seed: {0}")]
    BadSeed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unavailable: {0}")]
    Unavailable(Unavailable),
}

/// Why an almost split sequence (or almost split map) is not produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unavailable {
    Projective,
    Injective,
    PseudoProjective,
    InfiniteDimStart,
    NotIndecomposable,
    /// A projective or injective at a vertex outside `Q⁺`.
    NotInQPlus,
}

impl Unavailable {
    pub fn name(self) -> &'static str {
        match self {
            Unavailable::Projective => "Projective",
            Unavailable::Injective => "Injective",
            Unavailable::PseudoProjective => "PseudoProjective",
            Unavailable::InfiniteDimStart => "InfiniteDimStart",
            Unavailable::NotIndecomposable => "NotIndecomposable",
            Unavailable::NotInQPlus => "NotInQPlus",
        }
    }
}

impl std::fmt::Display for Unavailable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::CoreCycle(_) => "CoreCycle",
            Error::DanglingArrow(_) => "DanglingArrow",
            Error::EmptyPeriod(_) => "EmptyPeriod",
            Error::Disconnected => "Disconnected",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::InvalidString(_) => "InvalidString",
            Error::WrongType(_) => "WrongType",
            Error::NoInfinitePath => "NoInfinitePath",
            Error::WrongQuiver => "WrongQuiver",
            Error::ReduciblePolynomial(_) => "ReduciblePolynomial",
            Error::UnboundedInteraction(_) => "UnboundedInteraction",
            Error::Undecided => "Undecided",
            Error::NotFinitelyPresented(_) => "NotFinitelyPresented",
            Error::NotProjective => "NotProjective",
            Error::NotIndecomposable => "NotIndecomposable",
            Error::NotMember => "NotMember",
            Error::BadSeed(_) => "BadSeed",
            Error::Parse(_) => "Parse",
            Error::Unavailable(_) => "Unavailable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
