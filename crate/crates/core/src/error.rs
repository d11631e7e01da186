use crate::numerics::NumericsError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid twist vector: {0}")]
    InvalidTwist(String),
    #[error("not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("twist vector {0} describes a two-component link, not a knot")]
    Link(String),
    #[error("potential has no essential corners")]
    EmptyPotential,
    #[error("no geometric solution found ({0})")]
    NoGeometricSolution(String),
    #[error("hessian is singular at the solution (|det| = {0:e})")]
    SingularHessian(f64),
    #[error("degenerate shape parameter at tetrahedron {0}")]
    DegenerateShape(usize),
    #[error("singular gluing matrix (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("segment {0} is not alternating")]
    NonAlternatingSegment(usize),
    #[error("flattening failure: {0}")]
    FlatteningFailure(String),
    #[error("flattening system has no integer solution")]
    NoIntegerSolution,
    #[error("elimination cycle: {0}")]
    EliminationCycle(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidTwist(_) | Error::NotHyperbolic(_) | Error::Link(_) => 2,
            Error::Io(_) | Error::Schema(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
