use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("no image given for generator index {0}")]
    MissingImage(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("relator {relator} is violated by `{name}`")]
    RelatorViolation { name: String, relator: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("missing abelian invariants for class {0}")]
    IncompleteInvariants(usize),
    #[error("no nonzero lattice solution exists")]
    NoSolution,
    #[error("generator `{0}` has no assigned affine element")]
    Unassigned(String),
    #[error("sublattice is not invariant under the group action")]
    NotInvariant,
    #[error("quotient lattice has torsion")]
    QuotientTorsion,
    #[error("multiplicity of component {0} is not an integer")]
    NonIntegralMultiplicity(usize),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("endomorphism does not descend to the quotient mod {0}")]
    DoesNotDescend(u64),
    #[error("group table of size {size} exceeds the cap of {cap}")]
    TableCap { size: usize, cap: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
