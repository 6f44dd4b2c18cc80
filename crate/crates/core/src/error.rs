use thiserror::Error;

/// Errors raised while parsing Newick text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("unbalanced parentheses at byte {0}")]
    Unbalanced(usize),
    #[error("unexpected character {ch:?} at byte {pos}")]
    Unexpected { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input after ';' at byte {0}")]
    Trailing(usize),
    #[error("duplicate taxon label {0:?}")]
    DuplicateLabel(String),
    #[error("empty taxon label at byte {0}")]
    EmptyLabel(usize),
    #[error("internal vertex with {0} children is not binary")]
    NonBinary(usize),
    #[error("tree has {0} leaves, at least 3 are required")]
    TooFewLeaves(usize),
    #[error("label {0:?} is not part of the given taxon universe")]
    UnknownLabel(String),
    #[error("expected exactly two trees, found {0}")]
    TreeCount(usize),
    #[error("tree has {found} leaves but the universe has {expected} taxa")]
    UniverseSize { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Newick(#[from] NewickError),
    #[error("trees are defined over different taxon universes")]
    UniverseMismatch,
    #[error("taxon set is empty")]
    EmptyTaxonSet,
    #[error("taxon id {0} is outside the universe")]
    UnknownTaxon(usize),
    #[error("quartet needs four distinct taxa")]
    RepeatedTaxa,
    #[error("{what} is limited to n <= {max} taxa (got {n})")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("{0} needs at least {1} taxa")]
    TooSmall(&'static str, usize),
    #[error("tree is not a caterpillar")]
    NotACaterpillar,
    #[error("not a partition of the taxon set: {0}")]
    NotAPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid monotone partition: {0}")]
    InvalidMonotonePartition(String),
    #[error("partition is not a relaxed agreement forest of the two trees")]
    InvalidRaf,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("path endpoints must be two distinct leaves")]
    DegeneratePath,
    #[error("search budget exhausted")]
    Timeout,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
