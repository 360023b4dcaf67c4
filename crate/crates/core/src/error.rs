use thiserror::Error;

/// Errors produced by the word, arithmetic and certificate layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error in rule {rule}: {reason}")]
    Syntax { rule: usize, reason: String },
    #[error("letter '{0}' appears on a right-hand side but has no rule")]
    UndeclaredLetter(char),
    #[error("duplicate rule for letter '{0}'")]
    DuplicateRule(char),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("letter '{0}' is not in the alphabet")]
    UnknownLetter(char),
    #[error("morphism is not prolongable on '{0}'")]
    NotProlongable(char),
    #[error("base {0} is outside 2..=10")]
    InvalidBase(u32),
    #[error("letter '{letter}' is not a digit below {base}")]
    DigitOutOfRange { letter: char, base: u32 },
    #[error("operation requires a non-empty word")]
    EmptyWord,
    #[error("word contains an overlap at position {position}")]
    ContainsOverlap { position: usize },
    #[error("expected a morphism or word over {{0,1}}")]
    NotBinary,
    #[error("need {need} letters, have {have}")]
    PrefixTooShort { need: usize, have: usize },
    #[error("occurrence does not match the word: {0}")]
    OccurrenceMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
