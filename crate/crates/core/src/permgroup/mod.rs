//! Permutations, Schreier–Sims groups, word search and the lemma checkers.

mod group;
mod lemma;
mod perm;
mod word;

pub use group::PermGroup;
pub use lemma::{
    check_lemma_conditions, check_prop_conditions, is_product_of_symmetric, CandidateReport, CycleConditions,
    LemmaReport, PropReport,
};
pub use perm::{CycleFactorization, Perm, MAX_DEGREE};
pub use word::{evaluate, invert_word, letter_perm, word_for, Word, MAX_SEARCH_STATES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("not a member")]
    NotMember,
    #[error("word length budget exceeded (max {0})")]
    BudgetExceeded(usize),
    #[error("word search stored {0} states without meeting")]
    StateBudgetExceeded(usize),
    #[error("invalid generator letter {0}")]
    BadLetter(i32),
    #[error("tagged transposition is not a transposition")]
    NotATransposition,
    #[error("expected {expected} partitions, got {found}")]
    PartitionCount { expected: usize, found: usize },
}
