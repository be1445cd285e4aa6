//! Exact solvers for coalitional manipulation of ℓ-Bloc shortlisting
//! elections.
//!
//! The crate covers winner determination with lexicographic, optimistic and
//! pessimistic tie-breaking, three ways for a coalition of manipulators to
//! evaluate an egroup, polynomial and integer-program based manipulation
//! algorithms, and brute-force oracles plus instance generators for
//! checking them.

pub mod election;
pub mod error;
pub mod ilp;
pub mod oracle;
pub mod tiebreak;
pub mod utility;

pub use election::{
    ballots_from_approvals, partition, score, winners, winners_from_scores, Ballot, CandidateId,
    CandidatePartition, Egroup, Election, ScoreVector,
};
pub use error::{Error, Result};
pub use ilp::{IntegerProgram, IpSolution, IpStatus, Relation, VarId};
pub use tiebreak::{apply_lex, simulate_lex, tie_break, Behavior, LexOrder, TieOutcome, TiePerspective, TieRule};
pub use utility::{contract, evaluate, EvalVariant, Utility, UtilityProfile};
pub mod manipulation;
pub use manipulation::{CmInstance, CmState, LexState, Manipulation, SolverState};
pub use oracle::{
    brute_cm, brute_cm_consistent, brute_tie, gen_random, reduce_setcover_to_tie, reduce_tie_to_cm,
    BruteManipulation, RandomSpec, SetCoverInstance, TieInstance,
};
