//! Finite levels of the difference hierarchy over plays, in chain form and
//! in prefix form.

mod chain;
mod prefix;

pub use chain::{compile, eval_membership, par, CompiledCondition, DiffChain, LeveledValuation};
pub use prefix::{
    eval_prefix, prefix_to_chain, shift_union, Branch, BranchRef, PrefixExpr, PrefixSet, Ray,
    Region, Unfolding,
};
