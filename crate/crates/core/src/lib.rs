//! Exact construction of highest-weight representations of `U_h(a_inf)` and
//! `U_h(A_inf)` on C-pattern bases, with verification of the defining
//! relations and of the q-number identities behind them.
//!
//! All arithmetic is exact: `q` is a rational number (or the classical
//! degeneration), pattern entries are integers, and matrix elements are
//! rational combinations of square roots of squarefree integers.

pub mod action;
pub mod cli;
pub mod identities;
pub mod patterns;
pub mod qnum;
pub mod relations;
