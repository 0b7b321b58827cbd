//! Solvability certificates and unitary witnesses for systems of equations over groups.
pub mod certify;
pub mod cli;
pub mod coverings;
pub mod presentation;
pub mod system;
pub mod unitary;
pub mod words;
