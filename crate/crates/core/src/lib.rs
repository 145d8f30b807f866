pub mod census;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod fields;
pub mod involution;
pub mod mat2;
pub mod symspace;
pub mod verdict;
