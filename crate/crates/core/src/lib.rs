pub mod bisequence;
pub mod certify;
pub mod cfrac;
pub mod cli;
pub mod constructions;
pub mod quadfield;
pub mod syntax;
