pub mod address;
pub mod algebra;
pub mod canonical;
pub mod enumerate;
pub mod expr;
pub mod fixtures;
pub mod ordinal;
pub mod shuffle;
