//! Border-collision normal form with a zero left determinant.

pub mod classify;
pub mod config;
pub mod curves;
pub mod filippov;
pub mod flu;
pub mod maps;
pub mod sweep;
