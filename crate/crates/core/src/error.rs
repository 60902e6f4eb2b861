use thiserror::Error;

use crate::farey::Slope;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid slope {0}/{1}")]
    InvalidSlope(i128, i128),
    #[error("slopes {0} and {1} are not Farey neighbors")]
    NotNeighbors(Slope, Slope),
    #[error("regions {0}, {1}, {2} do not form a Farey triangle")]
    NotATriangle(Slope, Slope, Slope),
    #[error("integer overflow in slope arithmetic")]
    Overflow,
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("parameter outside domain: {0}")]
    Domain(String),
    #[error("region value exceeded the precision limit at slope {0}")]
    PrecisionLoss(Slope),
    #[error("triple ({0}) is reducible: x^2 + y^2 + z^2 - xyz = 4")]
    Reducible(String),
    #[error("input is off the variety (defect {0:e})")]
    OffVariety(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
