use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({x}, {y}, {z}) is not on the unit sphere")]
    NotOnSphere { x: f64, y: f64, z: f64 },

    #[error("invalid harmonic index: |m| = {m} exceeds degree l = {l}")]
    InvalidIndex { l: usize, m: i64 },

    #[error("truncation degree {lmax} is below polynomial degree {degree}")]
    Aliasing { lmax: usize, degree: usize },

    #[error("quadrature band {have} is below the required band {need}")]
    InsufficientBand { have: usize, need: usize },

    #[error("{nodes} trapezoid nodes cannot resolve a potential of degree {degree}")]
    TooFewNodes { nodes: usize, degree: usize },

    #[error("eigensolver failed to converge on {0}")]
    NoConvergence(String),

    #[error("cluster {k} is outside the trusted band (max {band})")]
    OutsideTrustedBand { k: usize, band: usize },

    #[error("cluster {k} overlaps a neighbouring cluster disk")]
    AmbiguousCluster { k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
