//! Exact inverse relative Satake expansions for spherical varieties.

pub mod coeffs;
pub mod rootdata;
pub mod satake;
pub mod spherical;
pub mod catalog;
pub mod euler;
